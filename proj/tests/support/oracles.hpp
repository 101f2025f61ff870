#pragma once

// Brute-force references used to check the metric implementations. These
// deliberately avoid the DP and map-counting code paths under test.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cyclemt::testing {

inline bool is_subsequence(const std::vector<std::string>& needle,
                           const std::vector<std::string>& haystack) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < haystack.size() && j < needle.size(); ++i) {
    if (haystack[i] == needle[j]) ++j;
  }
  return j == needle.size();
}

/// Enumerates all 2^|a| subsequences of a; |a| must be small.
inline std::size_t brute_force_lcs(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::size_t best = 0;
  const std::uint32_t subsets = 1u << a.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

/// All n-gram windows, joined with a separator that cannot occur in tokens.
inline std::vector<std::string> windows(const std::vector<std::string>& tokens, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) gram += '\x1f';
      gram += tokens[i + k];
    }
    out.push_back(std::move(gram));
  }
  return out;
}

/// Size of the multiset intersection of the two window lists.
inline std::size_t multiset_overlap(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b, std::size_t n) {
  auto wa = windows(a, n);
  auto wb = windows(b, n);
  std::sort(wa.begin(), wa.end());
  std::sort(wb.begin(), wb.end());
  std::vector<std::string> common;
  std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(common));
  return common.size();
}

struct Prf {
  double r;
  double p;
  double f;
};

inline Prf prf(std::size_t matched, std::size_t ref_total, std::size_t cand_total) {
  const double r = ref_total ? double(matched) / double(ref_total) : 0.0;
  const double p = cand_total ? double(matched) / double(cand_total) : 0.0;
  const double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
  return {r, p, f};
}

/// Nine-component sum computed from the brute-force pieces.
inline double oracle_consistency_total(const std::vector<std::string>& ref,
                                       const std::vector<std::string>& cand) {
  const auto size_of = [](const std::vector<std::string>& t, std::size_t n) {
    return t.size() >= n ? t.size() - n + 1 : 0;
  };
  const Prf r1 = prf(multiset_overlap(ref, cand, 1), size_of(ref, 1), size_of(cand, 1));
  const Prf r2 = prf(multiset_overlap(ref, cand, 2), size_of(ref, 2), size_of(cand, 2));
  const Prf rl = prf(brute_force_lcs(ref, cand), ref.size(), cand.size());
  return r1.r + r1.p + r1.f + r2.r + r2.p + r2.f + rl.r + rl.p + rl.f;
}

}  // namespace cyclemt::testing
