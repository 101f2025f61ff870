#include "cyclemt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cyclemt/error.hpp"

namespace cyclemt {

namespace {

double ratio(std::size_t numerator, std::size_t denominator) {
  return denominator == 0 ? 0.0
                          : static_cast<double>(numerator) / static_cast<double>(denominator);
}

double unit_clamp(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

RougeComponent RougeComponent::from_counts(std::size_t matched, std::size_t reference_total,
                                           std::size_t candidate_total) {
  RougeComponent c;
  c.recall = ratio(matched, reference_total);
  c.precision = ratio(matched, candidate_total);
  const double denom = c.precision + c.recall;
  c.f1 = denom > 0.0 ? unit_clamp(2.0 * c.precision * c.recall / denom) : 0.0;
  return c;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  // Rolling row over the shorter sequence.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = x == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row.back();
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  return lcs_length(std::span<const std::string>(a.tokens), std::span<const std::string>(b.tokens));
}

std::size_t clipped_overlap(const NgramCounts& a, const NgramCounts& b) {
  std::size_t overlap = 0;
  const NgramCounts& small = a.size() <= b.size() ? a : b;
  const NgramCounts& large = a.size() <= b.size() ? b : a;
  for (const auto& [gram, count] : small) {
    const auto it = large.find(gram);
    if (it != large.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

RougeComponent rouge_n(const TokenSequence& reference, const TokenSequence& candidate,
                       std::size_t n) {
  const NgramCounts ref = ngrams(reference, n);
  const NgramCounts cand = ngrams(candidate, n);
  return RougeComponent::from_counts(clipped_overlap(ref, cand), total_count(ref),
                                     total_count(cand));
}

RougeComponent rouge_l(const TokenSequence& reference, const TokenSequence& candidate) {
  return RougeComponent::from_counts(lcs_length(reference, candidate), reference.size(),
                                     candidate.size());
}

ConsistencyScore consistency(const TokenSequence& original, const TokenSequence& cycled) {
  if (!(original.language == cycled.language)) {
    throw UsageError("consistency: language mismatch (" + original.language.code() + " vs " +
                     cycled.language.code() + ")");
  }
  ConsistencyScore score;
  score.rouge1 = rouge_n(original, cycled, 1);
  score.rouge2 = rouge_n(original, cycled, 2);
  score.rouge_l = rouge_l(original, cycled);
  score.total = score.rouge1.sum() + score.rouge2.sum() + score.rouge_l.sum();
  return score;
}

BleuScore bleu(const TokenSequence& reference, const TokenSequence& candidate,
               std::size_t max_order) {
  if (max_order == 0) throw UsageError("BLEU max_order must be >= 1");
  BleuScore score;
  score.max_order = max_order;
  score.precisions.assign(max_order, 0.0);
  if (candidate.empty()) return score;

  bool any_zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_order; ++n) {
    const NgramCounts cand = ngrams(candidate, n);
    const double p = ratio(clipped_overlap(cand, ngrams(reference, n)), total_count(cand));
    score.precisions[n - 1] = p;
    if (p > 0.0) {
      log_sum += std::log(p);
    } else {
      any_zero = true;
    }
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  score.brevity_penalty = c >= r ? 1.0 : std::exp(1.0 - r / c);
  score.value =
      any_zero ? 0.0
               : unit_clamp(score.brevity_penalty *
                            std::exp(log_sum / static_cast<double>(max_order)));
  return score;
}

}  // namespace cyclemt
