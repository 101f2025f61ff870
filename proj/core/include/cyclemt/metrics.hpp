#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cyclemt/tokenization.hpp"

namespace cyclemt {

/// Recall, precision and F1 of one ROUGE variant. Every field is in [0,1];
/// any ratio with a zero denominator is 0.
struct RougeComponent {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  static RougeComponent from_counts(std::size_t matched, std::size_t reference_total,
                                    std::size_t candidate_total);

  double sum() const noexcept { return recall + precision + f1; }
};

/// Cycle-consistency score: ROUGE-1, ROUGE-2 and ROUGE-L with p/r/f each,
/// summed into `total` in [0, 9]. 9.0 means the cycle reproduced the original.
struct ConsistencyScore {
  RougeComponent rouge1;
  RougeComponent rouge2;
  RougeComponent rouge_l;
  double total = 0.0;
};

struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 0.0;
  std::vector<double> precisions;  // p_1 .. p_N
  std::size_t max_order = 0;
};

/// O(|a|·|b|) time, O(min) memory.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);
std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

/// Σ over n-gram types of min(count in a, count in b).
std::size_t clipped_overlap(const NgramCounts& a, const NgramCounts& b);

/// ROUGE-N with `reference` as reference. Throws UsageError when n == 0.
RougeComponent rouge_n(const TokenSequence& reference, const TokenSequence& candidate,
                       std::size_t n);

RougeComponent rouge_l(const TokenSequence& reference, const TokenSequence& candidate);

/// The consistency sum with `original` as reference and `cycled` as candidate.
/// Throws UsageError when the two sequences carry different languages.
ConsistencyScore consistency(const TokenSequence& original, const TokenSequence& cycled);

/// Single-reference sentence BLEU with uniform weights 1/N, no smoothing and
/// BP = min(1, exp(1 - r/c)). An empty candidate scores 0 with BP 0.
BleuScore bleu(const TokenSequence& reference, const TokenSequence& candidate,
               std::size_t max_order = 4);

}  // namespace cyclemt
