#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cyclemt/backend.hpp"
#include "cyclemt/metrics.hpp"
#include "cyclemt/tokenization.hpp"

namespace cyclemt {

enum class ConsistencyMetric { kRougeSum, kBleu };

ConsistencyMetric parse_metric(std::string_view name);  // "rouge_sum" | "bleu"
std::string_view to_string(ConsistencyMetric metric);

struct PipelineConfig {
  std::size_t n_candidates = 4;
  double temp_step = 0.15;
  double max_temp = 1.5;
  /// Candidate i gets seed + i; nullopt sends no seed.
  std::optional<std::int64_t> seed = 0;
  /// Static knobs copied onto every forward candidate.
  std::optional<int> top_k;
  std::optional<int> num_beams;
  /// Backward translation params; the seed is filled from `seed` when unset.
  DecodeParams backward{};
  std::size_t parallelism = 4;
  ConsistencyMetric metric = ConsistencyMetric::kRougeSum;
  std::size_t bleu_order = 4;

  /// Throws UsageError on n_candidates == 0, parallelism == 0, step <= 0,
  /// max_temp < 0 or bleu_order == 0.
  void validate() const;
};

/// Parameter count times forward translations. Backward passes are tracked
/// separately and never enter `total`.
struct ComputeCost {
  double parameter_count = 0.0;
  std::size_t forward_passes = 0;
  double total = 0.0;
  std::size_t backward_passes = 0;

  static ComputeCost of(double parameter_count, std::size_t forward_passes,
                        std::size_t backward_passes = 0);

  friend bool operator==(const ComputeCost&, const ComputeCost&) = default;
};

struct CandidateReport {
  std::size_t index = 0;
  DecodeParams forward_params;
  std::string forward_text;
  std::string backward_text;
  ConsistencyScore score;
  BleuScore bleu;
  /// The value the argmax ran over (score.total or bleu.value).
  double selection_value = 0.0;
  std::optional<std::string> error;

  bool failed() const noexcept { return error.has_value(); }
};

struct SelectionResult {
  std::string original_text;
  LanguageTag source;
  LanguageTag target;
  std::vector<CandidateReport> candidates;
  std::size_t selected_index = 0;
  ComputeCost compute_cost;

  const CandidateReport& selected() const { return candidates.at(selected_index); }
};

/// temperature_i = min(i * step, max_temp) for i = 0..n-1, quantized to 1e-9
/// so the schedule reads as the decimals it denotes. Seeds are base_seed + i
/// when base_seed is given. Throws UsageError when n == 0, step <= 0 or
/// max_temp < 0.
std::vector<DecodeParams> temperature_schedule(std::size_t n_candidates, double step = 0.15,
                                               double max_temp = 1.5,
                                               std::optional<std::int64_t> base_seed = {});

/// Index of the maximum; ties go to the lowest index. Throws UsageError on
/// an empty span.
std::size_t select_best(std::span<const double> scores);

/// Tokenizes both texts for `language` and scores them with consistency().
ConsistencyScore score_cycle(std::string_view original, std::string_view back_translated,
                             const LanguageTag& language,
                             const TokenizerRegistry& registry = default_registry());

/// Self-reflective translation: N forward candidates on a temperature
/// schedule, one back-translation each, consistency scoring, argmax.
class Pipeline {
 public:
  Pipeline(std::shared_ptr<Backend> backend, ModelInfo model, PipelineConfig config,
           std::shared_ptr<const TokenizerRegistry> registry = nullptr);

  /// Candidates whose forward or backward call throws are kept with score 0
  /// and an error note. Throws PipelineError when every candidate failed.
  SelectionResult run(std::string_view text, const LanguageTag& source,
                      const LanguageTag& target) const;

  const PipelineConfig& config() const noexcept { return config_; }
  const ModelInfo& model() const noexcept { return model_; }
  Backend& backend() const noexcept { return *backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  ModelInfo model_;
  PipelineConfig config_;
  std::shared_ptr<const TokenizerRegistry> registry_;
};

SelectionResult self_reflective_translate(std::string_view text, const LanguageTag& source,
                                          const LanguageTag& target, std::size_t n_candidates,
                                          std::shared_ptr<Backend> backend, const ModelInfo& model,
                                          PipelineConfig config = {});

}  // namespace cyclemt
