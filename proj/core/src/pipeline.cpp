#include "cyclemt/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "cyclemt/error.hpp"
#include "cyclemt/parallel.hpp"

namespace cyclemt {

ConsistencyMetric parse_metric(std::string_view name) {
  if (name == "rouge_sum") return ConsistencyMetric::kRougeSum;
  if (name == "bleu") return ConsistencyMetric::kBleu;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected rouge_sum or bleu)");
}

std::string_view to_string(ConsistencyMetric metric) {
  return metric == ConsistencyMetric::kRougeSum ? "rouge_sum" : "bleu";
}

void PipelineConfig::validate() const {
  if (n_candidates == 0) throw UsageError("number of candidates must satisfy N >= 1");
  if (parallelism == 0) throw UsageError("parallelism must be >= 1");
  if (!(temp_step > 0.0)) throw UsageError("temperature step must be > 0");
  if (!(max_temp >= 0.0)) throw UsageError("max temperature must be >= 0");
  if (bleu_order == 0) throw UsageError("BLEU order must be >= 1");
  if (seed && *seed < 0) throw UsageError("seed must be >= 0");
  backward.validate();
}

ComputeCost ComputeCost::of(double parameter_count, std::size_t forward_passes,
                            std::size_t backward_passes) {
  return ComputeCost{parameter_count, forward_passes,
                     parameter_count * static_cast<double>(forward_passes), backward_passes};
}

std::vector<DecodeParams> temperature_schedule(std::size_t n_candidates, double step,
                                               double max_temp,
                                               std::optional<std::int64_t> base_seed) {
  if (n_candidates == 0) throw UsageError("number of candidates must satisfy N >= 1");
  if (!(step > 0.0)) throw UsageError("temperature step must be > 0");
  if (!(max_temp >= 0.0)) throw UsageError("max temperature must be >= 0");
  std::vector<DecodeParams> schedule(n_candidates);
  for (std::size_t i = 0; i < n_candidates; ++i) {
    const double raw = std::min(static_cast<double>(i) * step, max_temp);
    schedule[i].temperature = std::round(raw * 1e9) / 1e9;
    if (base_seed) schedule[i].seed = *base_seed + static_cast<std::int64_t>(i);
  }
  return schedule;
}

std::size_t select_best(std::span<const double> scores) {
  if (scores.empty()) throw UsageError("cannot select from zero candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

ConsistencyScore score_cycle(std::string_view original, std::string_view back_translated,
                             const LanguageTag& language, const TokenizerRegistry& registry) {
  return consistency(registry.tokenize(original, language),
                     registry.tokenize(back_translated, language));
}

Pipeline::Pipeline(std::shared_ptr<Backend> backend, ModelInfo model, PipelineConfig config,
                   std::shared_ptr<const TokenizerRegistry> registry)
    : backend_(std::move(backend)),
      model_(std::move(model)),
      config_(std::move(config)),
      registry_(std::move(registry)) {
  if (!backend_) throw ConfigError("pipeline needs a backend");
  model_.validate();
  config_.validate();
  if (!registry_) {
    registry_ = std::shared_ptr<const TokenizerRegistry>(std::shared_ptr<void>(),
                                                         &default_registry());
  }
}

SelectionResult Pipeline::run(std::string_view text, const LanguageTag& source_tag,
                              const LanguageTag& target_tag) const {
  if (text.empty()) throw UsageError("cannot translate empty text");
  const LanguageTag& source = registry_->language(source_tag.code());
  const LanguageTag& target = registry_->language(target_tag.code());
  const TokenSequence original = registry_->tokenize(text, source);

  std::vector<DecodeParams> schedule = temperature_schedule(
      config_.n_candidates, config_.temp_step, config_.max_temp, config_.seed);
  for (auto& params : schedule) {
    params.top_k = config_.top_k;
    params.num_beams = config_.num_beams;
  }
  DecodeParams backward = config_.backward;
  if (!backward.seed && config_.seed) backward.seed = config_.seed;

  SelectionResult result{std::string(text), source, target, {}, 0, {}};
  result.candidates.resize(config_.n_candidates);

  parallel_for(config_.n_candidates, config_.parallelism, [&](std::size_t i) {
    CandidateReport& candidate = result.candidates[i];
    candidate.index = i;
    candidate.forward_params = schedule[i];
    try {
      candidate.forward_text = backend_->translate(
          TranslationRequest{std::string(text), source, target, schedule[i], model_.name});
      candidate.backward_text = backend_->translate(
          TranslationRequest{candidate.forward_text, target, source, backward, model_.name});
      const TokenSequence cycled = registry_->tokenize(candidate.backward_text, source);
      candidate.score = consistency(original, cycled);
      candidate.bleu = bleu(original, cycled, config_.bleu_order);
      candidate.selection_value = config_.metric == ConsistencyMetric::kRougeSum
                                      ? candidate.score.total
                                      : candidate.bleu.value;
    } catch (const ConfigError&) {
      throw;
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      candidate.error = e.what();
      candidate.score = {};
      candidate.bleu = {};
      candidate.selection_value = 0.0;
    }
  });

  std::vector<double> values;
  std::string causes;
  values.reserve(result.candidates.size());
  for (const auto& candidate : result.candidates) {
    values.push_back(candidate.selection_value);
    if (candidate.failed()) {
      causes += "\n  candidate " + std::to_string(candidate.index) + ": " + *candidate.error;
    }
  }
  const bool all_failed = std::all_of(result.candidates.begin(), result.candidates.end(),
                                      [](const CandidateReport& c) { return c.failed(); });
  if (all_failed) {
    throw PipelineError("all " + std::to_string(result.candidates.size()) +
                        " candidates failed:" + causes);
  }
  result.selected_index = select_best(values);
  result.compute_cost =
      ComputeCost::of(model_.parameter_count, config_.n_candidates, config_.n_candidates);
  return result;
}

SelectionResult self_reflective_translate(std::string_view text, const LanguageTag& source,
                                          const LanguageTag& target, std::size_t n_candidates,
                                          std::shared_ptr<Backend> backend, const ModelInfo& model,
                                          PipelineConfig config) {
  config.n_candidates = n_candidates;
  return Pipeline(std::move(backend), model, std::move(config)).run(text, source, target);
}

}  // namespace cyclemt
