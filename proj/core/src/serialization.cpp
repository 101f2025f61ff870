#include "cyclemt/serialization.hpp"

#include "cyclemt/error.hpp"

namespace cyclemt {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& value) {
  return value ? json(*value) : json();
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

void check_version(const json& report, std::string_view kind) {
  if (report.value("report_version", 0) != kReportVersion) {
    throw ConfigError("unsupported report_version");
  }
  if (report.value("kind", std::string()) != kind) {
    throw ConfigError("expected a " + std::string(kind) + " report");
  }
}

}  // namespace

void to_json(json& j, const DecodeParams& params) {
  j = json{{"temperature", params.temperature},
           {"seed", optional_json(params.seed)},
           {"top_k", optional_json(params.top_k)},
           {"num_beams", optional_json(params.num_beams)}};
}

void from_json(const json& j, DecodeParams& params) {
  params.temperature = j.at("temperature").get<double>();
  params.seed = optional_from<std::int64_t>(j, "seed");
  params.top_k = optional_from<int>(j, "top_k");
  params.num_beams = optional_from<int>(j, "num_beams");
}

void to_json(json& j, const RougeComponent& component) {
  j = json{{"recall", component.recall},
           {"precision", component.precision},
           {"f1", component.f1}};
}

void from_json(const json& j, RougeComponent& component) {
  component.recall = j.at("recall").get<double>();
  component.precision = j.at("precision").get<double>();
  component.f1 = j.at("f1").get<double>();
}

void to_json(json& j, const ConsistencyScore& score) {
  j = json{{"rouge1", score.rouge1},
           {"rouge2", score.rouge2},
           {"rougeL", score.rouge_l},
           {"total", score.total}};
}

void from_json(const json& j, ConsistencyScore& score) {
  score.rouge1 = j.at("rouge1").get<RougeComponent>();
  score.rouge2 = j.at("rouge2").get<RougeComponent>();
  score.rouge_l = j.at("rougeL").get<RougeComponent>();
  score.total = j.at("total").get<double>();
}

void to_json(json& j, const BleuScore& score) {
  j = json{{"value", score.value},
           {"brevity_penalty", score.brevity_penalty},
           {"precisions", score.precisions},
           {"max_order", score.max_order}};
}

void from_json(const json& j, BleuScore& score) {
  score.value = j.at("value").get<double>();
  score.brevity_penalty = j.at("brevity_penalty").get<double>();
  score.precisions = j.at("precisions").get<std::vector<double>>();
  score.max_order = j.at("max_order").get<std::size_t>();
}

void to_json(json& j, const ModelInfo& model) {
  j = json{{"name", model.name}, {"parameter_count", model.parameter_count}};
}

void from_json(const json& j, ModelInfo& model) {
  model.name = j.at("name").get<std::string>();
  model.parameter_count = j.at("parameter_count").get<double>();
}

void to_json(json& j, const ComputeCost& cost) {
  j = json{{"parameter_count", cost.parameter_count},
           {"forward_passes", cost.forward_passes},
           {"total", cost.total},
           {"backward_passes", cost.backward_passes}};
}

void from_json(const json& j, ComputeCost& cost) {
  cost.parameter_count = j.at("parameter_count").get<double>();
  cost.forward_passes = j.at("forward_passes").get<std::size_t>();
  cost.total = j.at("total").get<double>();
  cost.backward_passes = j.value("backward_passes", std::size_t{0});
}

void to_json(json& j, const CandidateReport& candidate) {
  j = json{{"index", candidate.index},
           {"forward_params", candidate.forward_params},
           {"forward_text", candidate.forward_text},
           {"backward_text", candidate.backward_text},
           {"score", candidate.score},
           {"bleu", candidate.bleu},
           {"selection_value", candidate.selection_value},
           {"error", optional_json(candidate.error)}};
}

void to_json(json& j, const SelectionResult& result) {
  j = json{{"original", {{"text", result.original_text}, {"language", result.source}}},
           {"target", result.target},
           {"candidates", result.candidates},
           {"selected_index", result.selected_index},
           {"selected_translation", result.selected().forward_text},
           {"compute_cost", result.compute_cost}};
}

void to_json(json& j, const SentenceScore& score) {
  j = json{{"id", score.id}, {"total", score.total}, {"failed", score.failed}};
}

void from_json(const json& j, SentenceScore& score) {
  score.id = j.at("id").get<std::string>();
  score.total = j.at("total").get<double>();
  score.failed = j.value("failed", false);
}

void to_json(json& j, const ScalingPoint& point) {
  j = json{{"model", point.model},
           {"n_candidates", point.n_candidates},
           {"compute", point.compute},
           {"mean_total", point.mean_total},
           {"std_total", point.std_total},
           {"n_sentences", point.n_sentences},
           {"n_failures", point.n_failures}};
}

void from_json(const json& j, ScalingPoint& point) {
  point.model = j.at("model").get<ModelInfo>();
  point.n_candidates = j.at("n_candidates").get<std::size_t>();
  point.compute = j.at("compute").get<double>();
  point.mean_total = j.at("mean_total").get<double>();
  point.std_total = j.value("std_total", 0.0);
  point.n_sentences = j.value("n_sentences", std::size_t{0});
  point.n_failures = j.value("n_failures", std::size_t{0});
}

json matrix_report(const BenchmarkMatrix& matrix) {
  json cells = json::array();
  for (const auto& [pair, stats] : matrix.cells) {
    cells.push_back({{"source", pair.first},
                     {"target", pair.second},
                     {"mean_total", stats.mean_total},
                     {"std_total", stats.std_total},
                     {"n_sentences", stats.n_sentences},
                     {"n_failures", stats.n_failures},
                     {"scores", stats.scores}});
  }
  json empty = json::array();
  for (const auto& pair : matrix.empty_cells) {
    empty.push_back({{"source", pair.first}, {"target", pair.second}, {"n_sentences", 0}});
  }
  return json{{"report_version", kReportVersion},
              {"kind", "matrix"},
              {"model", matrix.model},
              {"n_candidates", matrix.n_candidates},
              {"compute_per_sentence", matrix.compute_per_sentence},
              {"languages", matrix.languages},
              {"cells", std::move(cells)},
              {"empty_cells", std::move(empty)}};
}

BenchmarkMatrix matrix_from_report(const json& report) {
  check_version(report, "matrix");
  BenchmarkMatrix matrix;
  matrix.model = report.at("model").get<ModelInfo>();
  matrix.n_candidates = report.at("n_candidates").get<std::size_t>();
  matrix.compute_per_sentence = report.at("compute_per_sentence").get<ComputeCost>();
  matrix.languages = report.at("languages").get<std::vector<LanguageTag>>();
  for (const auto& cell : report.at("cells")) {
    CellStats stats;
    stats.mean_total = cell.at("mean_total").get<double>();
    stats.std_total = cell.at("std_total").get<double>();
    stats.n_sentences = cell.at("n_sentences").get<std::size_t>();
    stats.n_failures = cell.at("n_failures").get<std::size_t>();
    stats.scores = cell.at("scores").get<std::vector<SentenceScore>>();
    matrix.cells.emplace(
        LanguagePair(cell.at("source").get<std::string>(), cell.at("target").get<std::string>()),
        std::move(stats));
  }
  for (const auto& cell : report.at("empty_cells")) {
    matrix.empty_cells.emplace_back(cell.at("source").get<std::string>(),
                                    cell.at("target").get<std::string>());
  }
  return matrix;
}

json scaling_report(std::span<const ScalingPoint> points) {
  return json{{"report_version", kReportVersion},
              {"kind", "scaling"},
              {"points", std::vector<ScalingPoint>(points.begin(), points.end())}};
}

std::vector<ScalingPoint> scaling_from_report(const json& report) {
  check_version(report, "scaling");
  return report.at("points").get<std::vector<ScalingPoint>>();
}

}  // namespace cyclemt
