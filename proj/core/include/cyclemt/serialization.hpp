#pragma once

// JSON forms of the library's result types. Reports carry
// "report_version": 1.

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyclemt/backend.hpp"
#include "cyclemt/benchmark.hpp"
#include "cyclemt/metrics.hpp"
#include "cyclemt/pipeline.hpp"
#include "cyclemt/tokenization.hpp"

namespace cyclemt {

inline constexpr int kReportVersion = 1;

void to_json(nlohmann::json& j, const DecodeParams& params);
void from_json(const nlohmann::json& j, DecodeParams& params);
void to_json(nlohmann::json& j, const RougeComponent& component);
void from_json(const nlohmann::json& j, RougeComponent& component);
void to_json(nlohmann::json& j, const ConsistencyScore& score);
void from_json(const nlohmann::json& j, ConsistencyScore& score);
void to_json(nlohmann::json& j, const BleuScore& score);
void from_json(const nlohmann::json& j, BleuScore& score);
void to_json(nlohmann::json& j, const ModelInfo& model);
void from_json(const nlohmann::json& j, ModelInfo& model);
void to_json(nlohmann::json& j, const ComputeCost& cost);
void from_json(const nlohmann::json& j, ComputeCost& cost);
void to_json(nlohmann::json& j, const CandidateReport& candidate);
void to_json(nlohmann::json& j, const SelectionResult& result);
void to_json(nlohmann::json& j, const SentenceScore& score);
void from_json(const nlohmann::json& j, SentenceScore& score);
void to_json(nlohmann::json& j, const ScalingPoint& point);
void from_json(const nlohmann::json& j, ScalingPoint& point);

/// Full matrix report including per-sentence scores.
nlohmann::json matrix_report(const BenchmarkMatrix& matrix);
BenchmarkMatrix matrix_from_report(const nlohmann::json& report);

nlohmann::json scaling_report(std::span<const ScalingPoint> points);
std::vector<ScalingPoint> scaling_from_report(const nlohmann::json& report);

}  // namespace cyclemt

namespace nlohmann {

template <>
struct adl_serializer<cyclemt::LanguageTag> {
  static cyclemt::LanguageTag from_json(const json& j) {
    return cyclemt::LanguageTag(j.at("code").get<std::string>(),
                                j.at("display_name").get<std::string>());
  }
  static void to_json(json& j, const cyclemt::LanguageTag& tag) {
    j = json{{"code", tag.code()}, {"display_name", tag.display_name()}};
  }
};

}  // namespace nlohmann
