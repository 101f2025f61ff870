#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclemt/backend.hpp"
#include "cyclemt/pipeline.hpp"
#include "cyclemt/tokenization.hpp"

namespace cyclemt {

struct DatasetRecord {
  std::string id;
  LanguageTag language;
  std::string text;
  std::string topic;
};

/// Reads line-delimited JSON records {id, language, text, topic}. Blank lines
/// are ignored. Throws IoError when the file cannot be opened and ConfigError
/// naming the line for malformed records, unknown languages, empty text or a
/// duplicate id.
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path,
                                        const TokenizerRegistry& registry = default_registry());
std::vector<DatasetRecord> parse_dataset(std::istream& in, std::string_view source_name,
                                         const TokenizerRegistry& registry = default_registry());

struct SentenceScore {
  std::string id;
  double total = 0.0;
  bool failed = false;

  friend bool operator==(const SentenceScore&, const SentenceScore&) = default;
};

/// Aggregate over one (source, target) cell. Failed sentences count as 0.
struct CellStats {
  double mean_total = 0.0;
  double std_total = 0.0;  // population standard deviation
  std::size_t n_sentences = 0;
  std::size_t n_failures = 0;
  std::vector<SentenceScore> scores;

  static CellStats from_scores(std::vector<SentenceScore> scores);

  friend bool operator==(const CellStats&, const CellStats&) = default;
};

using LanguagePair = std::pair<std::string, std::string>;  // (source code, target code)

struct BenchmarkMatrix {
  std::vector<LanguageTag> languages;
  /// Off-diagonal pairs whose source has at least one record.
  std::map<LanguagePair, CellStats> cells;
  /// Off-diagonal pairs whose source has no records.
  std::vector<LanguagePair> empty_cells;
  ModelInfo model;
  std::size_t n_candidates = 0;
  ComputeCost compute_per_sentence;

  const CellStats* cell(std::string_view source, std::string_view target) const;

  friend bool operator==(const BenchmarkMatrix&, const BenchmarkMatrix&) = default;
};

struct ScalingPoint {
  ModelInfo model;
  std::size_t n_candidates = 0;
  double compute = 0.0;  // parameter-passes
  double mean_total = 0.0;
  double std_total = 0.0;
  std::size_t n_sentences = 0;
  std::size_t n_failures = 0;

  friend bool operator==(const ScalingPoint&, const ScalingPoint&) = default;
};

struct ScalingModel {
  std::shared_ptr<Backend> backend;
  ModelInfo model;
};

struct BenchmarkOptions {
  /// n_candidates and parallelism inside are overridden per run.
  PipelineConfig pipeline;
  /// Global bound on concurrent sentence pipelines.
  std::size_t parallelism = 4;
  std::shared_ptr<const TokenizerRegistry> registry;
};

/// Any-to-any evaluation: every ordered pair (A, B), A != B, over the records
/// written in A. Sentence jobs run concurrently; results are joined in record
/// order so the output does not depend on scheduling.
BenchmarkMatrix run_matrix(std::span<const DatasetRecord> dataset,
                           std::span<const LanguageTag> languages, std::shared_ptr<Backend> backend,
                           const ModelInfo& model, std::size_t n_candidates,
                           const BenchmarkOptions& options = {});

/// One point per (model, N), sorted by compute (stable in model order, then N).
/// Throws UsageError unless candidate_counts is non-empty and ascending.
std::vector<ScalingPoint> run_scaling(std::span<const DatasetRecord> dataset,
                                      const LanguageTag& source, const LanguageTag& target,
                                      std::span<const ScalingModel> models,
                                      std::span<const std::size_t> candidate_counts,
                                      const BenchmarkOptions& options = {});

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_report_format(std::string_view name);  // "json" | "csv"

/// Header "source,<targets...>", one row per source, 4-decimal means, empty
/// string for the diagonal and empty cells.
std::string matrix_csv(const BenchmarkMatrix& matrix);
/// Columns model,params,n_candidates,compute,mean_total.
std::string scaling_csv(std::span<const ScalingPoint> points);

/// Throws IoError when the file cannot be written.
void emit_report(const BenchmarkMatrix& matrix, ReportFormat format,
                 const std::filesystem::path& path);
void emit_report(std::span<const ScalingPoint> points, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace cyclemt
