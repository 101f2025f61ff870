#include "cyclemt/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cyclemt/error.hpp"
#include "cyclemt/parallel.hpp"
#include "cyclemt/serialization.hpp"

namespace cyclemt {

namespace {

std::string format_fixed4(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing report " + path.string());
}

std::shared_ptr<const TokenizerRegistry> registry_of(const BenchmarkOptions& options) {
  if (options.registry) return options.registry;
  return std::shared_ptr<const TokenizerRegistry>(std::shared_ptr<void>(), &default_registry());
}

/// Selected consistency totals for `records`, in record order.
std::vector<SentenceScore> score_records(const Pipeline& pipeline,
                                         std::span<const DatasetRecord* const> records,
                                         const LanguageTag& target, std::size_t parallelism) {
  std::vector<SentenceScore> scores(records.size());
  parallel_for(records.size(), parallelism, [&](std::size_t i) {
    const DatasetRecord& record = *records[i];
    scores[i].id = record.id;
    try {
      const SelectionResult result = pipeline.run(record.text, record.language, target);
      scores[i].total = result.selected().score.total;
    } catch (const PipelineError&) {
      scores[i].total = 0.0;
      scores[i].failed = true;
    }
  });
  return scores;
}

}  // namespace

std::vector<DatasetRecord> parse_dataset(std::istream& in, std::string_view source_name,
                                         const TokenizerRegistry& registry) {
  std::vector<DatasetRecord> records;
  std::set<std::string, std::less<>> ids;
  std::string line;
  std::size_t line_number = 0;
  const auto fail = [&](const std::string& why) {
    throw ConfigError(std::string(source_name) + ":" + std::to_string(line_number) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("language") ||
        !j["language"].is_string() || !j.contains("text") || !j["text"].is_string()) {
      fail("record needs string fields id, language and text");
    }
    if (j.contains("topic") && !j["topic"].is_string()) fail("topic must be a string");
    std::string id = j["id"].get<std::string>();
    if (id.empty()) fail("empty id");
    if (!ids.insert(id).second) fail("duplicate id '" + id + "'");
    std::string text = j["text"].get<std::string>();
    if (text.empty()) fail("record '" + id + "' has empty text");
    const std::string code = j["language"].get<std::string>();
    if (!registry.contains(code)) fail("record '" + id + "' has unknown language '" + code + "'");
    records.push_back(DatasetRecord{std::move(id), registry.language(code), std::move(text),
                                    j.value("topic", std::string())});
  }
  return records;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path,
                                        const TokenizerRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_dataset(in, path.string(), registry);
}

CellStats CellStats::from_scores(std::vector<SentenceScore> scores) {
  CellStats stats;
  stats.n_sentences = scores.size();
  if (!scores.empty()) {
    double sum = 0.0;
    for (const auto& s : scores) {
      sum += s.total;
      if (s.failed) ++stats.n_failures;
    }
    stats.mean_total = sum / static_cast<double>(scores.size());
    double squares = 0.0;
    for (const auto& s : scores) squares += (s.total - stats.mean_total) * (s.total - stats.mean_total);
    stats.std_total = std::sqrt(squares / static_cast<double>(scores.size()));
    stats.mean_total = std::clamp(stats.mean_total, 0.0, 9.0);
  }
  stats.scores = std::move(scores);
  return stats;
}

const CellStats* BenchmarkMatrix::cell(std::string_view source, std::string_view target) const {
  const auto it = cells.find(LanguagePair(source, target));
  return it == cells.end() ? nullptr : &it->second;
}

BenchmarkMatrix run_matrix(std::span<const DatasetRecord> dataset,
                           std::span<const LanguageTag> languages, std::shared_ptr<Backend> backend,
                           const ModelInfo& model, std::size_t n_candidates,
                           const BenchmarkOptions& options) {
  PipelineConfig config = options.pipeline;
  config.n_candidates = n_candidates;
  config.parallelism = 1;
  const auto registry = registry_of(options);
  const Pipeline pipeline(std::move(backend), model, config, registry);

  BenchmarkMatrix matrix;
  matrix.languages.assign(languages.begin(), languages.end());
  matrix.model = model;
  matrix.n_candidates = n_candidates;
  matrix.compute_per_sentence = ComputeCost::of(model.parameter_count, n_candidates, n_candidates);

  struct Job {
    LanguagePair pair;
    const DatasetRecord* record;
  };
  std::vector<Job> jobs;
  std::vector<LanguagePair> pairs;
  for (const auto& source : languages) {
    registry->language(source.code());
    for (const auto& target : languages) {
      if (source == target) continue;
      LanguagePair pair(source.code(), target.code());
      bool any = false;
      for (const auto& record : dataset) {
        if (record.language == source) {
          jobs.push_back({pair, &record});
          any = true;
        }
      }
      if (any) {
        pairs.push_back(pair);
      } else {
        matrix.empty_cells.push_back(pair);
      }
    }
  }

  std::vector<SentenceScore> scores(jobs.size());
  parallel_for(jobs.size(), options.parallelism, [&](std::size_t i) {
    const Job& job = jobs[i];
    scores[i].id = job.record->id;
    try {
      const SelectionResult result = pipeline.run(job.record->text, job.record->language,
                                                  registry->language(job.pair.second));
      scores[i].total = result.selected().score.total;
    } catch (const PipelineError&) {
      scores[i].failed = true;
    }
  });

  std::map<LanguagePair, std::vector<SentenceScore>> grouped;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    grouped[jobs[i].pair].push_back(std::move(scores[i]));
  }
  for (auto& pair : pairs) {
    matrix.cells.emplace(pair, CellStats::from_scores(std::move(grouped[pair])));
  }
  return matrix;
}

std::vector<ScalingPoint> run_scaling(std::span<const DatasetRecord> dataset,
                                      const LanguageTag& source, const LanguageTag& target,
                                      std::span<const ScalingModel> models,
                                      std::span<const std::size_t> candidate_counts,
                                      const BenchmarkOptions& options) {
  if (candidate_counts.empty()) throw UsageError("scaling needs at least one candidate count");
  if (!std::is_sorted(candidate_counts.begin(), candidate_counts.end())) {
    throw UsageError("candidate counts must be ascending");
  }
  if (candidate_counts.front() == 0) throw UsageError("number of candidates must satisfy N >= 1");
  const auto registry = registry_of(options);
  std::vector<const DatasetRecord*> records;
  for (const auto& record : dataset) {
    if (record.language == source) records.push_back(&record);
  }

  std::vector<ScalingPoint> points;
  for (const auto& entry : models) {
    for (std::size_t n : candidate_counts) {
      PipelineConfig config = options.pipeline;
      config.n_candidates = n;
      config.parallelism = 1;
      const Pipeline pipeline(entry.backend, entry.model, config, registry);
      const CellStats stats =
          CellStats::from_scores(score_records(pipeline, records, target, options.parallelism));
      points.push_back(ScalingPoint{entry.model, n,
                                    ComputeCost::of(entry.model.parameter_count, n).total,
                                    stats.mean_total, stats.std_total, stats.n_sentences,
                                    stats.n_failures});
    }
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const ScalingPoint& a, const ScalingPoint& b) { return a.compute < b.compute; });
  return points;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown report format '" + std::string(name) + "' (expected json or csv)");
}

std::string matrix_csv(const BenchmarkMatrix& matrix) {
  std::ostringstream out;
  out << "source";
  for (const auto& target : matrix.languages) out << ',' << target.code();
  out << '\n';
  for (const auto& source : matrix.languages) {
    out << source.code();
    for (const auto& target : matrix.languages) {
      out << ',';
      if (const CellStats* stats = matrix.cell(source.code(), target.code())) {
        out << format_fixed4(stats->mean_total);
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string scaling_csv(std::span<const ScalingPoint> points) {
  std::ostringstream out;
  out << "model,params,n_candidates,compute,mean_total\n";
  for (const auto& p : points) {
    out << p.model.name << ',' << format_number(p.model.parameter_count) << ',' << p.n_candidates
        << ',' << format_number(p.compute) << ',' << format_fixed4(p.mean_total) << '\n';
  }
  return out.str();
}

void emit_report(const BenchmarkMatrix& matrix, ReportFormat format,
                 const std::filesystem::path& path) {
  write_file(path, format == ReportFormat::kJson ? matrix_report(matrix).dump(2) + "\n"
                                                 : matrix_csv(matrix));
}

void emit_report(std::span<const ScalingPoint> points, ReportFormat format,
                 const std::filesystem::path& path) {
  write_file(path, format == ReportFormat::kJson ? scaling_report(points).dump(2) + "\n"
                                                 : scaling_csv(points));
}

}  // namespace cyclemt
