#include "cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cyclemt/benchmark.hpp"
#include "cyclemt/error.hpp"
#include "cyclemt/pipeline.hpp"
#include "cyclemt/serialization.hpp"

namespace cyclemt::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> backend;
  std::optional<std::int64_t> seed;
  std::optional<long long> parallelism;
  std::optional<std::string> cache_dir;
};

struct TranslateOptions {
  std::string src;
  std::string tgt;
  std::optional<std::string> text;
  std::optional<std::string> file;
  std::optional<long long> candidates;
  std::optional<std::string> report;
  bool verbose = false;
  bool json = false;
};

struct ScoreOptions {
  std::optional<std::string> original;
  std::optional<std::string> cycled;
  std::optional<std::string> original_file;
  std::optional<std::string> cycled_file;
  std::string lang;
  bool json = false;
};

struct BenchmarkOptionsCli {
  std::string dataset;
  std::vector<std::string> langs;
  std::string out_dir = ".";
  std::optional<long long> n_candidates;
  bool scaling = false;
  std::vector<std::string> models;
  std::vector<long long> candidates;
  std::optional<std::string> pair;
};

struct CacheOptions {
  bool yes = false;
};

std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::string pick_text(const std::optional<std::string>& text,
                      const std::optional<std::string>& file, std::string_view what) {
  if (text && file) {
    throw UsageError("give either the " + std::string(what) + " text or a file, not both");
  }
  if (text) return *text;
  if (file) return read_text_file(*file);
  throw UsageError("missing " + std::string(what) + " text (pass the text or a file)");
}

void write_json_file(const std::string& path, const nlohmann::json& document) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << document.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

Config resolve_config(const GlobalOptions& global, const EnvLookup& env) {
  Config config;
  std::optional<std::string> path = global.config_path;
  if (!path) path = env("CYCLEMT_CONFIG");
  if (path) config = load_config_file(*path);
  apply_environment(config, env);
  if (global.backend) config.backend.kind = *global.backend;
  if (global.seed) {
    config.pipeline.seed = *global.seed;
    config.mock.base_seed = static_cast<std::uint64_t>(*global.seed);
  }
  if (global.parallelism) {
    if (*global.parallelism < 1) throw UsageError("--parallelism must be >= 1");
    config.pipeline.parallelism = static_cast<std::size_t>(*global.parallelism);
  }
  if (global.cache_dir) {
    config.cache.enabled = true;
    config.cache.dir = *global.cache_dir;
  }
  config.validate();
  return config;
}

int cmd_translate(Config config, const TranslateOptions& options, CliIo& io) {
  if (options.candidates) {
    if (*options.candidates < 1) {
      throw UsageError("--candidates: number of candidates must satisfy N >= 1");
    }
    config.pipeline.n_candidates = static_cast<std::size_t>(*options.candidates);
  }
  const std::string text = pick_text(options.text, options.file, "source");
  const auto registry = build_registry(config);
  const LanguageTag& source = registry->language(options.src);
  const LanguageTag& target = registry->language(options.tgt);
  auto backend = build_backend(config, registry, open_cache(config));
  const Pipeline pipeline(backend, model_info(config), pipeline_config(config), registry);
  const SelectionResult result = pipeline.run(text, source, target);

  if (options.verbose) {
    io.err << "index  temperature  total   status\n";
    for (const auto& candidate : result.candidates) {
      char line[128];
      std::snprintf(line, sizeof line, "%5zu  %11.2f  %6.4f  %s\n", candidate.index,
                    candidate.forward_params.temperature, candidate.score.total,
                    candidate.failed() ? "failed" : (candidate.index == result.selected_index
                                                         ? "selected"
                                                         : "ok"));
      io.err << line;
      if (candidate.failed()) io.err << "       " << *candidate.error << '\n';
    }
  }
  if (options.report) write_json_file(*options.report, nlohmann::json(result));
  if (options.json) {
    io.out << nlohmann::json(result).dump(2) << '\n';
  } else {
    io.out << result.selected().forward_text << '\n';
  }
  return kExitOk;
}

int cmd_score(const Config& config, const ScoreOptions& options, CliIo& io) {
  const std::string original = pick_text(options.original, options.original_file, "original");
  const std::string cycled = pick_text(options.cycled, options.cycled_file, "cycled");
  const auto registry = build_registry(config);
  const ConsistencyScore score =
      score_cycle(original, cycled, registry->language(options.lang), *registry);
  if (options.json) {
    io.out << nlohmann::json(score).dump(2) << '\n';
    return kExitOk;
  }
  io.out << "metric   recall  precision  f1\n";
  const auto row = [&](std::string_view name, const RougeComponent& c) {
    io.out << name << "  " << fixed4(c.recall) << "  " << fixed4(c.precision) << "     "
           << fixed4(c.f1) << '\n';
  };
  row("rouge-1", score.rouge1);
  row("rouge-2", score.rouge2);
  row("rouge-l", score.rouge_l);
  io.out << "total: " << fixed4(score.total) << '\n';
  return kExitOk;
}

struct ModelSpec {
  std::string name;
  double parameter_count;
  std::optional<double> rho;
};

ModelSpec parse_model_spec(const std::string& spec) {
  // name:params[:rho]
  std::vector<std::string> parts;
  std::stringstream stream(spec);
  for (std::string part; std::getline(stream, part, ':');) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
    throw UsageError("--models entries look like name:params[:rho], got '" + spec + "'");
  }
  try {
    ModelSpec model{parts[0], std::stod(parts[1]), std::nullopt};
    if (parts.size() == 3) model.rho = std::stod(parts[2]);
    ModelInfo{model.name, model.parameter_count}.validate();
    return model;
  } catch (const std::logic_error&) {
    throw UsageError("--models entry has a non-numeric field: '" + spec + "'");
  }
}

void print_matrix_summary(const BenchmarkMatrix& matrix, std::ostream& out) {
  out << "matrix: model=" << matrix.model.name << " N=" << matrix.n_candidates
      << " compute/sentence=" << matrix.compute_per_sentence.total << '\n';
  out << "source";
  for (const auto& target : matrix.languages) out << '\t' << target.code();
  out << '\n';
  std::size_t sentences = 0;
  std::size_t failures = 0;
  for (const auto& source : matrix.languages) {
    out << source.code();
    for (const auto& target : matrix.languages) {
      const CellStats* stats = matrix.cell(source.code(), target.code());
      out << '\t' << (stats ? fixed4(stats->mean_total) : "-");
      if (stats) {
        sentences += stats->n_sentences;
        failures += stats->n_failures;
      }
    }
    out << '\n';
  }
  out << "cells: " << matrix.cells.size() << ", failures: " << failures << "/" << sentences
      << " sentences\n";
}

int cmd_benchmark(Config config, const BenchmarkOptionsCli& options, CliIo& io) {
  if (options.n_candidates) {
    if (*options.n_candidates < 1) throw UsageError("number of candidates must satisfy N >= 1");
    config.pipeline.n_candidates = static_cast<std::size_t>(*options.n_candidates);
  }
  const auto registry = build_registry(config);
  const std::vector<DatasetRecord> dataset = load_dataset(options.dataset, *registry);
  std::vector<LanguageTag> languages;
  for (const auto& code : options.langs) languages.push_back(registry->language(code));

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + options.out_dir + ": " + ec.message());
  const fs::path out_dir(options.out_dir);

  const auto cache = open_cache(config);
  auto backend = build_backend(config, registry, cache);
  BenchmarkOptions bench;
  bench.pipeline = pipeline_config(config);
  bench.parallelism = config.pipeline.parallelism;
  bench.registry = registry;

  const BenchmarkMatrix matrix = run_matrix(dataset, languages, backend, model_info(config),
                                            config.pipeline.n_candidates, bench);
  emit_report(matrix, ReportFormat::kJson, out_dir / "matrix.json");
  emit_report(matrix, ReportFormat::kCsv, out_dir / "matrix.csv");
  print_matrix_summary(matrix, io.out);

  std::size_t sentences = 0;
  std::size_t failures = 0;
  for (const auto& [pair, stats] : matrix.cells) {
    sentences += stats.n_sentences;
    failures += stats.n_failures;
  }

  if (options.scaling) {
    std::vector<std::size_t> counts;
    for (long long n : options.candidates.empty() ? std::vector<long long>{1, 2, 4}
                                                  : options.candidates) {
      if (n < 1) throw UsageError("number of candidates must satisfy N >= 1");
      counts.push_back(static_cast<std::size_t>(n));
    }
    std::string source_code;
    std::string target_code;
    if (options.pair) {
      const auto dash = options.pair->find('-');
      if (dash == std::string::npos) throw UsageError("--pair looks like en-fr");
      source_code = options.pair->substr(0, dash);
      target_code = options.pair->substr(dash + 1);
    } else {
      if (languages.size() < 2) throw UsageError("--scaling needs --pair or two --langs");
      source_code = languages[0].code();
      target_code = languages[1].code();
    }
    std::vector<ScalingModel> models;
    if (options.models.empty()) {
      models.push_back({backend, model_info(config)});
    } else {
      for (const auto& spec_text : options.models) {
        const ModelSpec spec = parse_model_spec(spec_text);
        Config model_config = config;
        model_config.backend.model = spec.name;
        model_config.backend.parameter_count = spec.parameter_count;
        models.push_back({build_backend(model_config, registry, cache, spec.rho),
                          ModelInfo{spec.name, spec.parameter_count}});
      }
    }
    const auto points = run_scaling(dataset, registry->language(source_code),
                                    registry->language(target_code), models, counts, bench);
    emit_report(points, ReportFormat::kJson, out_dir / "scaling.json");
    emit_report(points, ReportFormat::kCsv, out_dir / "scaling.csv");
    io.out << "scaling " << source_code << "->" << target_code << ":\n";
    io.out << "model\tparams\tN\tcompute\tmean_total\n";
    for (const auto& p : points) {
      io.out << p.model.name << '\t' << p.model.parameter_count << '\t' << p.n_candidates << '\t'
             << p.compute << '\t' << fixed4(p.mean_total) << '\n';
      sentences += p.n_sentences;
      failures += p.n_failures;
    }
  }

  if (sentences > 0 && failures == sentences) {
    io.err << "error: every sentence failed; the backend produced no usable translation\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_cache(const Config& config, bool stats, const CacheOptions& options, CliIo& io) {
  const auto cache = open_cache(config);
  if (!cache) {
    io.err << "error: cache is disabled (set cache.enabled in the config or pass --cache-dir)\n";
    return kExitUsage;
  }
  if (stats) {
    io.out << cache->entries() << " entries, " << cache->size_bytes() << " bytes ("
           << cache->directory().string() << ")\n";
    return kExitOk;
  }
  if (!options.yes) {
    io.err << "Remove " << cache->entries() << " entries from " << cache->directory().string()
           << "? [y/N] ";
    std::string answer;
    std::getline(io.in, answer);
    if (answer != "y" && answer != "Y" && answer != "yes") {
      io.err << "cache not cleared\n";
      return kExitUsage;
    }
  }
  cache->clear();
  io.out << "cleared; 0 entries\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, CliIo io) {
  CLI::App app{"Self-reflective machine translation with cycle-consistency scoring", "cyclemt"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config_path, "JSON config file (env CYCLEMT_CONFIG)");
  app.add_option("--backend", global.backend, "Backend kind")
      ->check(CLI::IsMember({"http", "mock"}));
  app.add_option("--seed", global.seed, "Base seed for candidates and the mock channel");
  app.add_option("--parallelism", global.parallelism, "Concurrent backend calls");
  app.add_option("--cache-dir", global.cache_dir, "Enable the translation cache in DIR");

  TranslateOptions translate_options;
  auto* translate = app.add_subcommand("translate", "Translate with best-of-N cycle selection");
  translate->add_option("--src", translate_options.src, "Source language code")->required();
  translate->add_option("--tgt", translate_options.tgt, "Target language code")->required();
  translate->add_option("--text", translate_options.text, "Text to translate");
  translate->add_option("--file", translate_options.file, "Read the text from a file");
  translate->add_option("--candidates", translate_options.candidates,
                        "Number of forward candidates N");
  translate->add_option("--report", translate_options.report, "Write the full result as JSON");
  translate->add_flag("--verbose", translate_options.verbose, "Per-candidate table on stderr");
  translate->add_flag("--json", translate_options.json, "Print the full result as JSON");

  ScoreOptions score_options;
  auto* score = app.add_subcommand("score", "Score an original/back-translated pair");
  score->add_option("--original", score_options.original, "Original text");
  score->add_option("--cycled", score_options.cycled, "Back-translated text");
  score->add_option("--original-file", score_options.original_file, "Original text file");
  score->add_option("--cycled-file", score_options.cycled_file, "Back-translated text file");
  score->add_option("--lang", score_options.lang, "Language of both texts")->required();
  score->add_flag("--json", score_options.json, "Emit the score as JSON");

  BenchmarkOptionsCli bench_options;
  auto* bench = app.add_subcommand("benchmark", "Any-to-any matrix and scaling benchmarks");
  bench->add_option("--dataset", bench_options.dataset, "Line-delimited JSON dataset")
      ->required();
  bench->add_option("--langs", bench_options.langs, "Comma separated language codes")
      ->required()
      ->delimiter(',');
  bench->add_option("--out", bench_options.out_dir, "Report directory");
  bench->add_option("-n,--n-candidates", bench_options.n_candidates, "N for the matrix run");
  bench->add_flag("--scaling", bench_options.scaling, "Also run the compute scaling sweep");
  bench->add_option("--models", bench_options.models, "name:params[:rho] entries")
      ->delimiter(',');
  bench->add_option("--candidates", bench_options.candidates, "Ascending N values for scaling")
      ->delimiter(',');
  bench->add_option("--pair", bench_options.pair, "Scaling pair, e.g. en-fr");

  CacheOptions cache_options;
  auto* cache = app.add_subcommand("cache", "Inspect or clear the translation cache");
  cache->require_subcommand(1);
  auto* cache_stats = cache->add_subcommand("stats", "Entry count and size");
  auto* cache_clear = cache->add_subcommand("clear", "Remove every entry");
  cache_clear->add_flag("--yes", cache_options.yes, "Do not ask for confirmation");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Config config = resolve_config(global, io.env);
    if (*translate) return cmd_translate(std::move(config), translate_options, io);
    if (*score) return cmd_score(config, score_options, io);
    if (*bench) return cmd_benchmark(std::move(config), bench_options, io);
    if (*cache) return cmd_cache(config, static_cast<bool>(*cache_stats), cache_options, io);
  } catch (const UsageError& e) {
    io.err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cyclemt::cli
