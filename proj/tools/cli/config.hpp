#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyclemt/backend.hpp"
#include "cyclemt/cache.hpp"
#include "cyclemt/http_backend.hpp"
#include "cyclemt/mock_backend.hpp"
#include "cyclemt/pipeline.hpp"
#include "cyclemt/tokenization.hpp"

namespace cyclemt::cli {

struct BackendSettings {
  std::string kind = "mock";  // "mock" | "http"
  std::string base_url = "http://localhost:8000/v1";
  std::string api_key_env = "CYCLEMT_API_KEY";
  std::string model = "mock";
  double parameter_count = 5.0e8;
  int timeout_s = 60;
  int retries = 2;
  int retry_backoff_ms = 500;
  std::string prompt_template{kDefaultPromptTemplate};
  bool allow_same_language = false;
};

struct MockSettings {
  double rho = 0.0;
  double kappa = 0.1;
  std::uint64_t base_seed = 0;
  /// "es-pt" -> 0.05; applies to both directions.
  std::map<std::string, double> per_pair_rho;
};

struct PipelineSettings {
  std::size_t n_candidates = 4;
  double temp_step = 0.15;
  double max_temp = 1.5;
  double backward_temperature = 0.0;
  std::size_t parallelism = 4;
  std::string metric = "rouge_sum";
  std::optional<std::int64_t> seed = 0;
  std::size_t bleu_order = 4;
  std::optional<int> top_k;
  std::optional<int> num_beams;
};

struct CacheSettings {
  bool enabled = false;
  std::string dir = ".cyclemt-cache";
};

struct LanguageSettings {
  std::string code;
  std::string display_name;
  std::string segmentation = "whitespace";
};

/// Everything the CLI needs to build a backend and a pipeline. Built-in
/// defaults, then the config file, then environment, then flags.
struct Config {
  BackendSettings backend;
  MockSettings mock;
  PipelineSettings pipeline;
  CacheSettings cache;
  /// Added to (or replacing) the built-in languages.
  std::vector<LanguageSettings> languages;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Reads a JSON config document. Unknown keys are rejected.
Config parse_config(const nlohmann::json& document, Config base = {});
Config load_config_file(const std::filesystem::path& path, Config base = {});

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Real process environment.
EnvLookup process_environment();

/// Applies CYCLEMT_BACKEND, CYCLEMT_BASE_URL, CYCLEMT_MODEL, CYCLEMT_SEED,
/// CYCLEMT_PARALLELISM, CYCLEMT_CANDIDATES and CYCLEMT_CACHE_DIR.
void apply_environment(Config& config, const EnvLookup& env);

std::shared_ptr<TokenizerRegistry> build_registry(const Config& config);
PipelineConfig pipeline_config(const Config& config);
ModelInfo model_info(const Config& config);
NoiseChannel noise_channel(const Config& config);

/// nullptr when caching is disabled.
std::shared_ptr<TranslationCache> open_cache(const Config& config);

/// Mock or HTTP backend per config.backend.kind, wrapped by `cache` when given.
/// `model` and `rho` override the configured model name and mock rho.
std::shared_ptr<Backend> build_backend(const Config& config,
                                       std::shared_ptr<const TokenizerRegistry> registry,
                                       std::shared_ptr<TranslationCache> cache,
                                       std::optional<double> rho = {});

}  // namespace cyclemt::cli
