#include "cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

#include "cyclemt/error.hpp"
#include "cyclemt/http_backend.hpp"
#include "cyclemt/mock_backend.hpp"

namespace cyclemt::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, std::string_view section,
                    std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) throw ConfigError("config section '" + std::string(section) + "' must be an object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : object.items()) {
    if (!keys.contains(key)) {
      throw ConfigError("unknown config key '" + std::string(section) + "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& object, const char* key, T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
void read_optional(const json& object, const char* key, std::optional<T>& target) {
  if (!object.contains(key)) return;
  if (object.at(key).is_null()) {
    target.reset();
    return;
  }
  T value{};
  read(object, key, value);
  target = value;
}

template <typename T>
T parse_number(std::string_view name, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("environment variable " + std::string(name) + " is not a number: " + text);
  }
  return value;
}

std::pair<std::string, std::string> split_pair(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == key.size()) {
    throw ConfigError("per_pair_rho key must look like 'es-pt': " + key);
  }
  return {key.substr(0, dash), key.substr(dash + 1)};
}

}  // namespace

void Config::validate() const {
  if (backend.kind != "mock" && backend.kind != "http") {
    throw ConfigError("backend.kind must be 'mock' or 'http', got '" + backend.kind + "'");
  }
  if (!(backend.parameter_count > 0.0)) throw ConfigError("backend.parameter_count must be > 0");
  if (pipeline.n_candidates < 1) throw UsageError("number of candidates must satisfy N >= 1");
  if (pipeline.parallelism < 1) throw UsageError("parallelism must be >= 1");
  parse_metric(pipeline.metric);
  noise_channel(*this).validate();
  for (const auto& language : languages) {
    LanguageTag(language.code, language.display_name);
    parse_segmentation(language.segmentation);
  }
}

Config parse_config(const json& document, Config config) {
  reject_unknown(document, "<root>", {"backend", "mock", "pipeline", "cache", "languages"});
  if (document.contains("backend")) {
    const json& b = document["backend"];
    reject_unknown(b, "backend",
                   {"kind", "base_url", "api_key_env", "model", "parameter_count", "timeout_s",
                    "retries", "retry_backoff_ms", "prompt_template", "allow_same_language"});
    read(b, "kind", config.backend.kind);
    read(b, "base_url", config.backend.base_url);
    read(b, "api_key_env", config.backend.api_key_env);
    read(b, "model", config.backend.model);
    read(b, "parameter_count", config.backend.parameter_count);
    read(b, "timeout_s", config.backend.timeout_s);
    read(b, "retries", config.backend.retries);
    read(b, "retry_backoff_ms", config.backend.retry_backoff_ms);
    read(b, "prompt_template", config.backend.prompt_template);
    read(b, "allow_same_language", config.backend.allow_same_language);
  }
  if (document.contains("mock")) {
    const json& m = document["mock"];
    reject_unknown(m, "mock", {"rho", "kappa", "base_seed", "per_pair_rho"});
    read(m, "rho", config.mock.rho);
    read(m, "kappa", config.mock.kappa);
    read(m, "base_seed", config.mock.base_seed);
    read(m, "per_pair_rho", config.mock.per_pair_rho);
  }
  if (document.contains("pipeline")) {
    const json& p = document["pipeline"];
    reject_unknown(p, "pipeline",
                   {"n_candidates", "temp_step", "max_temp", "backward_temperature",
                    "parallelism", "metric", "seed", "bleu_order", "top_k", "num_beams"});
    read(p, "n_candidates", config.pipeline.n_candidates);
    read(p, "temp_step", config.pipeline.temp_step);
    read(p, "max_temp", config.pipeline.max_temp);
    read(p, "backward_temperature", config.pipeline.backward_temperature);
    read(p, "parallelism", config.pipeline.parallelism);
    read(p, "metric", config.pipeline.metric);
    read_optional(p, "seed", config.pipeline.seed);
    read(p, "bleu_order", config.pipeline.bleu_order);
    read_optional(p, "top_k", config.pipeline.top_k);
    read_optional(p, "num_beams", config.pipeline.num_beams);
  }
  if (document.contains("cache")) {
    const json& c = document["cache"];
    reject_unknown(c, "cache", {"enabled", "dir"});
    read(c, "enabled", config.cache.enabled);
    read(c, "dir", config.cache.dir);
  }
  if (document.contains("languages")) {
    if (!document["languages"].is_array()) throw ConfigError("languages must be an array");
    for (const json& entry : document["languages"]) {
      reject_unknown(entry, "languages[]", {"code", "display_name", "segmentation"});
      LanguageSettings language;
      read(entry, "code", language.code);
      read(entry, "display_name", language.display_name);
      read(entry, "segmentation", language.segmentation);
      config.languages.push_back(std::move(language));
    }
  }
  config.validate();
  return config;
}

Config load_config_file(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(document, std::move(base));
}

EnvLookup process_environment() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* value = std::getenv(std::string(name).c_str());
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
  };
}

void apply_environment(Config& config, const EnvLookup& env) {
  if (auto v = env("CYCLEMT_BACKEND")) config.backend.kind = *v;
  if (auto v = env("CYCLEMT_BASE_URL")) config.backend.base_url = *v;
  if (auto v = env("CYCLEMT_MODEL")) config.backend.model = *v;
  if (auto v = env("CYCLEMT_SEED")) {
    const auto seed = parse_number<std::int64_t>("CYCLEMT_SEED", *v);
    config.pipeline.seed = seed;
    config.mock.base_seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = env("CYCLEMT_PARALLELISM")) {
    config.pipeline.parallelism = parse_number<std::size_t>("CYCLEMT_PARALLELISM", *v);
  }
  if (auto v = env("CYCLEMT_CANDIDATES")) {
    config.pipeline.n_candidates = parse_number<std::size_t>("CYCLEMT_CANDIDATES", *v);
  }
  if (auto v = env("CYCLEMT_CACHE_DIR")) {
    config.cache.dir = *v;
    config.cache.enabled = true;
  }
}

std::shared_ptr<TokenizerRegistry> build_registry(const Config& config) {
  auto registry = std::make_shared<TokenizerRegistry>(TokenizerRegistry::with_defaults());
  for (const auto& language : config.languages) {
    registry->add(LanguageTag(language.code, language.display_name),
                  parse_segmentation(language.segmentation));
  }
  return registry;
}

PipelineConfig pipeline_config(const Config& config) {
  PipelineConfig out;
  out.n_candidates = config.pipeline.n_candidates;
  out.temp_step = config.pipeline.temp_step;
  out.max_temp = config.pipeline.max_temp;
  out.seed = config.pipeline.seed;
  out.top_k = config.pipeline.top_k;
  out.num_beams = config.pipeline.num_beams;
  out.backward.temperature = config.pipeline.backward_temperature;
  out.parallelism = config.pipeline.parallelism;
  out.metric = parse_metric(config.pipeline.metric);
  out.bleu_order = config.pipeline.bleu_order;
  return out;
}

ModelInfo model_info(const Config& config) {
  return ModelInfo{config.backend.model, config.backend.parameter_count};
}

NoiseChannel noise_channel(const Config& config) {
  NoiseChannel channel;
  channel.rho = config.mock.rho;
  channel.kappa = config.mock.kappa;
  channel.base_seed = config.mock.base_seed;
  for (const auto& [key, value] : config.mock.per_pair_rho) {
    const auto [a, b] = split_pair(key);
    channel.set_pair_rho(a, b, value);
  }
  return channel;
}

std::shared_ptr<TranslationCache> open_cache(const Config& config) {
  if (!config.cache.enabled) return nullptr;
  return TranslationCache::open(config.cache.dir);
}

std::shared_ptr<Backend> build_backend(const Config& config,
                                       std::shared_ptr<const TokenizerRegistry> registry,
                                       std::shared_ptr<TranslationCache> cache,
                                       std::optional<double> rho) {
  std::shared_ptr<Backend> backend;
  if (config.backend.kind == "mock") {
    NoiseChannel channel = noise_channel(config);
    if (rho) channel.rho = *rho;
    backend = std::make_shared<MockBackend>(std::move(channel), std::move(registry));
  } else {
    HttpBackendConfig http;
    http.base_url = config.backend.base_url;
    http.api_key_env = config.backend.api_key_env;
    http.timeout_s = config.backend.timeout_s;
    http.retries = config.backend.retries;
    http.retry_backoff = std::chrono::milliseconds(config.backend.retry_backoff_ms);
    http.prompt_template = config.backend.prompt_template;
    backend = std::make_shared<HttpBackend>(std::move(http));
  }
  backend->set_allow_same_language(config.backend.allow_same_language);
  if (cache) backend = cached(std::move(backend), std::move(cache));
  return backend;
}

}  // namespace cyclemt::cli
