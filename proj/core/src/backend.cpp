#include "cyclemt/backend.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "cyclemt/error.hpp"

namespace cyclemt {

void DecodeParams::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw UsageError("temperature must be a finite value >= 0");
  }
  if (top_k && *top_k < 1) throw UsageError("top_k must be >= 1");
  if (num_beams && *num_beams < 1) throw UsageError("num_beams must be >= 1");
  if (seed && *seed < 0) throw UsageError("seed must be >= 0");
}

std::string canonical_params(const DecodeParams& params) {
  nlohmann::json j;
  j["temperature"] = params.temperature;
  j["seed"] = params.seed ? nlohmann::json(*params.seed) : nlohmann::json();
  j["top_k"] = params.top_k ? nlohmann::json(*params.top_k) : nlohmann::json();
  j["num_beams"] = params.num_beams ? nlohmann::json(*params.num_beams) : nlohmann::json();
  return j.dump();
}

void ModelInfo::validate() const {
  if (!(parameter_count > 0.0) || !std::isfinite(parameter_count)) {
    throw ConfigError("model '" + name + "': parameter_count must be > 0");
  }
}

void validate_request(const TranslationRequest& request, bool allow_same_language) {
  if (request.text.empty()) throw UsageError("translation request has empty text");
  if (request.source == request.target && !allow_same_language) {
    throw UsageError("source and target language are both '" + request.source.code() + "'");
  }
  request.params.validate();
}

std::string Backend::translate(const TranslationRequest& request) {
  validate_request(request, allow_same_language_);
  ++invocations_;
  return do_translate(request);
}

}  // namespace cyclemt
