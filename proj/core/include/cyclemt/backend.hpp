#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "cyclemt/tokenization.hpp"

namespace cyclemt {

/// Decoding hyper-parameters for one LLM call.
struct DecodeParams {
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
  std::optional<int> top_k;
  std::optional<int> num_beams;

  /// Throws UsageError when temperature < 0 (or NaN) or an optional field is < 1.
  void validate() const;

  friend bool operator==(const DecodeParams&, const DecodeParams&) = default;
};

/// Stable textual form used in cache keys, e.g.
/// {"num_beams":null,"seed":7,"temperature":0.15,"top_k":null}
std::string canonical_params(const DecodeParams& params);

struct TranslationRequest {
  std::string text;
  LanguageTag source;
  LanguageTag target;
  DecodeParams params;
  std::string model;
};

struct ModelInfo {
  std::string name;
  double parameter_count = 0.0;  // parameters, e.g. 5.0e8

  /// Throws ConfigError unless parameter_count > 0.
  void validate() const;

  friend bool operator==(const ModelInfo&, const ModelInfo&) = default;
};

/// Translation capability. Implementations must tolerate concurrent calls.
class Backend {
 public:
  virtual ~Backend() = default;

  /// Validates the request, then delegates to do_translate. Throws
  /// UsageError for empty text, same source/target (unless allowed) or bad
  /// params.
  std::string translate(const TranslationRequest& request);

  void set_allow_same_language(bool allow) noexcept { allow_same_language_ = allow; }
  bool allow_same_language() const noexcept { return allow_same_language_; }

  /// Number of validated translate() calls made on this instance.
  std::size_t invocations() const noexcept { return invocations_.load(); }

 protected:
  virtual std::string do_translate(const TranslationRequest& request) = 0;

 private:
  std::atomic<std::size_t> invocations_{0};
  bool allow_same_language_ = false;
};

void validate_request(const TranslationRequest& request, bool allow_same_language);

}  // namespace cyclemt
