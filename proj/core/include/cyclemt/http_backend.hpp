#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cyclemt/backend.hpp"

namespace cyclemt {

inline constexpr std::string_view kDefaultPromptTemplate =
    "Translate the following sentence from {source} to {target}: {text}";

struct HttpBackendConfig {
  /// Everything before /chat/completions, e.g. "http://localhost:8000/v1".
  std::string base_url = "http://localhost:8000/v1";
  std::string api_key_env = "CYCLEMT_API_KEY";
  /// Resolved bearer token; read from api_key_env when unset.
  std::optional<std::string> api_key;
  int timeout_s = 60;
  /// Extra attempts after the first one.
  int retries = 2;
  std::chrono::milliseconds retry_backoff{500};
  std::string prompt_template{kDefaultPromptTemplate};
  bool send_seed = true;
};

/// Substitutes {source}, {target} and {text} in `prompt_template`.
std::string render_prompt(std::string_view prompt_template, const TranslationRequest& request);

/// Cleans a chat reply: trims whitespace, unwraps a ``` fence, drops an
/// echoed prompt prefix and a leading "Translation:" label.
std::string clean_response(std::string_view raw, std::string_view echoed_prefix = {});

/// Body of POST {base_url}/chat/completions for `request`.
nlohmann::json build_chat_request(const TranslationRequest& request,
                                  const HttpBackendConfig& config);

/// OpenAI-compatible chat-completions client. Retries network errors, 429
/// and 5xx replies up to `retries` extra times; other statuses fail at once.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  const HttpBackendConfig& config() const noexcept { return config_; }

 protected:
  std::string do_translate(const TranslationRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // "/v1"
};

}  // namespace cyclemt
