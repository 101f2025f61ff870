#include "cyclemt/http_backend.hpp"

#include <cctype>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "cyclemt/error.hpp"

namespace cyclemt {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string render_prompt(std::string_view prompt_template, const TranslationRequest& request) {
  if (request.source.display_name().empty() || request.target.display_name().empty()) {
    throw ConfigError("no display name for language pair " + request.source.code() + "->" +
                      request.target.code());
  }
  std::string out;
  out.reserve(prompt_template.size() + request.text.size() + 32);
  std::size_t i = 0;
  while (i < prompt_template.size()) {
    const std::string_view rest = prompt_template.substr(i);
    if (rest.starts_with("{source}")) {
      out += request.source.display_name();
      i += 8;
    } else if (rest.starts_with("{target}")) {
      out += request.target.display_name();
      i += 8;
    } else if (rest.starts_with("{text}")) {
      out += request.text;
      i += 6;
    } else {
      out.push_back(prompt_template[i++]);
    }
  }
  return out;
}

std::string clean_response(std::string_view raw, std::string_view echoed_prefix) {
  std::string_view s = trim(raw);
  if (s.starts_with("```")) {
    const auto newline = s.find('\n');
    s = newline == std::string_view::npos ? std::string_view{} : s.substr(newline + 1);
    s = trim(s);
    if (s.ends_with("```")) s.remove_suffix(3);
    s = trim(s);
  }
  echoed_prefix = trim(echoed_prefix);
  if (!echoed_prefix.empty() && s.starts_with(echoed_prefix)) {
    s = trim(s.substr(echoed_prefix.size()));
  }
  for (std::string_view label : {"**translation:**", "translation:"}) {
    if (starts_with_icase(s, label)) {
      s = trim(s.substr(label.size()));
      break;
    }
  }
  return std::string(s);
}

nlohmann::json build_chat_request(const TranslationRequest& request,
                                  const HttpBackendConfig& config) {
  nlohmann::json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", render_prompt(config.prompt_template, request)}}});
  body["temperature"] = request.params.temperature;
  if (config.send_seed && request.params.seed) body["seed"] = *request.params.seed;
  if (request.params.top_k) body["top_k"] = *request.params.top_k;
  if (request.params.num_beams) body["num_beams"] = *request.params.num_beams;
  return body;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos ||
      !(config_.base_url.starts_with("http://") || config_.base_url.starts_with("https://"))) {
    throw ConfigError("base_url must start with http:// or https://: " + config_.base_url);
  }
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  origin_ = config_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (config_.retries < 0) throw ConfigError("retries must be >= 0");
  if (config_.timeout_s <= 0) throw ConfigError("timeout_s must be > 0");
  if (!config_.api_key && !config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
      config_.api_key = key;
    }
  }
}

std::string HttpBackend::do_translate(const TranslationRequest& request) {
  const std::string body = build_chat_request(request, config_).dump();
  httplib::Headers headers;
  if (config_.api_key) headers.emplace("Authorization", "Bearer " + *config_.api_key);

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  client.set_write_timeout(config_.timeout_s, 0);

  const std::string path = path_prefix_ + "/chat/completions";
  const int max_attempts = config_.retries + 1;
  int status = 0;
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1 && config_.retry_backoff.count() > 0) {
      std::this_thread::sleep_for(config_.retry_backoff * (1 << std::min(attempt - 2, 6)));
    }
    auto result = client.Post(path, headers, body, "application/json");
    if (!result) {
      status = 0;
      last_error = httplib::to_string(result.error());
      continue;
    }
    status = result->status;
    if (status >= 200 && status < 300) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("malformed chat completion reply: ") + e.what());
      }
      const auto* content = [&]() -> const nlohmann::json* {
        if (!reply.contains("choices") || !reply["choices"].is_array() ||
            reply["choices"].empty()) {
          return nullptr;
        }
        const auto& choice = reply["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string()) {
          return nullptr;
        }
        return &choice["message"]["content"];
      }();
      if (!content) throw BackendError("chat completion reply has no message content");
      TranslationRequest empty_text = request;
      empty_text.text.clear();
      std::string text = clean_response(content->get<std::string>(),
                                        render_prompt(config_.prompt_template, empty_text));
      if (text.empty()) throw BackendError("model returned an empty translation");
      return text;
    }
    last_error = "HTTP " + std::to_string(status);
    if (!retryable(status)) throw TransportError("chat completion failed: " + last_error, status, attempt);
  }
  throw TransportError("chat completion failed: " + last_error, status, max_attempts);
}

}  // namespace cyclemt
