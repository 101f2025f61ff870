#include "cyclemt/cache.hpp"

#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cyclemt/error.hpp"
#include "cyclemt/logging.hpp"

namespace cyclemt {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

std::string cache_key(const TranslationRequest& request) {
  const nlohmann::json material = {request.model, request.source.code(), request.target.code(),
                                   request.text, canonical_params(request.params)};
  return sha256_hex(material.dump());
}

std::shared_ptr<TranslationCache> TranslationCache::open(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create cache directory " + dir.string() + ": " + ec.message());
  }
  {
    std::ofstream probe(dir / kRecordFile, std::ios::app);
    if (!probe) throw ConfigError("cache directory is not writable: " + dir.string());
  }
  std::shared_ptr<TranslationCache> cache(new TranslationCache(dir));
  cache->load();
  return cache;
}

void TranslationCache::load() {
  std::ifstream in(record_file());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      index_.insert_or_assign(record.at("key").get<std::string>(),
                              record.at("translation").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      ++skipped_;
      log_warning("skipping corrupt cache record " + record_file().string() + ":" +
                  std::to_string(line_number) + ": " + e.what());
    }
  }
}

std::optional<std::string> TranslationCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::store(const TranslationRequest& request, const std::string& key,
                             const std::string& translation) {
  const auto now = std::chrono::system_clock::now();
  const nlohmann::json record = {
      {"key", key},
      {"model", request.model},
      {"src", request.source.code()},
      {"tgt", request.target.code()},
      {"params", nlohmann::json::parse(canonical_params(request.params))},
      {"text_hash", sha256_hex(request.text)},
      {"translation", translation},
      {"created_at",
       std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()},
  };
  std::unique_lock lock(mutex_);
  std::ofstream out(record_file(), std::ios::app);
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw IoError("failed to append to cache " + record_file().string());
  index_.insert_or_assign(key, translation);
}

std::size_t TranslationCache::entries() const {
  std::shared_lock lock(mutex_);
  return index_.size();
}

std::uintmax_t TranslationCache::size_bytes() const {
  std::shared_lock lock(mutex_);
  std::error_code ec;
  const auto size = fs::file_size(record_file(), ec);
  return ec ? 0 : size;
}

void TranslationCache::clear() {
  std::unique_lock lock(mutex_);
  std::ofstream out(record_file(), std::ios::trunc);
  if (!out) throw IoError("failed to truncate cache " + record_file().string());
  index_.clear();
}

CachedBackend::CachedBackend(std::shared_ptr<Backend> inner,
                             std::shared_ptr<TranslationCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!inner_ || !cache_) throw ConfigError("cached backend needs a backend and a store");
  set_allow_same_language(inner_->allow_same_language());
}

std::string CachedBackend::do_translate(const TranslationRequest& request) {
  const std::string key = cache_key(request);
  if (auto hit = cache_->lookup(key)) {
    ++hits_;
    return *std::move(hit);
  }
  ++misses_;
  std::string translation = inner_->translate(request);
  cache_->store(request, key, translation);
  return translation;
}

std::shared_ptr<Backend> cached(std::shared_ptr<Backend> inner,
                                std::shared_ptr<TranslationCache> cache) {
  return std::make_shared<CachedBackend>(std::move(inner), std::move(cache));
}

}  // namespace cyclemt
