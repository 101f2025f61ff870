#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "cyclemt/backend.hpp"

namespace cyclemt {

std::string sha256_hex(std::string_view data);

/// Hex SHA-256 over (model, source code, target code, text, canonical params).
std::string cache_key(const TranslationRequest& request);

/// Persistent translation store: one directory holding an append-only
/// `records.jsonl`, indexed in memory on open. Reads are concurrent, writes
/// are serialized.
class TranslationCache {
 public:
  static constexpr std::string_view kRecordFile = "records.jsonl";

  /// Creates the directory if needed. Throws ConfigError when it is not
  /// writable. Corrupt records are skipped with a warning.
  static std::shared_ptr<TranslationCache> open(const std::filesystem::path& dir);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const TranslationRequest& request, const std::string& key,
             const std::string& translation);

  std::size_t entries() const;
  std::uintmax_t size_bytes() const;
  /// Number of lines skipped as corrupt during open.
  std::size_t skipped_records() const noexcept { return skipped_; }
  void clear();

  const std::filesystem::path& directory() const noexcept { return dir_; }
  std::filesystem::path record_file() const { return dir_ / kRecordFile; }

 private:
  explicit TranslationCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void load();

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> index_;
  std::size_t skipped_ = 0;
};

/// Wraps any backend with a cache; same contract, fewer inner calls.
class CachedBackend final : public Backend {
 public:
  CachedBackend(std::shared_ptr<Backend> inner, std::shared_ptr<TranslationCache> cache);

  std::size_t hits() const noexcept { return hits_.load(); }
  std::size_t misses() const noexcept { return misses_.load(); }
  Backend& inner() noexcept { return *inner_; }

 protected:
  std::string do_translate(const TranslationRequest& request) override;

 private:
  std::shared_ptr<Backend> inner_;
  std::shared_ptr<TranslationCache> cache_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

std::shared_ptr<Backend> cached(std::shared_ptr<Backend> inner,
                                std::shared_ptr<TranslationCache> cache);

}  // namespace cyclemt
