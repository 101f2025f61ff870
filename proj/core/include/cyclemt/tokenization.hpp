#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cyclemt {

/// A language known to the tokenizer registry. `code` is the short id ("en"),
/// `display_name` is what goes into prompts ("English").
class LanguageTag {
 public:
  /// Throws ConfigError unless code is non-empty lowercase without whitespace
  /// and display_name is non-empty.
  LanguageTag(std::string code, std::string display_name);

  const std::string& code() const noexcept { return code_; }
  const std::string& display_name() const noexcept { return display_name_; }

  friend bool operator==(const LanguageTag& a, const LanguageTag& b) noexcept {
    return a.code_ == b.code_;
  }

 private:
  std::string code_;
  std::string display_name_;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  LanguageTag language;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
};

enum class Segmentation {
  kWhitespace,  // split on Unicode whitespace, peel surrounding punctuation
  kCharacter,   // one token per CJK character, Latin/digit runs kept whole
};

/// Parses "whitespace" / "character". Throws ConfigError otherwise.
Segmentation parse_segmentation(std::string_view name);
std::string_view to_string(Segmentation segmentation);

using Segmenter = std::function<std::vector<std::string>(std::string_view)>;

std::vector<std::string> segment_whitespace(std::string_view text);
std::vector<std::string> segment_characters(std::string_view text);

/// Per-language tokenization strategies. A dictionary segmenter can be
/// registered for a language by passing a custom Segmenter.
class TokenizerRegistry {
 public:
  TokenizerRegistry() = default;

  /// en, fr, de, es, pt, it, ru, ko on whitespace; zh, ja per character.
  static TokenizerRegistry with_defaults();

  void add(LanguageTag language, Segmentation segmentation);
  void add(LanguageTag language, Segmenter segmenter);

  bool contains(std::string_view code) const;

  /// Throws ConfigError naming the code when it is not registered.
  const LanguageTag& language(std::string_view code) const;

  /// Registered languages ordered by code.
  std::vector<LanguageTag> languages() const;

  /// Deterministic; never throws on malformed UTF-8 (bad bytes become U+FFFD).
  /// Throws ConfigError if `language` is not registered.
  TokenSequence tokenize(std::string_view text, const LanguageTag& language) const;

 private:
  struct Entry {
    LanguageTag language;
    Segmenter segmenter;
  };
  const Entry& entry(std::string_view code) const;

  std::map<std::string, Entry, std::less<>> entries_;
};

const TokenizerRegistry& default_registry();

/// Tokenizes with default_registry().
TokenSequence tokenize(std::string_view text, const LanguageTag& language);

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::size_t>;

/// Every contiguous window of n tokens with its count; L tokens give
/// max(0, L - n + 1) windows in total. Throws UsageError when n == 0.
NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n);
NgramCounts ngrams(const TokenSequence& sequence, std::size_t n);

/// Sum of all counts in the multiset.
std::size_t total_count(const NgramCounts& counts);

}  // namespace cyclemt
