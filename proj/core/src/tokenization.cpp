#include "cyclemt/tokenization.hpp"

#include <algorithm>
#include <utility>

#include "cyclemt/error.hpp"
#include "unicode.hpp"

namespace cyclemt {

namespace {

std::string lowered(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) unicode::append_utf8(out, unicode::to_lower(cp));
  return out;
}

std::string single(char32_t cp) {
  std::string out;
  unicode::append_utf8(out, cp);
  return out;
}

void split_chunk(std::u32string_view chunk, std::vector<std::string>& out) {
  const auto is_punct = [](char32_t cp) { return unicode::is_punctuation(cp); };
  const auto first = std::find_if_not(chunk.begin(), chunk.end(), is_punct);
  if (first == chunk.end()) {
    for (char32_t cp : chunk) out.push_back(single(cp));
    return;
  }
  const auto last = std::find_if_not(chunk.rbegin(), chunk.rend(), is_punct).base();
  for (auto it = chunk.begin(); it != first; ++it) out.push_back(single(*it));
  out.push_back(lowered(std::u32string_view(&*first, static_cast<std::size_t>(last - first))));
  for (auto it = last; it != chunk.end(); ++it) out.push_back(single(*it));
}

}  // namespace

LanguageTag::LanguageTag(std::string code, std::string display_name)
    : code_(std::move(code)), display_name_(std::move(display_name)) {
  const bool bad_code = code_.empty() || std::any_of(code_.begin(), code_.end(), [](char c) {
                          return (c >= 'A' && c <= 'Z') || c == ' ' || (c >= '\t' && c <= '\r');
                        });
  if (bad_code) {
    throw ConfigError("invalid language code '" + code_ +
                      "': must be non-empty, lowercase and without whitespace");
  }
  if (display_name_.empty()) {
    throw ConfigError("language '" + code_ + "' has an empty display name");
  }
}

Segmentation parse_segmentation(std::string_view name) {
  if (name == "whitespace") return Segmentation::kWhitespace;
  if (name == "character") return Segmentation::kCharacter;
  throw ConfigError("unknown segmentation '" + std::string(name) +
                    "' (expected whitespace or character)");
}

std::string_view to_string(Segmentation segmentation) {
  return segmentation == Segmentation::kWhitespace ? "whitespace" : "character";
}

std::vector<std::string> segment_whitespace(std::string_view text) {
  const std::u32string decoded = unicode::decode(text);
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < decoded.size()) {
    while (start < decoded.size() && unicode::is_whitespace(decoded[start])) ++start;
    std::size_t end = start;
    while (end < decoded.size() && !unicode::is_whitespace(decoded[end])) ++end;
    if (end > start) {
      split_chunk(std::u32string_view(decoded).substr(start, end - start), tokens);
    }
    start = end;
  }
  return tokens;
}

std::vector<std::string> segment_characters(std::string_view text) {
  const std::u32string decoded = unicode::decode(text);
  std::vector<std::string> tokens;
  std::string run;
  const auto flush = [&] {
    if (!run.empty()) tokens.push_back(std::exchange(run, {}));
  };
  for (char32_t cp : decoded) {
    if (unicode::is_whitespace(cp)) {
      flush();
    } else if (unicode::is_punctuation(cp) || unicode::is_cjk(cp)) {
      flush();
      tokens.push_back(single(cp));
    } else {
      unicode::append_utf8(run, unicode::to_lower(cp));
    }
  }
  flush();
  return tokens;
}

TokenizerRegistry TokenizerRegistry::with_defaults() {
  TokenizerRegistry registry;
  registry.add(LanguageTag("en", "English"), Segmentation::kWhitespace);
  registry.add(LanguageTag("fr", "French"), Segmentation::kWhitespace);
  registry.add(LanguageTag("de", "German"), Segmentation::kWhitespace);
  registry.add(LanguageTag("es", "Spanish"), Segmentation::kWhitespace);
  registry.add(LanguageTag("pt", "Portuguese"), Segmentation::kWhitespace);
  registry.add(LanguageTag("it", "Italian"), Segmentation::kWhitespace);
  registry.add(LanguageTag("ru", "Russian"), Segmentation::kWhitespace);
  registry.add(LanguageTag("ko", "Korean"), Segmentation::kWhitespace);
  registry.add(LanguageTag("zh", "Chinese"), Segmentation::kCharacter);
  registry.add(LanguageTag("ja", "Japanese"), Segmentation::kCharacter);
  return registry;
}

void TokenizerRegistry::add(LanguageTag language, Segmentation segmentation) {
  add(std::move(language), segmentation == Segmentation::kWhitespace
                               ? Segmenter(segment_whitespace)
                               : Segmenter(segment_characters));
}

void TokenizerRegistry::add(LanguageTag language, Segmenter segmenter) {
  if (!segmenter) throw ConfigError("empty segmenter for language '" + language.code() + "'");
  std::string code = language.code();
  entries_.insert_or_assign(std::move(code), Entry{std::move(language), std::move(segmenter)});
}

bool TokenizerRegistry::contains(std::string_view code) const {
  return entries_.find(code) != entries_.end();
}

const TokenizerRegistry::Entry& TokenizerRegistry::entry(std::string_view code) const {
  const auto it = entries_.find(code);
  if (it == entries_.end()) {
    throw ConfigError("unknown language '" + std::string(code) + "'");
  }
  return it->second;
}

const LanguageTag& TokenizerRegistry::language(std::string_view code) const {
  return entry(code).language;
}

std::vector<LanguageTag> TokenizerRegistry::languages() const {
  std::vector<LanguageTag> out;
  out.reserve(entries_.size());
  for (const auto& [code, e] : entries_) out.push_back(e.language);
  return out;
}

TokenSequence TokenizerRegistry::tokenize(std::string_view text,
                                          const LanguageTag& language) const {
  const Entry& e = entry(language.code());
  std::vector<std::string> tokens = e.segmenter(text);
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  return TokenSequence{std::move(tokens), e.language};
}

const TokenizerRegistry& default_registry() {
  static const TokenizerRegistry registry = TokenizerRegistry::with_defaults();
  return registry;
}

TokenSequence tokenize(std::string_view text, const LanguageTag& language) {
  return default_registry().tokenize(text, language);
}

NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0) throw UsageError("n-gram order must be >= 1");
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

NgramCounts ngrams(const TokenSequence& sequence, std::size_t n) {
  return ngrams(std::span<const std::string>(sequence.tokens), n);
}

std::size_t total_count(const NgramCounts& counts) {
  std::size_t total = 0;
  for (const auto& [gram, count] : counts) total += count;
  return total;
}

}  // namespace cyclemt
