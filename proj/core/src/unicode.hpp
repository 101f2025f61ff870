#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cyclemt::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes UTF-8; invalid or truncated sequences, overlongs and surrogates
/// each become one U+FFFD.
std::u32string decode(std::string_view utf8);

void append_utf8(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);

/// Han, kana and Hangul syllables: characters segmented one per token.
bool is_cjk(char32_t cp);

/// Simple one-to-one lowercase mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t cp);

}  // namespace cyclemt::unicode
