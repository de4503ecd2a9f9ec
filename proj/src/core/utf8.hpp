#pragma once

#include <cstdint>
#include <string>
#include <string_view>

// All character offsets in this codebase count Unicode scalar values, not
// bytes. These helpers convert between UTF-8 byte strings and scalar
// sequences and provide the small character classifier used by the
// tokenizer and sentence splitter (Latin ranges covering Czech, Latin and
// German orthography, plus Greek and Cyrillic as a courtesy).

namespace nerkit::utf8 {

/// Strict decoder; throws errc::invalid_encoding on malformed input
/// (truncated sequences, overlong forms, surrogates, out-of-range values).
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view chars);
std::string encode(char32_t c);

std::size_t length(std::string_view text);

bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_letter(char32_t c);
bool is_alnum(char32_t c);
bool is_upper(char32_t c);

/// Single-codepoint lowercasing over the Latin, Greek and Cyrillic ranges;
/// identity elsewhere. fold(fold(c)) == fold(c).
char32_t fold(char32_t c);
std::u32string fold(std::u32string_view s);
std::string fold_utf8(std::string_view s);

}  // namespace nerkit::utf8
