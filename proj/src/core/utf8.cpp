#include "core/utf8.hpp"

#include "core/error.hpp"

namespace nerkit::utf8 {

namespace {

[[noreturn]] void bad_byte(std::size_t offset) {
  raise(errc::invalid_encoding,
        "invalid UTF-8 sequence at byte offset " + std::to_string(offset));
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xe0) == 0xc0) {
      cp = b0 & 0x1f;
      len = 2;
    } else if ((b0 & 0xf0) == 0xe0) {
      cp = b0 & 0x0f;
      len = 3;
    } else if ((b0 & 0xf8) == 0xf0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad_byte(i);
    }
    if (i + len > text.size()) bad_byte(i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xc0) != 0x80) bad_byte(i + k);
      cp = (cp << 6) | (b & 0x3f);
    }
    static constexpr char32_t min_for_len[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < min_for_len[len]) bad_byte(i);  // overlong
    if (cp >= 0xd800 && cp <= 0xdfff) bad_byte(i);      // surrogate
    if (cp > 0x10ffff) bad_byte(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  }
  return out;
}

std::string encode(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size());
  for (char32_t c : chars) out += encode(c);
  return out;
}

std::size_t length(std::string_view text) { return decode(text).size(); }

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0xa0;
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c >= 0xc0 && c <= 0xff) return c != 0xd7 && c != 0xf7;
  if (c >= 0x100 && c <= 0x24f) return true;   // Latin Extended-A/B
  if (c >= 0x370 && c <= 0x3ff) return true;   // Greek
  if (c >= 0x400 && c <= 0x4ff) return true;   // Cyrillic
  return false;
}

bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

bool is_upper(char32_t c) {
  if (c >= U'A' && c <= U'Z') return true;
  if (c >= 0xc0 && c <= 0xde) return c != 0xd7;
  // Latin Extended-A alternates casing pairs mid-block.
  if (c >= 0x100 && c <= 0x137) return (c & 1) == 0;
  if (c >= 0x139 && c <= 0x148) return (c & 1) == 1;
  if (c >= 0x14a && c <= 0x177) return (c & 1) == 0;
  if (c == 0x178 || c == 0x179 || c == 0x17b || c == 0x17d) return true;
  if (c >= 0x391 && c <= 0x3a9) return c != 0x3a2;
  if (c >= 0x400 && c <= 0x42f) return true;
  return false;
}

char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0xc0 && c <= 0xde && c != 0xd7) return c + 0x20;
  if (c >= 0x100 && c <= 0x137 && (c & 1) == 0) return c + 1;
  if (c >= 0x139 && c <= 0x148 && (c & 1) == 1) return c + 1;
  if (c >= 0x14a && c <= 0x177 && (c & 1) == 0) return c + 1;
  if (c == 0x178) return 0xff;
  if (c == 0x179 || c == 0x17b || c == 0x17d) return c + 1;
  if (c == 0x17f) return U's';  // long s
  if (c >= 0x391 && c <= 0x3a9 && c != 0x3a2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42f) return c + 0x20;
  if (c >= 0x400 && c <= 0x40f) return c + 0x50;
  return c;
}

std::u32string fold(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) out.push_back(fold(c));
  return out;
}

std::string fold_utf8(std::string_view s) { return encode(fold(decode(s))); }

}  // namespace nerkit::utf8
