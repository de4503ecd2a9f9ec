#include "core/textseg.hpp"

#include "core/fsio.hpp"
#include "core/utf8.hpp"

namespace nerkit {

std::vector<token> tokenize(const std::u32string& chars) {
  std::vector<token> out;
  std::size_t i = 0;
  const std::size_t n = chars.size();
  while (i < n) {
    if (utf8::is_space(chars[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (utf8::is_alnum(chars[i])) {
      while (i < n && utf8::is_alnum(chars[i])) ++i;
    } else {
      ++i;  // punctuation: one char, one token
    }
    token t;
    t.text = utf8::encode(
        std::u32string_view(chars).substr(start, i - start));
    t.char_start = static_cast<std::uint32_t>(start);
    t.char_end = static_cast<std::uint32_t>(i);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<token> tokenize(const std::string& text) {
  return tokenize(utf8::decode(text));
}

abbreviation_set abbreviation_set::load(const std::string& path) {
  abbreviation_set set;
  for (const auto& line : split_lines(read_text_file(path))) {
    if (line.empty() || line[0] == '#') continue;
    set.entries.insert(utf8::fold_utf8(line));
  }
  return set;
}

bool abbreviation_set::contains_folded(const std::string& word_with_dot) const {
  return entries.count(utf8::fold_utf8(word_with_dot)) > 0;
}

std::vector<span> split_sentences(const std::u32string& chars,
                                  const abbreviation_set& abbrev) {
  std::vector<span> spans;
  const std::size_t n = chars.size();
  if (n == 0) return spans;
  std::size_t sent_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char32_t c = chars[i];
    if (c != U'.' && c != U'!' && c != U'?') continue;
    std::size_t j = i + 1;
    while (j < n && utf8::is_space(chars[j])) ++j;
    if (j == i + 1 || j == n) continue;  // no whitespace, or end of text
    if (!utf8::is_upper(chars[j]) && !utf8::is_digit(chars[j])) continue;
    if (c == U'.') {
      // word ending at this dot, e.g. "S." — abbreviation suppresses the break
      std::size_t w = i;
      while (w > sent_start && !utf8::is_space(chars[w - 1])) --w;
      const std::string word =
          utf8::encode(std::u32string_view(chars).substr(w, i + 1 - w));
      if (abbrev.contains_folded(word)) continue;
    }
    spans.push_back({static_cast<std::uint32_t>(sent_start),
                     static_cast<std::uint32_t>(j)});
    sent_start = j;
    i = j - 1;
  }
  if (sent_start < n)
    spans.push_back({static_cast<std::uint32_t>(sent_start),
                     static_cast<std::uint32_t>(n)});
  return spans;
}

std::vector<span> split_sentences(const std::string& text,
                                  const abbreviation_set& abbrev) {
  return split_sentences(utf8::decode(text), abbrev);
}

}  // namespace nerkit
