#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "core/types.hpp"

namespace nerkit {

/// Maximal runs of letters/digits become tokens; every other non-whitespace
/// character is a token of its own.  Offsets are codepoint positions into the
/// input and always recover the exact substring.
std::vector<token> tokenize(const std::u32string& chars);
std::vector<token> tokenize(const std::string& text);

struct abbreviation_set {
  // folded forms including the trailing dot, e.g. "s." or "dr."
  std::unordered_set<std::string> entries;

  static abbreviation_set load(const std::string& path);
  bool contains_folded(const std::string& word_with_dot) const;
};

/// Sentence boundaries fall after {. ! ?} followed by whitespace and an
/// uppercase letter or digit, unless the word ending in '.' is a listed
/// abbreviation.  The returned spans partition the input (trailing
/// whitespace sticks to the preceding sentence).
std::vector<span> split_sentences(const std::u32string& chars,
                                  const abbreviation_set& abbrev);
std::vector<span> split_sentences(const std::string& text,
                                  const abbreviation_set& abbrev);

}  // namespace nerkit
