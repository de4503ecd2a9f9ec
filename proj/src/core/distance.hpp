#pragma once

#include <cstddef>
#include <string>

namespace nerkit {

enum class gram : int { character, word };

/// Levenshtein distance (unit insert/delete/substitute) over codepoints or
/// over tokens.  No case folding here — callers fold first when they want it.
std::size_t edit_distance(const std::string& a, const std::string& b, gram mode);
std::size_t edit_distance(const std::u32string& a, const std::u32string& b);

/// Char mode: Jaccard of character-bigram sets, where a one-codepoint string
/// contributes the set {that codepoint} so single letters still compare
/// (otherwise any two of them would trivially score 1.0).  Word mode:
/// Jaccard of token sets.  Two empty inputs score 1.0.
double jaccard_similarity(const std::string& a, const std::string& b, gram mode);

}  // namespace nerkit
