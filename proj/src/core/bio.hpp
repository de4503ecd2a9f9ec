#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace nerkit {

enum class bio_mode { strict, repair };

/// Decode a tag sequence into flat top-level mentions.  Mention offsets are
/// taken from the first/last token of each run.  In repair mode an I-X with
/// no valid predecessor is treated as B-X; in strict mode it is InvalidBio.
std::vector<entity_mention> parse_bio(const std::vector<label>& tags,
                                      const std::vector<token>& tokens,
                                      bio_mode mode = bio_mode::strict);

/// Encode mentions as tags.  A mention whose boundary falls mid-token is
/// expanded outward to full token boundaries.  Two mentions claiming the same
/// token is OverlapConflict; a mention touching no token is SpanOutOfRange.
std::vector<label> project_bio(const std::vector<token>& tokens,
                               const std::vector<entity_mention>& mentions);

/// Smallest token index range [first, last) covering every token that
/// overlaps the span.  SpanOutOfRange when no token overlaps.
std::pair<std::uint32_t, std::uint32_t> token_range(
    const std::vector<token>& tokens, span s);

bool is_valid_bio(const std::vector<label>& tags);

/// Structural checks for a whole corpus: unique sentence ids, |tags| =
/// |tokens|, ordered non-overlapping tokens, BIO validity, well-formed
/// nested gold mentions.  Throws on the first violation.
void validate_corpus(const corpus& c);

struct split_counts {
  std::uint64_t sentences = 0;
  std::uint64_t b_per = 0;
  std::uint64_t b_loc = 0;
};

struct corpus_statistics {
  std::array<split_counts, 4> by_split;  // indexed by split id
  split_counts total;
};

/// Counts computed from tags (not gold mentions); totals are additive over
/// splits by construction.
corpus_statistics corpus_stats(const corpus& c);

}  // namespace nerkit
