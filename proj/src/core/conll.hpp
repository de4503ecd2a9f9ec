#pragma once

#include <cstdint>
#include <string>

#include "core/types.hpp"

namespace nerkit {

/// Corpus files are CoNLL-style UTF-8 text: per sentence a header comment
/// `# id=<sid> doc=<did> lang=<code> split=<...>`, one `<token>\t<label>`
/// line per token, and a blank line.  Comment lines other than `# id=` are
/// skipped.  Sentence text in a loaded corpus is the tokens joined by single
/// spaces, so char offsets written to a gold sidecar use that coordinate
/// system and survive a round trip.
corpus read_corpus(const std::string& path);

void write_corpus(const corpus& c, const std::string& path, std::uint64_t seed);

/// Gold sidecar: one record per line
/// `<sentence_id>\t<type>\t<char_start>\t<char_end>\t<parent_index|-1>`,
/// parents before children (parent_index counts records of the same
/// sentence).  attach_gold validates spans and builds the nesting trees.
void attach_gold(corpus& c, const std::string& sidecar_path);

void write_gold_sidecar(const corpus& c, const std::string& path,
                        std::uint64_t seed);

/// Human review file: one block per test-split sentence with mentions shown
/// as bracketed [PER ...] / [LOC ...] segments.
void write_review(const corpus& c, const std::string& path, std::uint64_t seed);

}  // namespace nerkit
