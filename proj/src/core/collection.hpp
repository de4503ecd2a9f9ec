#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/textseg.hpp"
#include "core/types.hpp"

namespace nerkit {

/// One OCR page/text, segmented.  Token and sentence offsets are
/// document-level codepoint positions; sentence spans are trimmed of
/// surrounding whitespace, tokens nest inside their sentence.
struct document {
  std::string doc_id;
  std::string language;
  std::string text;            // raw UTF-8
  std::u32string chars;        // decoded once at load, not persisted
  std::vector<span> sentences;
  std::vector<token> tokens;
  // tokens of sentence i are [sentence_token_begin[i], sentence_token_begin[i+1])
  std::vector<std::uint32_t> sentence_token_begin;
};

struct document_collection {
  std::vector<document> docs;

  const document* find(const std::string& doc_id) const;
  /// FNV-1a over ids and texts; persisted indexes carry it so a stale
  /// index/collection pairing is caught at load.
  std::uint64_t fingerprint() const;
};

/// Manifest: UTF-8 TSV `doc_id\tlanguage\trelative_path`, paths relative to
/// the manifest's directory.  Loads, segments and tokenizes every listed
/// file; `jobs` bounds worker threads and never changes the result.
document_collection load_collection(const std::string& manifest_path,
                                    const abbreviation_set& abbrev,
                                    std::size_t jobs = 1);

void save_collection_cache(const document_collection& c,
                           const std::string& path);
document_collection load_collection_cache(const std::string& path);

/// Index of the sentence containing the codepoint position (sentences are
/// trimmed, so a position in inter-sentence whitespace belongs to the
/// preceding sentence); SpanOutOfRange when past the end.
std::size_t sentence_at(const document& d, std::uint32_t pos);

}  // namespace nerkit
