#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/collection.hpp"
#include "core/normalize.hpp"

namespace nerkit {

inline constexpr std::uint32_t no_lemma = std::numeric_limits<std::uint32_t>::max();

struct index_params {
  double k1 = 1.2;   // Okapi defaults
  double b = 0.75;
  std::uint32_t phrase_n_lo = 1;  // token n-gram range covered by phrase units
  std::uint32_t phrase_n_hi = 5;
};

struct posting {
  std::uint32_t doc;  // index into collection.docs
  std::uint32_t pos;  // token position within the doc
};

/// Sentence-bounded token n-gram; its character span comes from the covered
/// tokens.
struct phrase_unit {
  std::uint32_t doc;
  std::uint32_t tok_start;
  std::uint32_t tok_len;
};

/// Everything the four fast search techniques need, built over one
/// collection + normalizer pair and persisted as a single versioned file.
struct search_indexes {
  index_params params;
  normalizer norm;
  std::uint64_t collection_fingerprint = 0;

  std::vector<std::string> lemma_table;                  // id -> lemma
  std::unordered_map<std::string, std::uint32_t> lemma_ids;
  std::vector<std::vector<std::uint32_t>> doc_lemmas;    // per doc, per token

  // positional postings per lemma id, sorted by (doc, pos)
  std::vector<std::vector<posting>> postings;

  // phrase units in (doc, tok_start, tok_len) order, inverted per lemma id
  std::vector<phrase_unit> units;
  std::vector<std::vector<std::uint32_t>> unit_postings;
  double avgdl = 0.0;

  std::uint32_t lemma_id(const std::string& lemma) const {
    auto it = lemma_ids.find(lemma);
    return it == lemma_ids.end() ? no_lemma : it->second;
  }
  std::uint64_t unit_count() const { return units.size(); }
  std::uint32_t df(std::uint32_t lemma) const {
    return static_cast<std::uint32_t>(unit_postings[lemma].size());
  }
};

search_indexes build_indexes(const document_collection& col, normalizer norm,
                             const index_params& params, std::size_t jobs = 1);

void save_indexes(const search_indexes& idx, const std::string& path);

/// Loads and re-derives the posting structures; refuses an index whose
/// fingerprint does not match the given collection.
search_indexes load_indexes(const std::string& path,
                            const document_collection& col);

/// Token-start substrings of `doc` whose codepoint length lies in
/// [lo, hi]; `stride` steps over starting tokens.  Emitted in document
/// order: by start, then by end.
std::vector<span> enumerate_windows(const document& doc, std::uint32_t lo,
                                    std::uint32_t hi, std::uint32_t stride);

/// Accepted character lengths for a target length and tolerance ratio:
/// [ceil(target*(1-r)), floor(target*(1+r))], never below 1.
std::pair<std::uint32_t, std::uint32_t> length_window(std::uint32_t target,
                                                      double tolerance_ratio);

}  // namespace nerkit
