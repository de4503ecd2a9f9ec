#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/indexes.hpp"
#include "core/types.hpp"

namespace nerkit {

enum class method : std::uint8_t {
  jaccard = 0,
  bm25,
  boolean_phrase,
  fuzzy_regex,
  edit_rerank,
  embedding_rerank,
  rrf,
  concat,
};

const char* method_name(method m);
method method_from(const std::string& s);

/// One retrieval hit.  Offsets are document-level codepoint positions;
/// `origin` records which technique produced the hit (fusion keeps the
/// source technique, so a concat list shows fuzzy_regex/rrf provenance).
struct candidate {
  std::uint32_t doc = 0;  // index into the collection
  std::string doc_id;
  std::uint32_t char_start = 0;
  std::uint32_t char_end = 0;
  std::string matched_text;
  double score = 0.0;
  method origin = method::jaccard;
};

struct query {
  std::string entity_id;
  std::string surface;
  entity_type type = entity_type::per;
  std::vector<std::string> tokens;  // surface tokens, as written
  std::vector<std::string> lemmas;  // one per token, via the index normalizer
  std::string folded;               // case-folded surface
};

query make_query(std::string entity_id, std::string surface, entity_type type,
                 const normalizer& norm);

struct retrieval_options {
  std::size_t limit = 10000;
  double window_tolerance = 0.3;  // substring length window around |surface|
  std::uint32_t window_stride = 1;
  long max_edits = -1;            // -1: ceil(|surface| / 5)
  std::uint32_t ngram_delta = 1;  // phrase units within |tokens| +- delta
  double rrf_k = 60.0;
  bool rrf_fast_only = false;     // fuse only the four base lists
};

/// Shared ranking order: score descending, then doc_id, char_start, char_end
/// — the tie-break every result list uses so runs are reproducible anywhere.
void sort_candidates(std::vector<candidate>& cands);
void truncate_candidates(std::vector<candidate>& cands, std::size_t limit);

/// Substring windows scored by the mean of char-bigram and word Jaccard
/// against the (folded) surface; zero-score windows are dropped.
std::vector<candidate> search_jaccard(const query& q,
                                      const document_collection& col,
                                      const retrieval_options& opt);

double bm25_idf(std::uint64_t total_units, std::uint64_t df);
double bm25_term_score(double idf, double tf, double unit_len, double avgdl,
                       double k1, double b);

/// Phrase units of length |query tokens| +- ngram_delta ranked by BM25 over
/// the query's distinct lemmas; units matching no term are dropped.
std::vector<candidate> search_bm25(const query& q,
                                   const document_collection& col,
                                   const search_indexes& idx,
                                   const retrieval_options& opt);

/// Exact contiguous lemma-sequence matches, ranked by character edit
/// distance to the surface (score = -distance).
std::vector<candidate> search_boolean_phrase(const query& q,
                                             const document_collection& col,
                                             const search_indexes& idx,
                                             const retrieval_options& opt);

/// All minimal substrings within edit distance max_edits of the folded
/// surface; a span is kept only if no proper sub-span matches at least as
/// well, and overlapping survivors collapse to the best one per cluster
/// (lowest distance, then earliest, then shortest).
std::vector<candidate> search_fuzzy_regex(const query& q,
                                          const document_collection& col,
                                          const retrieval_options& opt);

/// Rows `entity_id\tmethod\tdoc_id\tchar_start\tchar_end\tscore\tmatched_text`
/// (matched text TSV-escaped), one block per entity in the given order.
void write_candidates_tsv(
    const std::vector<std::pair<std::string, std::vector<candidate>>>& per_entity,
    const std::string& path, std::uint64_t seed);

}  // namespace nerkit
