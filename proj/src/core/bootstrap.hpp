#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/collection.hpp"
#include "core/rerank.hpp"
#include "core/retrieval.hpp"
#include "core/types.hpp"

namespace nerkit {

struct gazetteer_entry {
  std::string entity_id;
  entity_type type = entity_type::per;
  std::string surface;
};

/// TSV `entity_id\tentity_type\tsurface`; ids unique, surfaces non-empty.
struct gazetteer {
  std::vector<gazetteer_entry> entries;
  static gazetteer load(const std::string& path);
};

/// A vector store with the label it is reported under (several stores can
/// back the embedding reranker side by side).
struct named_embeddings {
  std::string name;
  const embedding_store* store = nullptr;
};

/// The four base method lists concatenated in method order, first hit per
/// (doc_id, span) identity kept — the candidate pool both rerankers reorder.
std::vector<candidate> base_candidate_pool(const query& q,
                                           const document_collection& col,
                                           const search_indexes& idx,
                                           const retrieval_options& opt);

/// Dispatch one technique for one query.  The rerankers reorder the four
/// base lists concatenated (in method order, identity-deduplicated); rrf
/// fuses the base lists plus every reranker unless rrf_fast_only is set;
/// concat puts fuzzy results before the rrf list.  Results are capped at
/// opt.limit.
std::vector<candidate> run_method(const query& q, method m,
                                  const document_collection& col,
                                  const search_indexes& idx,
                                  const retrieval_options& opt,
                                  const std::vector<named_embeddings>& stores);

struct extraction {
  std::uint32_t doc = 0;
  std::uint32_t sentence = 0;  // sentence index within the doc
  entity_mention mention;      // sentence-relative, no nesting
};

/// The sentence containing the span's start; the mention is clipped to that
/// sentence and rebased to sentence-relative offsets.
extraction extract_occurrence(const document_collection& col,
                              const candidate& c, entity_type type);

/// One sentence per distinct (doc, sentence); mentions deduplicated by
/// (type, token-aligned span); overlaps resolved longest-span first, ties by
/// earlier start then PER before LOC; survivors projected to tags.
/// Sentences come out ordered by (doc_id, sentence index) with ids
/// `<doc_id>#<index>`.
corpus merge_occurrences(const document_collection& col,
                         const std::vector<extraction>& extractions);

struct bootstrap_config {
  method technique = method::boolean_phrase;
  retrieval_options retrieval;
  double train_ratio = 0.8;
  double validation_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

/// Retrieval per gazetteer entity (reduced in entity_id order), extraction,
/// merging, tag projection and the seeded split — the whole silver-corpus
/// construction.  Deterministic for a fixed config.
corpus bootstrap_corpus(const gazetteer& gaz, const document_collection& col,
                        const search_indexes& idx, const bootstrap_config& cfg,
                        const std::vector<named_embeddings>& stores);

/// Seeded shuffle, then floor(r*n) sentences per split in train/validation/
/// test order, remainder to test.  Assignment only; sentence order is kept.
void split_corpus(corpus& c, double train_ratio, double validation_ratio,
                  double test_ratio, std::uint64_t seed);

}  // namespace nerkit
