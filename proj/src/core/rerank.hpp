#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "core/retrieval.hpp"

namespace nerkit {

/// Precomputed text vectors, one record per line `key\tv1 v2 ... vd`.
/// The dimension comes from the first record and is enforced after that.
struct embedding_store {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  static embedding_store load(const std::string& path);
  const std::vector<double>* find(const std::string& key) const;
};

double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b);

/// Stable ascending sort by (word edit distance, char edit distance) to the
/// surface, case-folded; a permutation of the input.
std::vector<candidate> rerank_edit_distance(const query& q,
                                            std::vector<candidate> cands);

/// Descending cosine similarity between the surface's vector and each
/// candidate's matched-text vector; candidates without a vector keep their
/// relative order after all scored ones.  MissingQueryEmbedding when the
/// surface itself has no vector.
std::vector<candidate> rerank_embedding(const query& q,
                                        std::vector<candidate> cands,
                                        const embedding_store& store);

/// Reciprocal rank fusion over (doc_id, char_start, char_end) identity:
/// score = sum over lists of 1/(k + rank), rank starting at 1.
std::vector<candidate> fuse_rrf(
    const std::vector<std::vector<candidate>>& lists, double rrf_k);

/// Fuzzy results first, then the fused list minus anything that duplicates
/// (same identity key or overlapping span, same doc) a fuzzy result.  Each
/// surviving entry keeps the method that produced it.
std::vector<candidate> fuse_concat(const std::vector<candidate>& fuzzy,
                                   const std::vector<candidate>& fused);

}  // namespace nerkit
