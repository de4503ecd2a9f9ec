#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "core/bootstrap.hpp"
#include "core/eval.hpp"
#include "core/tagger.hpp"

namespace nerkit {

/// Every retrieval technique over every gazetteer entity, scored against the
/// judgments: the four searches, the edit reranker, one `embedding_<name>`
/// row per vector store, rrf, and concat.  Entities run in parallel; output
/// is independent of the job count.
retrieval_comparison compare_methods(const gazetteer& gaz,
                                     const document_collection& col,
                                     const search_indexes& idx,
                                     const relevance_judgments& judgments,
                                     const retrieval_options& opt,
                                     const std::vector<named_embeddings>& stores,
                                     std::size_t depth = 10,
                                     double beta = 0.25,
                                     std::size_t jobs = 1);

struct ablation_config {
  feature_config features;
  train_config train;  // shared by the weighted and unweighted runs
  std::size_t jobs = 1;
};

struct ablation_row {
  std::string variant;  // small / medium / large
  double f_weighted = 0.0;
  double f_unweighted = 0.0;
};

struct ablation_result {
  std::vector<ablation_row> rows;
  std::string table;
  std::vector<std::pair<std::string, double>> values;
};

/// The loss-ablation matrix: three training corpora (the given one; it
/// augmented by a model trained on it; the whole collection annotated by a
/// model trained on the augmented one, keeping the given corpus's validation
/// and test sentences) x {weighted, unweighted} loss.  Every model is scored
/// by token F_beta on the given corpus's test split.
ablation_result run_ablation(const corpus& small,
                             const document_collection& col,
                             const ablation_config& cfg);

}  // namespace nerkit
