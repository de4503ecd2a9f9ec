#include "core/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rerank.hpp"

namespace nerkit {

retrieval_comparison compare_methods(
    const gazetteer& gaz, const document_collection& col,
    const search_indexes& idx, const relevance_judgments& judgments,
    const retrieval_options& opt, const std::vector<named_embeddings>& stores,
    std::size_t depth, double beta, std::size_t jobs) {
  std::vector<query> queries;
  for (const auto& e : gaz.entries)
    queries.push_back(make_query(e.entity_id, e.surface, e.type, idx.norm));
  std::sort(queries.begin(), queries.end(),
            [](const query& a, const query& b) {
              return a.entity_id < b.entity_id;
            });

  const std::vector<method> direct = {
      method::jaccard,      method::bm25, method::boolean_phrase,
      method::fuzzy_regex,  method::edit_rerank};

  std::vector<method_results> rows;
  for (method m : direct) rows.push_back({method_name(m), {}});
  for (const auto& ne : stores) rows.push_back({"embedding_" + ne.name, {}});
  rows.push_back({method_name(method::rrf), {}});
  rows.push_back({method_name(method::concat), {}});
  for (auto& row : rows) row.per_entity.resize(queries.size());

  parallel_for(queries.size(), jobs, [&](std::size_t qi) {
    const query& q = queries[qi];
    std::size_t r = 0;
    for (method m : direct)
      rows[r++].per_entity[qi] = {q.entity_id,
                                  run_method(q, m, col, idx, opt, stores)};
    if (!stores.empty()) {
      auto pool = base_candidate_pool(q, col, idx, opt);
      for (const auto& ne : stores) {
        auto list = rerank_embedding(q, pool, *ne.store);
        truncate_candidates(list, opt.limit);
        rows[r++].per_entity[qi] = {q.entity_id, std::move(list)};
      }
    }
    rows[r++].per_entity[qi] = {
        q.entity_id, run_method(q, method::rrf, col, idx, opt, stores)};
    rows[r++].per_entity[qi] = {
        q.entity_id, run_method(q, method::concat, col, idx, opt, stores)};
  });

  return evaluate_retrieval(rows, judgments, depth, beta);
}

namespace {

corpus split_subset(const corpus& c, split part) {
  corpus out;
  out.name = c.name + "-" + split_name(part);
  for (const auto& s : c.sentences)
    if (s.part == part) out.sentences.push_back(s);
  return out;
}

double test_fbeta(const tagger_model& model, const corpus& gold_test,
                  double beta) {
  const corpus pred = annotate_corpus(model, gold_test);
  return token_metrics(gold_test, pred, beta).f;
}

}  // namespace

ablation_result run_ablation(const corpus& small,
                             const document_collection& col,
                             const ablation_config& cfg) {
  const corpus gold_test = split_subset(small, split::test);
  if (gold_test.sentences.empty())
    raise(errc::empty_split, "test split is empty");

  train_config weighted = cfg.train;
  weighted.weighted = true;
  train_config unweighted = cfg.train;
  unweighted.weighted = false;

  // medium: the input corpus augmented by a model trained on it
  const tagger_model augmenter = train(small, cfg.features, weighted);
  corpus medium = augment_corpus(small, augmenter);
  medium.name = "medium";

  // large: the whole collection annotated by the medium model, with the
  // input corpus's validation and test sentences carried over unchanged
  const tagger_model annotator = train(medium, cfg.features, weighted);
  corpus large = annotate_collection(annotator, col, cfg.jobs);
  large.name = "large";
  std::unordered_set<std::string> held_out;
  for (const auto& s : small.sentences)
    if (s.part == split::validation || s.part == split::test)
      held_out.insert(s.sentence_id);
  std::erase_if(large.sentences, [&](const annotated_sentence& s) {
    return held_out.count(s.sentence_id) > 0;
  });
  for (auto& s : large.sentences) s.part = split::train;
  for (const auto& s : small.sentences)
    if (held_out.count(s.sentence_id)) large.sentences.push_back(s);
  validate_corpus(large);

  ablation_result out;
  const std::pair<std::string, const corpus*> variants[] = {
      {"small", &small}, {"medium", &medium}, {"large", &large}};
  for (const auto& [name, c] : variants) {
    ablation_row row;
    row.variant = name;
    row.f_weighted =
        test_fbeta(train(*c, cfg.features, weighted), gold_test,
                   cfg.train.beta);
    row.f_unweighted =
        test_fbeta(train(*c, cfg.features, unweighted), gold_test,
                   cfg.train.beta);
    out.values.emplace_back("ablate." + name + ".wce", row.f_weighted);
    out.values.emplace_back("ablate." + name + ".ce", row.f_unweighted);
    out.rows.push_back(std::move(row));
  }

  char wcol[32], ccol[32];
  std::snprintf(wcol, sizeof wcol, "WCE-F(%g)", cfg.train.beta);
  std::snprintf(ccol, sizeof ccol, "CE-F(%g)", cfg.train.beta);
  std::vector<std::vector<std::string>> table;
  table.push_back({"corpus", wcol, ccol});
  char buf[32];
  for (const auto& r : out.rows) {
    std::vector<std::string> cells = {r.variant};
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * r.f_weighted);
    cells.push_back(buf);
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * r.f_unweighted);
    cells.push_back(buf);
    table.push_back(std::move(cells));
  }
  out.table = format_table(table);
  return out;
}

}  // namespace nerkit
