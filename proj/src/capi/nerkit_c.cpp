#include "nerkit.h"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "core/bootstrap.hpp"
#include "core/collection.hpp"
#include "core/compare.hpp"
#include "core/conll.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/indexes.hpp"
#include "core/parallel.hpp"
#include "core/rerank.hpp"
#include "core/retrieval.hpp"
#include "core/tagger.hpp"
#include "core/textseg.hpp"

struct nerkit_collection {
  nerkit::document_collection v;
};
struct nerkit_indexes {
  nerkit::search_indexes v;
};
struct nerkit_gazetteer {
  nerkit::gazetteer v;
};
struct nerkit_embeddings {
  std::string name;
  nerkit::embedding_store store;
};
struct nerkit_corpus {
  nerkit::corpus v;
};
struct nerkit_model {
  nerkit::tagger_model v;
};
struct nerkit_report {
  std::vector<std::pair<std::string, double>> values;
  std::string body;
};

namespace {

thread_local std::string t_error;

nerkit_status status_of(nerkit::errc c) {
  using nerkit::errc;
  switch (c) {
    case errc::io: return NERKIT_E_IO;
    case errc::missing_file: return NERKIT_E_MISSING_FILE;
    case errc::duplicate_doc_id: return NERKIT_E_DUPLICATE_DOC_ID;
    case errc::invalid_encoding: return NERKIT_E_INVALID_ENCODING;
    case errc::parse: return NERKIT_E_PARSE;
    case errc::invalid_bio: return NERKIT_E_INVALID_BIO;
    case errc::overlap_conflict: return NERKIT_E_OVERLAP_CONFLICT;
    case errc::span_out_of_range: return NERKIT_E_SPAN_OUT_OF_RANGE;
    case errc::missing_class: return NERKIT_E_MISSING_CLASS;
    case errc::empty_split: return NERKIT_E_EMPTY_SPLIT;
    case errc::alignment: return NERKIT_E_ALIGNMENT;
    case errc::missing_query_embedding: return NERKIT_E_MISSING_QUERY_EMBEDDING;
    case errc::invalid_argument: return NERKIT_E_INVALID_ARGUMENT;
  }
  return NERKIT_E_UNKNOWN;
}

template <typename Fn>
nerkit_status wrap(Fn&& fn) {
  try {
    fn();
    t_error.clear();
    return NERKIT_OK;
  } catch (const nerkit::error& e) {
    t_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_error = e.what();
    return NERKIT_E_UNKNOWN;
  }
}

nerkit_status fail_arg(const char* msg) {
  t_error = msg;
  return NERKIT_E_INVALID_ARGUMENT;
}

std::string or_empty(const char* s) { return s ? std::string(s) : std::string(); }

nerkit::retrieval_options to_cpp(const nerkit_retrieval_options& o) {
  nerkit::retrieval_options r;
  r.limit = static_cast<std::size_t>(o.limit);
  r.window_tolerance = o.window_tolerance;
  r.window_stride = o.window_stride;
  r.max_edits = static_cast<long>(o.max_edits);
  r.ngram_delta = o.ngram_delta;
  r.rrf_k = o.rrf_k;
  r.rrf_fast_only = o.rrf_fast_only != 0;
  return r;
}

nerkit::feature_config to_cpp(const nerkit_feature_config& o) {
  nerkit::feature_config f;
  f.hash_dim = o.hash_dim;
  f.ngram_lo = o.ngram_lo;
  f.ngram_hi = o.ngram_hi;
  f.context = o.context;
  f.shape = o.shape != 0;
  return f;
}

nerkit::train_config to_cpp(const nerkit_train_config& o) {
  nerkit::train_config t;
  t.learning_rate = o.learning_rate;
  t.epochs = o.epochs;
  t.patience = o.patience;
  t.seed = o.seed;
  t.weighted = o.weighted != 0;
  t.smooth_fallback = o.smooth_fallback != 0;
  t.beta = o.beta;
  return t;
}

std::vector<nerkit::named_embeddings> to_cpp(nerkit_embeddings* const* stores,
                                             uint64_t n_stores) {
  std::vector<nerkit::named_embeddings> out;
  for (uint64_t i = 0; i < n_stores; ++i)
    out.push_back({stores[i]->name, &stores[i]->store});
  return out;
}

nerkit_report* report_from_train(const nerkit::tagger_model& model,
                                 const nerkit::train_report& tr) {
  auto* r = new nerkit_report;
  r->body = nerkit::render_train_report(model, tr);
  r->values.emplace_back("train.epochs_run",
                         static_cast<double>(tr.epochs.size()));
  r->values.emplace_back("train.best_epoch",
                         static_cast<double>(tr.best_epoch));
  r->values.emplace_back("train.best_val_fbeta", tr.best_val_fbeta);
  for (std::size_t e = 0; e < tr.epochs.size(); ++e) {
    const std::string p = "train.epoch." + std::to_string(e + 1);
    r->values.emplace_back(p + ".avg_loss", tr.epochs[e].avg_loss);
    r->values.emplace_back(p + ".val_fbeta", tr.epochs[e].val_fbeta);
  }
  return r;
}

}  // namespace

extern "C" {

const char* nerkit_last_error(void) { return t_error.c_str(); }

const char* nerkit_status_name(nerkit_status s) {
  switch (s) {
    case NERKIT_OK: return "Ok";
    case NERKIT_E_IO: return "IoError";
    case NERKIT_E_MISSING_FILE: return "MissingFile";
    case NERKIT_E_DUPLICATE_DOC_ID: return "DuplicateDocId";
    case NERKIT_E_INVALID_ENCODING: return "InvalidEncoding";
    case NERKIT_E_PARSE: return "ParseError";
    case NERKIT_E_INVALID_BIO: return "InvalidBio";
    case NERKIT_E_OVERLAP_CONFLICT: return "OverlapConflict";
    case NERKIT_E_SPAN_OUT_OF_RANGE: return "SpanOutOfRange";
    case NERKIT_E_MISSING_CLASS: return "MissingClass";
    case NERKIT_E_EMPTY_SPLIT: return "EmptySplit";
    case NERKIT_E_ALIGNMENT: return "AlignmentError";
    case NERKIT_E_MISSING_QUERY_EMBEDDING: return "MissingQueryEmbedding";
    case NERKIT_E_INVALID_ARGUMENT: return "InvalidArgument";
    case NERKIT_E_UNKNOWN: return "UnknownError";
  }
  return "UnknownError";
}

void nerkit_index_params_init(nerkit_index_params* p) {
  if (!p) return;
  const nerkit::index_params d;
  p->k1 = d.k1;
  p->b = d.b;
  p->phrase_n_lo = d.phrase_n_lo;
  p->phrase_n_hi = d.phrase_n_hi;
}

void nerkit_retrieval_options_init(nerkit_retrieval_options* p) {
  if (!p) return;
  const nerkit::retrieval_options d;
  p->limit = d.limit;
  p->window_tolerance = d.window_tolerance;
  p->window_stride = d.window_stride;
  p->max_edits = d.max_edits;
  p->ngram_delta = d.ngram_delta;
  p->rrf_k = d.rrf_k;
  p->rrf_fast_only = d.rrf_fast_only ? 1 : 0;
}

void nerkit_feature_config_init(nerkit_feature_config* p) {
  if (!p) return;
  const nerkit::feature_config d;
  p->hash_dim = d.hash_dim;
  p->ngram_lo = d.ngram_lo;
  p->ngram_hi = d.ngram_hi;
  p->context = d.context;
  p->shape = d.shape ? 1 : 0;
}

void nerkit_train_config_init(nerkit_train_config* p) {
  if (!p) return;
  const nerkit::train_config d;
  p->learning_rate = d.learning_rate;
  p->epochs = d.epochs;
  p->patience = d.patience;
  p->seed = d.seed;
  p->weighted = d.weighted ? 1 : 0;
  p->smooth_fallback = d.smooth_fallback ? 1 : 0;
  p->beta = d.beta;
}

void nerkit_bootstrap_config_init(nerkit_bootstrap_config* p) {
  if (!p) return;
  const nerkit::bootstrap_config d;
  p->technique = "boolean_phrase";
  nerkit_retrieval_options_init(&p->retrieval);
  p->train_ratio = d.train_ratio;
  p->validation_ratio = d.validation_ratio;
  p->test_ratio = d.test_ratio;
  p->seed = d.seed;
  p->jobs = d.jobs;
}

nerkit_status nerkit_collection_open(const char* manifest_path,
                                     const char* abbrev_path, uint64_t jobs,
                                     nerkit_collection** out) {
  if (!manifest_path || !out) return fail_arg("null argument");
  return wrap([&] {
    nerkit::abbreviation_set abbrev;
    if (abbrev_path) abbrev = nerkit::abbreviation_set::load(abbrev_path);
    auto* h = new nerkit_collection{
        nerkit::load_collection(manifest_path, abbrev,
                                static_cast<std::size_t>(jobs))};
    *out = h;
  });
}

nerkit_status nerkit_collection_open_cache(const char* path,
                                           nerkit_collection** out) {
  if (!path || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_collection{nerkit::load_collection_cache(path)};
  });
}

nerkit_status nerkit_collection_save_cache(const nerkit_collection* c,
                                           const char* path) {
  if (!c || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::save_collection_cache(c->v, path); });
}

uint64_t nerkit_collection_doc_count(const nerkit_collection* c) {
  return c ? c->v.docs.size() : 0;
}

void nerkit_collection_free(nerkit_collection* c) { delete c; }

nerkit_status nerkit_indexes_build(const nerkit_collection* c,
                                   const char* lemma_path,
                                   const char* suffix_path, int case_fold,
                                   const nerkit_index_params* params,
                                   uint64_t jobs, nerkit_indexes** out) {
  if (!c || !params || !out) return fail_arg("null argument");
  return wrap([&] {
    auto norm = nerkit::normalizer::load(or_empty(lemma_path),
                                         or_empty(suffix_path),
                                         case_fold != 0);
    nerkit::index_params p;
    p.k1 = params->k1;
    p.b = params->b;
    p.phrase_n_lo = params->phrase_n_lo;
    p.phrase_n_hi = params->phrase_n_hi;
    *out = new nerkit_indexes{nerkit::build_indexes(
        c->v, std::move(norm), p, static_cast<std::size_t>(jobs))};
  });
}

nerkit_status nerkit_indexes_open(const char* path, const nerkit_collection* c,
                                  nerkit_indexes** out) {
  if (!path || !c || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_indexes{nerkit::load_indexes(path, c->v)};
  });
}

nerkit_status nerkit_indexes_save(const nerkit_indexes* x, const char* path) {
  if (!x || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::save_indexes(x->v, path); });
}

void nerkit_indexes_free(nerkit_indexes* x) { delete x; }

nerkit_status nerkit_gazetteer_open(const char* path, nerkit_gazetteer** out) {
  if (!path || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_gazetteer{nerkit::gazetteer::load(path)};
  });
}

uint64_t nerkit_gazetteer_size(const nerkit_gazetteer* g) {
  return g ? g->v.entries.size() : 0;
}

void nerkit_gazetteer_free(nerkit_gazetteer* g) { delete g; }

nerkit_status nerkit_embeddings_open(const char* name, const char* path,
                                     nerkit_embeddings** out) {
  if (!name || !path || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_embeddings{name, nerkit::embedding_store::load(path)};
  });
}

void nerkit_embeddings_free(nerkit_embeddings* e) { delete e; }

nerkit_status nerkit_retrieve_to_file(const nerkit_gazetteer* g,
                                      const nerkit_collection* c,
                                      const nerkit_indexes* x,
                                      const char* method,
                                      const nerkit_retrieval_options* opt,
                                      nerkit_embeddings* const* stores,
                                      uint64_t n_stores, uint64_t jobs,
                                      uint64_t seed, const char* out_path) {
  if (!g || !c || !x || !method || !opt || !out_path ||
      (n_stores && !stores))
    return fail_arg("null argument");
  return wrap([&] {
    const nerkit::method m = nerkit::method_from(method);
    const auto options = to_cpp(*opt);
    const auto named = to_cpp(stores, n_stores);

    std::vector<nerkit::query> queries;
    for (const auto& e : g->v.entries)
      queries.push_back(
          nerkit::make_query(e.entity_id, e.surface, e.type, x->v.norm));
    std::sort(queries.begin(), queries.end(),
              [](const nerkit::query& a, const nerkit::query& b) {
                return a.entity_id < b.entity_id;
              });

    std::vector<std::pair<std::string, std::vector<nerkit::candidate>>>
        per_entity(queries.size());
    nerkit::parallel_for(
        queries.size(), static_cast<std::size_t>(jobs), [&](std::size_t i) {
          per_entity[i] = {queries[i].entity_id,
                           nerkit::run_method(queries[i], m, c->v, x->v,
                                              options, named)};
        });
    nerkit::write_candidates_tsv(per_entity, out_path, seed);
  });
}

nerkit_status nerkit_compare_methods(const nerkit_gazetteer* g,
                                     const nerkit_collection* c,
                                     const nerkit_indexes* x,
                                     const char* judgments_path,
                                     const nerkit_retrieval_options* opt,
                                     nerkit_embeddings* const* stores,
                                     uint64_t n_stores, uint64_t depth,
                                     double beta, uint64_t jobs,
                                     nerkit_report** out) {
  if (!g || !c || !x || !judgments_path || !opt || !out ||
      (n_stores && !stores))
    return fail_arg("null argument");
  return wrap([&] {
    const auto judgments = nerkit::relevance_judgments::load(judgments_path);
    const auto cmp = nerkit::compare_methods(
        g->v, c->v, x->v, judgments, to_cpp(*opt), to_cpp(stores, n_stores),
        static_cast<std::size_t>(depth), beta, static_cast<std::size_t>(jobs));
    auto* r = new nerkit_report;
    r->body = cmp.table;
    if (!cmp.warnings.empty()) {
      r->body += "\nwarnings:\n";
      for (const auto& w : cmp.warnings) {
        r->body += "  ";
        r->body += w;
        r->body += '\n';
      }
    }
    for (const auto& row : cmp.rows) {
      const std::string p = "method." + row.name;
      r->values.emplace_back(p + ".retrieved",
                             static_cast<double>(row.retrieved));
      r->values.emplace_back(p + ".relevant",
                             static_cast<double>(row.relevant_retrieved));
      r->values.emplace_back(p + ".precision", row.precision);
      r->values.emplace_back(p + ".recall", row.recall);
      r->values.emplace_back(p + ".fbeta", row.f);
    }
    *out = r;
  });
}

nerkit_status nerkit_bootstrap(const nerkit_gazetteer* g,
                               const nerkit_collection* c,
                               const nerkit_indexes* x,
                               const nerkit_bootstrap_config* cfg,
                               nerkit_embeddings* const* stores,
                               uint64_t n_stores, nerkit_corpus** out) {
  if (!g || !c || !x || !cfg || !cfg->technique || !out ||
      (n_stores && !stores))
    return fail_arg("null argument");
  return wrap([&] {
    nerkit::bootstrap_config bc;
    bc.technique = nerkit::method_from(cfg->technique);
    bc.retrieval = to_cpp(cfg->retrieval);
    bc.train_ratio = cfg->train_ratio;
    bc.validation_ratio = cfg->validation_ratio;
    bc.test_ratio = cfg->test_ratio;
    bc.seed = cfg->seed;
    bc.jobs = static_cast<std::size_t>(cfg->jobs);
    *out = new nerkit_corpus{nerkit::bootstrap_corpus(
        g->v, c->v, x->v, bc, to_cpp(stores, n_stores))};
  });
}

nerkit_status nerkit_corpus_open(const char* path, const char* gold_sidecar,
                                 nerkit_corpus** out) {
  if (!path || !out) return fail_arg("null argument");
  return wrap([&] {
    auto* h = new nerkit_corpus{nerkit::read_corpus(path)};
    try {
      if (gold_sidecar) nerkit::attach_gold(h->v, gold_sidecar);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

nerkit_status nerkit_corpus_save(const nerkit_corpus* c, const char* path,
                                 uint64_t seed) {
  if (!c || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::write_corpus(c->v, path, seed); });
}

nerkit_status nerkit_corpus_save_gold(const nerkit_corpus* c, const char* path,
                                      uint64_t seed) {
  if (!c || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::write_gold_sidecar(c->v, path, seed); });
}

nerkit_status nerkit_corpus_save_review(const nerkit_corpus* c,
                                        const char* path, uint64_t seed) {
  if (!c || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::write_review(c->v, path, seed); });
}

uint64_t nerkit_corpus_sentence_count(const nerkit_corpus* c) {
  return c ? c->v.sentences.size() : 0;
}

nerkit_status nerkit_corpus_stats(const nerkit_corpus* c,
                                  nerkit_report** out) {
  if (!c || !out) return fail_arg("null argument");
  return wrap([&] {
    const auto st = nerkit::corpus_stats(c->v);
    auto* r = new nerkit_report;
    r->body = nerkit::render_stats(st, c->v.name);
    r->values = nerkit::stats_values(st);
    *out = r;
  });
}

void nerkit_corpus_free(nerkit_corpus* c) { delete c; }

nerkit_status nerkit_train(const nerkit_corpus* c,
                           const nerkit_feature_config* features,
                           const nerkit_train_config* train,
                           nerkit_model** out_model,
                           nerkit_report** out_report) {
  if (!c || !features || !train || !out_model) return fail_arg("null argument");
  return wrap([&] {
    nerkit::train_report tr;
    auto model =
        nerkit::train(c->v, to_cpp(*features), to_cpp(*train), &tr);
    if (out_report) *out_report = report_from_train(model, tr);
    *out_model = new nerkit_model{std::move(model)};
  });
}

nerkit_status nerkit_model_open(const char* path, nerkit_model** out) {
  if (!path || !out) return fail_arg("null argument");
  return wrap([&] { *out = new nerkit_model{nerkit::load_model(path)}; });
}

nerkit_status nerkit_model_save(const nerkit_model* m, const char* path) {
  if (!m || !path) return fail_arg("null argument");
  return wrap([&] { nerkit::save_model(m->v, path); });
}

void nerkit_model_free(nerkit_model* m) { delete m; }

nerkit_status nerkit_annotate_corpus(const nerkit_model* m,
                                     const nerkit_corpus* c,
                                     nerkit_corpus** out) {
  if (!m || !c || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_corpus{nerkit::annotate_corpus(m->v, c->v)};
  });
}

nerkit_status nerkit_annotate_collection(const nerkit_model* m,
                                         const nerkit_collection* c,
                                         uint64_t jobs, nerkit_corpus** out) {
  if (!m || !c || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_corpus{nerkit::annotate_collection(
        m->v, c->v, static_cast<std::size_t>(jobs))};
  });
}

nerkit_status nerkit_augment(const nerkit_corpus* c, const nerkit_model* m,
                             nerkit_corpus** out) {
  if (!c || !m || !out) return fail_arg("null argument");
  return wrap([&] {
    *out = new nerkit_corpus{nerkit::augment_corpus(c->v, m->v)};
  });
}

nerkit_status nerkit_evaluate(const nerkit_corpus* gold,
                              const nerkit_corpus* pred, double beta,
                              int per_language, nerkit_report** out) {
  if (!gold || !pred || !out) return fail_arg("null argument");
  return wrap([&] {
    nerkit::eval_config cfg;
    cfg.beta = beta;
    cfg.per_language = per_language != 0;
    const auto rep = nerkit::evaluate_corpus(gold->v, pred->v, cfg);
    auto* r = new nerkit_report;
    r->body = nerkit::render_eval_report(rep);
    r->values = rep.values;
    *out = r;
  });
}

nerkit_status nerkit_diff(const nerkit_corpus* gold, const nerkit_corpus* pred,
                          nerkit_report** out) {
  if (!gold || !pred || !out) return fail_arg("null argument");
  return wrap([&] {
    const auto d = nerkit::diff_report(gold->v, pred->v);
    auto* r = new nerkit_report;
    r->body = d.text;
    r->values.emplace_back("diff.ok", static_cast<double>(d.ok));
    r->values.emplace_back("diff.boundary", static_cast<double>(d.boundary));
    r->values.emplace_back("diff.type", static_cast<double>(d.type_error));
    r->values.emplace_back("diff.spurious", static_cast<double>(d.spurious));
    r->values.emplace_back("diff.miss", static_cast<double>(d.miss));
    *out = r;
  });
}

nerkit_status nerkit_ablate(const nerkit_corpus* c,
                            const nerkit_collection* col,
                            const nerkit_feature_config* features,
                            const nerkit_train_config* train, uint64_t jobs,
                            nerkit_report** out) {
  if (!c || !col || !features || !train || !out)
    return fail_arg("null argument");
  return wrap([&] {
    nerkit::ablation_config cfg;
    cfg.features = to_cpp(*features);
    cfg.train = to_cpp(*train);
    cfg.jobs = static_cast<std::size_t>(jobs);
    const auto res = nerkit::run_ablation(c->v, col->v, cfg);
    auto* r = new nerkit_report;
    r->body = res.table;
    r->values = res.values;
    *out = r;
  });
}

const char* nerkit_report_text(const nerkit_report* r) {
  return r ? r->body.c_str() : "";
}

uint64_t nerkit_report_value_count(const nerkit_report* r) {
  return r ? r->values.size() : 0;
}

const char* nerkit_report_value_key(const nerkit_report* r, uint64_t i) {
  return r && i < r->values.size() ? r->values[i].first.c_str() : "";
}

double nerkit_report_value(const nerkit_report* r, uint64_t i) {
  return r && i < r->values.size() ? r->values[i].second : 0.0;
}

nerkit_status nerkit_report_find(const nerkit_report* r, const char* key,
                                 double* out) {
  if (!r || !key || !out) return fail_arg("null argument");
  for (const auto& [k, v] : r->values) {
    if (k == key) {
      *out = v;
      return NERKIT_OK;
    }
  }
  t_error = std::string("no such report value: ") + key;
  return NERKIT_E_INVALID_ARGUMENT;
}

void nerkit_report_free(nerkit_report* r) { delete r; }

}  // extern "C"
