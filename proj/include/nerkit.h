/* C interface to the corpus-bootstrapping NER toolkit.
 *
 * Every object lives behind an opaque handle created by a nerkit_*_open /
 * _build call and released by the matching _free.  Functions that can fail
 * return nerkit_status; on failure nerkit_last_error() carries a message for
 * the calling thread and out-parameters are left untouched.  Param structs
 * must be filled with their _init before overriding fields, so newly added
 * fields keep their defaults.
 */
#ifndef NERKIT_H
#define NERKIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nerkit_status {
  NERKIT_OK = 0,
  NERKIT_E_IO,
  NERKIT_E_MISSING_FILE,
  NERKIT_E_DUPLICATE_DOC_ID,
  NERKIT_E_INVALID_ENCODING,
  NERKIT_E_PARSE,
  NERKIT_E_INVALID_BIO,
  NERKIT_E_OVERLAP_CONFLICT,
  NERKIT_E_SPAN_OUT_OF_RANGE,
  NERKIT_E_MISSING_CLASS,
  NERKIT_E_EMPTY_SPLIT,
  NERKIT_E_ALIGNMENT,
  NERKIT_E_MISSING_QUERY_EMBEDDING,
  NERKIT_E_INVALID_ARGUMENT,
  NERKIT_E_UNKNOWN
} nerkit_status;

/* Message for the most recent failure on this thread; "" when none. */
const char* nerkit_last_error(void);
/* Stable name of a status, e.g. "ParseError". */
const char* nerkit_status_name(nerkit_status s);

typedef struct nerkit_collection nerkit_collection;
typedef struct nerkit_indexes nerkit_indexes;
typedef struct nerkit_gazetteer nerkit_gazetteer;
typedef struct nerkit_embeddings nerkit_embeddings;
typedef struct nerkit_corpus nerkit_corpus;
typedef struct nerkit_model nerkit_model;
typedef struct nerkit_report nerkit_report;

/* ---- parameters ---- */

typedef struct nerkit_index_params {
  double k1, b;                        /* BM25 */
  uint32_t phrase_n_lo, phrase_n_hi;   /* phrase-unit n-gram sizes */
} nerkit_index_params;
void nerkit_index_params_init(nerkit_index_params* p);

typedef struct nerkit_retrieval_options {
  uint64_t limit;           /* results kept per query */
  double window_tolerance;  /* substring length tolerance around |surface| */
  uint32_t window_stride;   /* token step between candidate windows */
  int64_t max_edits;        /* fuzzy search; -1 = |surface|/5 rounded up */
  uint32_t ngram_delta;     /* phrase-unit lengths |tokens| +- delta */
  double rrf_k;             /* rank-fusion constant */
  int rrf_fast_only;        /* fuse only the four base searches */
} nerkit_retrieval_options;
void nerkit_retrieval_options_init(nerkit_retrieval_options* p);

typedef struct nerkit_feature_config {
  uint32_t hash_dim;            /* hashed feature buckets */
  uint32_t ngram_lo, ngram_hi;  /* focus-token char n-gram sizes */
  uint32_t context;             /* word-identity window, tokens each side */
  int shape;                    /* capitalization/digit/punct/length flags */
} nerkit_feature_config;
void nerkit_feature_config_init(nerkit_feature_config* p);

typedef struct nerkit_train_config {
  double learning_rate;
  uint32_t epochs;
  uint32_t patience;   /* epochs without validation gain before stopping */
  uint64_t seed;
  int weighted;        /* inverse-class-frequency loss weights */
  int smooth_fallback; /* Laplace counts when a class never occurs */
  double beta;         /* validation token F_beta */
} nerkit_train_config;
void nerkit_train_config_init(nerkit_train_config* p);

typedef struct nerkit_bootstrap_config {
  const char* technique; /* method name, e.g. "boolean_phrase" */
  nerkit_retrieval_options retrieval;
  double train_ratio, validation_ratio, test_ratio;
  uint64_t seed;
  uint64_t jobs;
} nerkit_bootstrap_config;
void nerkit_bootstrap_config_init(nerkit_bootstrap_config* p);

/* ---- text collection ---- */

/* Manifest TSV `doc_id\tlanguage\trelative_path`; abbreviation file (one
 * entry per line) may be NULL. */
nerkit_status nerkit_collection_open(const char* manifest_path,
                                     const char* abbrev_path,
                                     uint64_t jobs,
                                     nerkit_collection** out);
nerkit_status nerkit_collection_open_cache(const char* path,
                                           nerkit_collection** out);
nerkit_status nerkit_collection_save_cache(const nerkit_collection* c,
                                           const char* path);
uint64_t nerkit_collection_doc_count(const nerkit_collection* c);
void nerkit_collection_free(nerkit_collection* c);

/* ---- search indexes ---- */

/* Lemma dictionary / suffix-rule paths may be NULL for none. */
nerkit_status nerkit_indexes_build(const nerkit_collection* c,
                                   const char* lemma_path,
                                   const char* suffix_path,
                                   int case_fold,
                                   const nerkit_index_params* params,
                                   uint64_t jobs,
                                   nerkit_indexes** out);
/* Refuses an index built from a different collection. */
nerkit_status nerkit_indexes_open(const char* path,
                                  const nerkit_collection* c,
                                  nerkit_indexes** out);
nerkit_status nerkit_indexes_save(const nerkit_indexes* x, const char* path);
void nerkit_indexes_free(nerkit_indexes* x);

/* ---- gazetteer and embedding stores ---- */

/* TSV `entity_id\tentity_type\tsurface`. */
nerkit_status nerkit_gazetteer_open(const char* path, nerkit_gazetteer** out);
uint64_t nerkit_gazetteer_size(const nerkit_gazetteer* g);
void nerkit_gazetteer_free(nerkit_gazetteer* g);

/* Vector file `key\tv1 v2 ... vd`; name labels the reranker's report rows. */
nerkit_status nerkit_embeddings_open(const char* name, const char* path,
                                     nerkit_embeddings** out);
void nerkit_embeddings_free(nerkit_embeddings* e);

/* ---- retrieval ---- */

/* Runs one method for every gazetteer entity (ordered by entity id) and
 * writes `entity_id\tmethod\tdoc_id\tchar_start\tchar_end\tscore\t
 * matched_text` rows. */
nerkit_status nerkit_retrieve_to_file(const nerkit_gazetteer* g,
                                      const nerkit_collection* c,
                                      const nerkit_indexes* x,
                                      const char* method,
                                      const nerkit_retrieval_options* opt,
                                      nerkit_embeddings* const* stores,
                                      uint64_t n_stores,
                                      uint64_t jobs,
                                      uint64_t seed,
                                      const char* out_path);

/* Every method against the judgments file; the report carries the ranked
 * P/R/F table plus per-method values and unjudged-result warnings. */
nerkit_status nerkit_compare_methods(const nerkit_gazetteer* g,
                                     const nerkit_collection* c,
                                     const nerkit_indexes* x,
                                     const char* judgments_path,
                                     const nerkit_retrieval_options* opt,
                                     nerkit_embeddings* const* stores,
                                     uint64_t n_stores,
                                     uint64_t depth,
                                     double beta,
                                     uint64_t jobs,
                                     nerkit_report** out);

/* ---- silver-corpus bootstrap ---- */

nerkit_status nerkit_bootstrap(const nerkit_gazetteer* g,
                               const nerkit_collection* c,
                               const nerkit_indexes* x,
                               const nerkit_bootstrap_config* cfg,
                               nerkit_embeddings* const* stores,
                               uint64_t n_stores,
                               nerkit_corpus** out);

/* ---- corpora ---- */

/* CoNLL-style file; the optional sidecar adds nested gold mentions. */
nerkit_status nerkit_corpus_open(const char* path, const char* gold_sidecar,
                                 nerkit_corpus** out);
nerkit_status nerkit_corpus_save(const nerkit_corpus* c, const char* path,
                                 uint64_t seed);
nerkit_status nerkit_corpus_save_gold(const nerkit_corpus* c,
                                      const char* path, uint64_t seed);
/* Bracketed test-split sentences for manual review. */
nerkit_status nerkit_corpus_save_review(const nerkit_corpus* c,
                                        const char* path, uint64_t seed);
uint64_t nerkit_corpus_sentence_count(const nerkit_corpus* c);
/* Per-split sentence and mention counts. */
nerkit_status nerkit_corpus_stats(const nerkit_corpus* c,
                                  nerkit_report** out);
void nerkit_corpus_free(nerkit_corpus* c);

/* ---- token classifier ---- */

/* out_report may be NULL; otherwise it receives the training curve. */
nerkit_status nerkit_train(const nerkit_corpus* c,
                           const nerkit_feature_config* features,
                           const nerkit_train_config* train,
                           nerkit_model** out_model,
                           nerkit_report** out_report);
nerkit_status nerkit_model_open(const char* path, nerkit_model** out);
nerkit_status nerkit_model_save(const nerkit_model* m, const char* path);
void nerkit_model_free(nerkit_model* m);

/* Re-tags every sentence with the model's predictions. */
nerkit_status nerkit_annotate_corpus(const nerkit_model* m,
                                     const nerkit_corpus* c,
                                     nerkit_corpus** out);
/* Tags every sentence of every document; splits come out unassigned. */
nerkit_status nerkit_annotate_collection(const nerkit_model* m,
                                         const nerkit_collection* c,
                                         uint64_t jobs,
                                         nerkit_corpus** out);
/* Adds predicted mentions that do not touch an existing mention's tokens. */
nerkit_status nerkit_augment(const nerkit_corpus* c, const nerkit_model* m,
                             nerkit_corpus** out);

/* ---- evaluation ---- */

/* Token and entity metrics (strict and fuzzy), confusion matrix, optional
 * per-language breakdown. */
nerkit_status nerkit_evaluate(const nerkit_corpus* gold,
                              const nerkit_corpus* pred,
                              double beta,
                              int per_language,
                              nerkit_report** out);
/* Side-by-side gold/predicted mentions with each prediction classified. */
nerkit_status nerkit_diff(const nerkit_corpus* gold,
                          const nerkit_corpus* pred,
                          nerkit_report** out);
/* Loss-ablation matrix over the corpus, its augmented variant, and the
 * model-annotated collection. */
nerkit_status nerkit_ablate(const nerkit_corpus* c,
                            const nerkit_collection* col,
                            const nerkit_feature_config* features,
                            const nerkit_train_config* train,
                            uint64_t jobs,
                            nerkit_report** out);

/* ---- reports ---- */

/* Rendered text body (tables, key/value lines, warnings).  The pointer is
 * owned by the report and valid until nerkit_report_free. */
const char* nerkit_report_text(const nerkit_report* r);
uint64_t nerkit_report_value_count(const nerkit_report* r);
const char* nerkit_report_value_key(const nerkit_report* r, uint64_t i);
double nerkit_report_value(const nerkit_report* r, uint64_t i);
/* NERKIT_E_INVALID_ARGUMENT when the key does not exist. */
nerkit_status nerkit_report_find(const nerkit_report* r, const char* key,
                                 double* out);
void nerkit_report_free(nerkit_report* r);

#ifdef __cplusplus
}
#endif

#endif /* NERKIT_H */
