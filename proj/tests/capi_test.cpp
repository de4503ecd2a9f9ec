// Exercises the shared library through its C interface only: handle
// lifecycles, status codes and last-error reporting, parameter-struct
// defaults, and the whole toy pipeline from manifest to evaluation report.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nerkit.h"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string data_path(const std::string& name) {
  return std::string(NERKIT_DATA) + "/" + name;
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("nerkit_capi_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
  out.close();
  REQUIRE(out.good());
  return p.string();
}

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_bytes(const std::string& a, const std::string& b) {
  return read_file(a) == read_file(b);
}

bool has_value(const nerkit_report* r, const char* key) {
  double v = 0.0;
  return nerkit_report_find(r, key, &v) == NERKIT_OK;
}

double value_of(const nerkit_report* r, const char* key) {
  double v = 0.0;
  INFO("key: ", std::string(key));
  REQUIRE(nerkit_report_find(r, key, &v) == NERKIT_OK);
  return v;
}

}  // namespace

TEST_CASE("status codes map to stable names") {
  CHECK(std::string(nerkit_status_name(NERKIT_OK)) == "Ok");
  CHECK(std::string(nerkit_status_name(NERKIT_E_IO)) == "IoError");
  CHECK(std::string(nerkit_status_name(NERKIT_E_MISSING_FILE)) ==
        "MissingFile");
  CHECK(std::string(nerkit_status_name(NERKIT_E_DUPLICATE_DOC_ID)) ==
        "DuplicateDocId");
  CHECK(std::string(nerkit_status_name(NERKIT_E_INVALID_ENCODING)) ==
        "InvalidEncoding");
  CHECK(std::string(nerkit_status_name(NERKIT_E_PARSE)) == "ParseError");
  CHECK(std::string(nerkit_status_name(NERKIT_E_INVALID_BIO)) == "InvalidBio");
  CHECK(std::string(nerkit_status_name(NERKIT_E_OVERLAP_CONFLICT)) ==
        "OverlapConflict");
  CHECK(std::string(nerkit_status_name(NERKIT_E_SPAN_OUT_OF_RANGE)) ==
        "SpanOutOfRange");
  CHECK(std::string(nerkit_status_name(NERKIT_E_MISSING_CLASS)) ==
        "MissingClass");
  CHECK(std::string(nerkit_status_name(NERKIT_E_EMPTY_SPLIT)) == "EmptySplit");
  CHECK(std::string(nerkit_status_name(NERKIT_E_ALIGNMENT)) ==
        "AlignmentError");
  CHECK(std::string(nerkit_status_name(NERKIT_E_MISSING_QUERY_EMBEDDING)) ==
        "MissingQueryEmbedding");
  CHECK(std::string(nerkit_status_name(NERKIT_E_INVALID_ARGUMENT)) ==
        "InvalidArgument");
  CHECK(std::string(nerkit_status_name(NERKIT_E_UNKNOWN)) == "UnknownError");
}

TEST_CASE("init functions fill every field with the documented defaults") {
  nerkit_index_params ip;
  std::memset(&ip, 0xFF, sizeof ip);
  nerkit_index_params_init(&ip);
  CHECK(ip.k1 == 1.2);
  CHECK(ip.b == 0.75);
  CHECK(ip.phrase_n_lo == 1);
  CHECK(ip.phrase_n_hi == 5);

  nerkit_retrieval_options ro;
  std::memset(&ro, 0xFF, sizeof ro);
  nerkit_retrieval_options_init(&ro);
  CHECK(ro.limit == 10000);
  CHECK(ro.window_tolerance == 0.3);
  CHECK(ro.window_stride == 1);
  CHECK(ro.max_edits == -1);
  CHECK(ro.ngram_delta == 1);
  CHECK(ro.rrf_k == 60.0);
  CHECK(ro.rrf_fast_only == 0);

  nerkit_feature_config fc;
  std::memset(&fc, 0xFF, sizeof fc);
  nerkit_feature_config_init(&fc);
  CHECK(fc.hash_dim == (1u << 18));
  CHECK(fc.ngram_lo == 2);
  CHECK(fc.ngram_hi == 4);
  CHECK(fc.context == 2);
  CHECK(fc.shape == 1);

  nerkit_train_config tc;
  std::memset(&tc, 0xFF, sizeof tc);
  nerkit_train_config_init(&tc);
  CHECK(tc.learning_rate == 0.1);
  CHECK(tc.epochs == 20);
  CHECK(tc.patience == 3);
  CHECK(tc.seed == 1);
  CHECK(tc.weighted == 1);
  CHECK(tc.smooth_fallback == 1);
  CHECK(tc.beta == 0.25);

  nerkit_bootstrap_config bc;
  std::memset(&bc, 0xFF, sizeof bc);
  nerkit_bootstrap_config_init(&bc);
  CHECK(std::string(bc.technique) == "boolean_phrase");
  CHECK(bc.retrieval.limit == 10000);
  CHECK(bc.retrieval.rrf_k == 60.0);
  CHECK(bc.train_ratio == 0.8);
  CHECK(bc.validation_ratio == 0.1);
  CHECK(bc.test_ratio == 0.1);
  CHECK(bc.seed == 1);
  CHECK(bc.jobs == 1);

  // Null pointers are tolerated.
  nerkit_index_params_init(nullptr);
  nerkit_retrieval_options_init(nullptr);
  nerkit_feature_config_init(nullptr);
  nerkit_train_config_init(nullptr);
  nerkit_bootstrap_config_init(nullptr);
}

TEST_CASE("null arguments are rejected and out-parameters stay untouched") {
  int dummy = 0;
  auto* sentinel = reinterpret_cast<nerkit_collection*>(&dummy);
  nerkit_collection* col = sentinel;
  CHECK(nerkit_collection_open(nullptr, nullptr, 1, &col) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(std::string(nerkit_last_error()) == "null argument");
  CHECK(col == sentinel);

  CHECK(nerkit_collection_open("x", nullptr, 1, nullptr) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(nerkit_gazetteer_open(nullptr, nullptr) == NERKIT_E_INVALID_ARGUMENT);
  CHECK(nerkit_corpus_open(nullptr, nullptr, nullptr) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(nerkit_model_open(nullptr, nullptr) == NERKIT_E_INVALID_ARGUMENT);
  double v = 0.0;
  CHECK(nerkit_report_find(nullptr, "k", &v) == NERKIT_E_INVALID_ARGUMENT);

  // Read-only accessors treat null handles as empty objects.
  CHECK(nerkit_collection_doc_count(nullptr) == 0);
  CHECK(nerkit_gazetteer_size(nullptr) == 0);
  CHECK(nerkit_corpus_sentence_count(nullptr) == 0);
  CHECK(std::string(nerkit_report_text(nullptr)) == "");
  CHECK(nerkit_report_value_count(nullptr) == 0);
  CHECK(std::string(nerkit_report_value_key(nullptr, 0)) == "");
  CHECK(nerkit_report_value(nullptr, 0) == 0.0);

  // Every destructor accepts null.
  nerkit_collection_free(nullptr);
  nerkit_indexes_free(nullptr);
  nerkit_gazetteer_free(nullptr);
  nerkit_embeddings_free(nullptr);
  nerkit_corpus_free(nullptr);
  nerkit_model_free(nullptr);
  nerkit_report_free(nullptr);
}

TEST_CASE("failures set the thread error message and success clears it") {
  nerkit_collection* col = nullptr;
  CHECK(nerkit_collection_open("/nonexistent/manifest.tsv", nullptr, 1,
                               &col) == NERKIT_E_MISSING_FILE);
  const std::string msg = nerkit_last_error();
  CHECK(msg.find("no such file") != std::string::npos);
  CHECK(msg.find("/nonexistent/manifest.tsv") != std::string::npos);
  CHECK(col == nullptr);

  nerkit_gazetteer* gaz = nullptr;
  CHECK(nerkit_gazetteer_open("/nonexistent/gazetteer.tsv", &gaz) ==
        NERKIT_E_MISSING_FILE);
  nerkit_model* model = nullptr;
  CHECK(nerkit_model_open("/nonexistent/model.bin", &model) ==
        NERKIT_E_MISSING_FILE);
  CHECK(std::string(nerkit_last_error()).size() > 0);

  // A successful call clears the sticky message.
  REQUIRE(nerkit_gazetteer_open(data_path("gazetteer.tsv").c_str(), &gaz) ==
          NERKIT_OK);
  CHECK(std::string(nerkit_last_error()) == "");
  CHECK(nerkit_gazetteer_size(gaz) == 8);
  nerkit_gazetteer_free(gaz);
}

TEST_CASE("malformed corpus files report parse and tag errors") {
  const auto dir = scratch_dir("badconll");
  const std::string orphan =
      write_file(dir / "orphan.conll", "aa\tB-PER\n");
  nerkit_corpus* c = nullptr;
  CHECK(nerkit_corpus_open(orphan.c_str(), nullptr, &c) == NERKIT_E_PARSE);
  CHECK(c == nullptr);

  const std::string badtag = write_file(
      dir / "badtag.conll",
      "# id=d#0 doc=d lang=cs split=train\naa\tB-ORG\n");
  CHECK(nerkit_corpus_open(badtag.c_str(), nullptr, &c) ==
        NERKIT_E_INVALID_BIO);
  CHECK(c == nullptr);
}

TEST_CASE("toy pipeline runs end to end through the shared library") {
  const auto dir = scratch_dir("pipeline");

  // Collection from the bundled manifest, plus a cache round trip.
  nerkit_collection* col = nullptr;
  REQUIRE(nerkit_collection_open(data_path("manifest.tsv").c_str(),
                                 data_path("abbreviations.txt").c_str(), 1,
                                 &col) == NERKIT_OK);
  CHECK(std::string(nerkit_last_error()) == "");
  REQUIRE(nerkit_collection_doc_count(col) == 6);

  const std::string cache = (dir / "col.cache").string();
  REQUIRE(nerkit_collection_save_cache(col, cache.c_str()) == NERKIT_OK);
  nerkit_collection* col2 = nullptr;
  REQUIRE(nerkit_collection_open_cache(cache.c_str(), &col2) == NERKIT_OK);
  CHECK(nerkit_collection_doc_count(col2) == 6);

  // Indexes: build, save, reopen against the cached twin.
  nerkit_index_params ip;
  nerkit_index_params_init(&ip);
  nerkit_indexes* idx = nullptr;
  REQUIRE(nerkit_indexes_build(col, data_path("lemmas.tsv").c_str(),
                               data_path("suffix_rules.tsv").c_str(), 1, &ip,
                               1, &idx) == NERKIT_OK);
  const std::string idx_path = (dir / "toy.idx").string();
  REQUIRE(nerkit_indexes_save(idx, idx_path.c_str()) == NERKIT_OK);
  nerkit_indexes* idx2 = nullptr;
  REQUIRE(nerkit_indexes_open(idx_path.c_str(), col2, &idx2) == NERKIT_OK);
  nerkit_indexes_free(idx2);
  nerkit_collection_free(col2);

  // The index refuses a collection other than the one it was built over.
  const std::string page = write_file(dir / "p.txt", "Ahoj svete. Dnes je hezky.\n");
  (void)page;
  const std::string manifest2 =
      write_file(dir / "manifest2.tsv", "x1\tcs\tp.txt\n");
  nerkit_collection* other = nullptr;
  REQUIRE(nerkit_collection_open(manifest2.c_str(), nullptr, 1, &other) ==
          NERKIT_OK);
  CHECK(nerkit_collection_doc_count(other) == 1);
  nerkit_indexes* wrong = nullptr;
  CHECK(nerkit_indexes_open(idx_path.c_str(), other, &wrong) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(std::string(nerkit_last_error()).find("different collection") !=
        std::string::npos);
  CHECK(wrong == nullptr);
  nerkit_collection_free(other);

  // Gazetteer and the two embedding stores.
  nerkit_gazetteer* gaz = nullptr;
  REQUIRE(nerkit_gazetteer_open(data_path("gazetteer.tsv").c_str(), &gaz) ==
          NERKIT_OK);
  REQUIRE(nerkit_gazetteer_size(gaz) == 8);
  nerkit_embeddings* emb_char = nullptr;
  nerkit_embeddings* emb_tok = nullptr;
  REQUIRE(nerkit_embeddings_open("charhash", data_path("emb_char.tsv").c_str(),
                                 &emb_char) == NERKIT_OK);
  REQUIRE(nerkit_embeddings_open("tokmean", data_path("emb_token.tsv").c_str(),
                                 &emb_tok) == NERKIT_OK);
  nerkit_embeddings* stores[2] = {emb_char, emb_tok};

  // Bootstrap with stock settings reproduces the frozen corpus byte for
  // byte.
  nerkit_bootstrap_config bc;
  nerkit_bootstrap_config_init(&bc);
  nerkit_corpus* boot = nullptr;
  REQUIRE(nerkit_bootstrap(gaz, col, idx, &bc, stores, 2, &boot) == NERKIT_OK);
  REQUIRE(nerkit_corpus_sentence_count(boot) == 37);
  const std::string conll = (dir / "boot.conll").string();
  REQUIRE(nerkit_corpus_save(boot, conll.c_str(), 1) == NERKIT_OK);
  CHECK(same_bytes(conll, data_path("small.conll")));

  // Split sizes surface through the stats report.
  nerkit_report* stats = nullptr;
  REQUIRE(nerkit_corpus_stats(boot, &stats) == NERKIT_OK);
  CHECK(value_of(stats, "stats.total.sentences") == 37.0);
  CHECK(value_of(stats, "stats.train.sentences") == 29.0);
  CHECK(value_of(stats, "stats.validation.sentences") == 3.0);
  CHECK(value_of(stats, "stats.test.sentences") == 5.0);
  CHECK(value_of(stats, "stats.unassigned.sentences") == 0.0);
  CHECK(std::string(nerkit_report_text(stats)).find("split") !=
        std::string::npos);
  nerkit_report_free(stats);

  // Review rendering of the test split produces bracketed mentions.
  const std::string review = (dir / "review.txt").string();
  REQUIRE(nerkit_corpus_save_review(boot, review.c_str(), 1) == NERKIT_OK);
  CHECK(read_file(review).find('[') != std::string::npos);

  // Reload the frozen corpus and the gold set with its nested sidecar.
  nerkit_corpus* small = nullptr;
  REQUIRE(nerkit_corpus_open(data_path("small.conll").c_str(), nullptr,
                             &small) == NERKIT_OK);
  CHECK(nerkit_corpus_sentence_count(small) == 37);
  nerkit_corpus* gold = nullptr;
  REQUIRE(nerkit_corpus_open(data_path("gold.conll").c_str(),
                             data_path("gold_entities.tsv").c_str(),
                             &gold) == NERKIT_OK);
  REQUIRE(nerkit_corpus_sentence_count(gold) == 17);

  // Saving the gold corpus and sidecar reproduces a loadable pair.
  const std::string g_conll = (dir / "g.conll").string();
  const std::string g_side = (dir / "g_entities.tsv").string();
  REQUIRE(nerkit_corpus_save(gold, g_conll.c_str(), 1) == NERKIT_OK);
  REQUIRE(nerkit_corpus_save_gold(gold, g_side.c_str(), 1) == NERKIT_OK);
  nerkit_corpus* gold2 = nullptr;
  REQUIRE(nerkit_corpus_open(g_conll.c_str(), g_side.c_str(), &gold2) ==
          NERKIT_OK);
  CHECK(nerkit_corpus_sentence_count(gold2) == 17);
  nerkit_corpus_free(gold2);

  // Train a small model on the bootstrapped corpus.
  nerkit_feature_config fc;
  nerkit_feature_config_init(&fc);
  fc.hash_dim = 4096;
  nerkit_train_config tc;
  nerkit_train_config_init(&tc);
  tc.epochs = 3;
  tc.patience = 2;
  nerkit_model* model = nullptr;
  nerkit_report* trep = nullptr;
  REQUIRE(nerkit_train(boot, &fc, &tc, &model, &trep) == NERKIT_OK);
  const double epochs_run = value_of(trep, "train.epochs_run");
  CHECK(epochs_run >= 1.0);
  CHECK(epochs_run <= 3.0);
  const double best_epoch = value_of(trep, "train.best_epoch");
  CHECK(best_epoch >= 1.0);
  CHECK(best_epoch <= epochs_run);
  const double best_f = value_of(trep, "train.best_val_fbeta");
  CHECK(best_f >= 0.0);
  CHECK(best_f <= 1.0);
  CHECK(value_of(trep, "train.epoch.1.avg_loss") > 0.0);
  CHECK(has_value(trep, "train.epoch.1.val_fbeta"));
  CHECK(std::string(nerkit_report_text(trep)).size() > 0);
  nerkit_report_free(trep);

  // Invalid training settings are rejected up front.
  nerkit_train_config bad = tc;
  bad.epochs = 0;
  nerkit_model* none = nullptr;
  CHECK(nerkit_train(boot, &fc, &bad, &none, nullptr) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(none == nullptr);

  // Model round trip: the reopened model annotates identically.
  const std::string mpath = (dir / "model.bin").string();
  REQUIRE(nerkit_model_save(model, mpath.c_str()) == NERKIT_OK);
  nerkit_model* model2 = nullptr;
  REQUIRE(nerkit_model_open(mpath.c_str(), &model2) == NERKIT_OK);
  nerkit_corpus* pred = nullptr;
  nerkit_corpus* pred2 = nullptr;
  REQUIRE(nerkit_annotate_corpus(model, gold, &pred) == NERKIT_OK);
  REQUIRE(nerkit_annotate_corpus(model2, gold, &pred2) == NERKIT_OK);
  CHECK(nerkit_corpus_sentence_count(pred) == 17);
  const std::string p1 = (dir / "pred1.conll").string();
  const std::string p2 = (dir / "pred2.conll").string();
  REQUIRE(nerkit_corpus_save(pred, p1.c_str(), 7) == NERKIT_OK);
  REQUIRE(nerkit_corpus_save(pred2, p2.c_str(), 7) == NERKIT_OK);
  CHECK(same_bytes(p1, p2));
  nerkit_corpus_free(pred2);
  nerkit_model_free(model2);

  // Evaluation report: token, entity, and per-language values.
  nerkit_report* ev = nullptr;
  REQUIRE(nerkit_evaluate(gold, pred, 0.25, 1, &ev) == NERKIT_OK);
  const double tok_f = value_of(ev, "token.fbeta");
  CHECK(tok_f >= 0.0);
  CHECK(tok_f <= 1.0);
  CHECK(has_value(ev, "token.precision"));
  CHECK(has_value(ev, "entity.strict.precision"));
  CHECK(has_value(ev, "entity.fuzzy.recall"));
  bool saw_language_scope = false;
  for (uint64_t i = 0; i < nerkit_report_value_count(ev); ++i) {
    const std::string key = nerkit_report_value_key(ev, i);
    if (key.rfind("lang.", 0) == 0) saw_language_scope = true;
  }
  CHECK(saw_language_scope);
  CHECK(std::string(nerkit_report_text(ev)).find("scope") !=
        std::string::npos);

  double miss = 0.0;
  CHECK(nerkit_report_find(ev, "bogus.key", &miss) ==
        NERKIT_E_INVALID_ARGUMENT);
  CHECK(std::string(nerkit_last_error()) == "no such report value: bogus.key");
  nerkit_report_free(ev);

  // Diff report classifies every prediction.
  nerkit_report* df = nullptr;
  REQUIRE(nerkit_diff(gold, pred, &df) == NERKIT_OK);
  for (const char* key : {"diff.ok", "diff.boundary", "diff.type",
                          "diff.spurious", "diff.miss"})
    CHECK(value_of(df, key) >= 0.0);
  nerkit_report_free(df);
  nerkit_corpus_free(pred);

  // Augmentation and whole-collection annotation stay usable through C.
  nerkit_corpus* aug = nullptr;
  REQUIRE(nerkit_augment(boot, model, &aug) == NERKIT_OK);
  CHECK(nerkit_corpus_sentence_count(aug) == 37);
  nerkit_corpus_free(aug);
  nerkit_corpus* whole = nullptr;
  REQUIRE(nerkit_annotate_collection(model, col, 2, &whole) == NERKIT_OK);
  CHECK(nerkit_corpus_sentence_count(whole) >= 37);
  nerkit_corpus_free(whole);

  // One retrieval method dumped to a file.
  const std::string hits = (dir / "hits.tsv").string();
  nerkit_retrieval_options ro;
  nerkit_retrieval_options_init(&ro);
  ro.limit = 5;
  REQUIRE(nerkit_retrieve_to_file(gaz, col, idx, "bm25", &ro, stores, 2, 1, 1,
                                  hits.c_str()) == NERKIT_OK);
  const std::string hits_body = read_file(hits);
  CHECK(hits_body.rfind("# generator=nerkit seed=1\n", 0) == 0);
  CHECK(hits_body.find("# entity_id\tmethod\tdoc_id\tchar_start\tchar_end"
                       "\tscore\tmatched_text\n") != std::string::npos);
  CHECK(hits_body.find("\tbm25\t") != std::string::npos);

  nerkit_retrieval_options ro_bad = ro;
  CHECK(nerkit_retrieve_to_file(gaz, col, idx, "nope", &ro_bad, nullptr, 0, 1,
                                1, (dir / "x.tsv").string().c_str()) ==
        NERKIT_E_INVALID_ARGUMENT);

  // Method comparison against the bundled judgments.
  nerkit_report* cmp = nullptr;
  REQUIRE(nerkit_compare_methods(gaz, col, idx,
                                 data_path("judgments.tsv").c_str(), &ro,
                                 stores, 2, 3, 0.25, 1, &cmp) == NERKIT_OK);
  const std::string cmp_text = nerkit_report_text(cmp);
  CHECK(cmp_text.find("method") != std::string::npos);
  CHECK(cmp_text.find("F(0.25)") != std::string::npos);
  for (const char* name :
       {"jaccard", "bm25", "boolean_phrase", "fuzzy_regex", "edit_rerank",
        "embedding_charhash", "embedding_tokmean", "rrf", "concat"}) {
    const std::string key = std::string("method.") + name + ".fbeta";
    const double f = value_of(cmp, key.c_str());
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  uint64_t method_values = 0;
  for (uint64_t i = 0; i < nerkit_report_value_count(cmp); ++i) {
    const std::string key = nerkit_report_value_key(cmp, i);
    if (key.rfind("method.", 0) == 0) ++method_values;
  }
  CHECK(method_values == 45);  // nine methods, five values each
  nerkit_report_free(cmp);

  // Loss ablation over the three corpus variants.
  nerkit_report* ab = nullptr;
  REQUIRE(nerkit_ablate(boot, col, &fc, &tc, 1, &ab) == NERKIT_OK);
  for (const char* key : {"ablate.small.wce", "ablate.small.ce",
                          "ablate.medium.wce", "ablate.medium.ce",
                          "ablate.large.wce", "ablate.large.ce"})
    CHECK(value_of(ab, key) >= 0.0);
  CHECK(std::string(nerkit_report_text(ab)).find("WCE-F(0.25)") !=
        std::string::npos);
  nerkit_report_free(ab);

  nerkit_model_free(model);
  nerkit_corpus_free(gold);
  nerkit_corpus_free(small);
  nerkit_corpus_free(boot);
  nerkit_embeddings_free(emb_tok);
  nerkit_embeddings_free(emb_char);
  nerkit_gazetteer_free(gaz);
  nerkit_indexes_free(idx);
  nerkit_collection_free(col);
}
