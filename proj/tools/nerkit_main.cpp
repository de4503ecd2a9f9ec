// nerkit — bootstrap NER corpora from OCR text collections and tag them.
//
// One executable, eleven subcommands: ingest, index, retrieve,
// compare-methods, bootstrap, train, infer, augment, eval, ablate, stats.
// A single INI-style config file (sections named after subcommands) can
// preset any flag; the command line always wins.  Exit status: 0 on
// success, 1 on a data error (prefixed with the failing error name),
// 2 on a usage error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nerkit.h"

namespace {

[[noreturn]] void die(nerkit_status st) {
  std::cerr << nerkit_status_name(st) << ": " << nerkit_last_error() << "\n";
  std::exit(1);
}

[[noreturn]] void die_io(const std::string& msg) {
  std::cerr << "IoError: " << msg << "\n";
  std::exit(1);
}

[[noreturn]] void die_usage(const std::string& msg) {
  std::cerr << msg << "\n";
  std::exit(2);
}

void ck(nerkit_status st) {
  if (st != NERKIT_OK) die(st);
}

const char* opt_cstr(const std::string& s) {
  return s.empty() ? nullptr : s.c_str();
}

/// Retrieval knobs shared by retrieve, compare-methods, and bootstrap.
struct retrieval_args {
  nerkit_retrieval_options opt;
  std::vector<std::string> embedding_specs;  // name=path
};

void add_retrieval_flags(CLI::App* sub, retrieval_args& r) {
  nerkit_retrieval_options_init(&r.opt);
  sub->add_option("--limit", r.opt.limit, "Candidates kept per entity")
      ->capture_default_str();
  sub->add_option("--window-tolerance", r.opt.window_tolerance,
                  "Window-length slack as a fraction of the query length")
      ->capture_default_str();
  sub->add_option("--stride", r.opt.window_stride, "Sliding-window stride")
      ->capture_default_str();
  sub->add_option("--max-edits", r.opt.max_edits,
                  "Fuzzy edit budget (-1 = length/5, rounded up)")
      ->capture_default_str();
  sub->add_option("--ngram-delta", r.opt.ngram_delta,
                  "Phrase-unit length slack around the query length")
      ->capture_default_str();
  sub->add_option("--rrf-k", r.opt.rrf_k, "Reciprocal-rank-fusion constant")
      ->capture_default_str();
  sub->add_flag("--rrf-fast-only", r.opt.rrf_fast_only,
                "Fuse only the four base result lists, skipping rerankers");
  sub->add_option("--embeddings", r.embedding_specs,
                  "Embedding table as name=path (repeatable)");
}

std::vector<nerkit_embeddings*> open_embeddings(
    const std::vector<std::string>& specs) {
  std::vector<nerkit_embeddings*> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      die_usage("--embeddings expects name=path, got '" + spec + "'");
    nerkit_embeddings* e = nullptr;
    ck(nerkit_embeddings_open(spec.substr(0, eq).c_str(),
                              spec.substr(eq + 1).c_str(), &e));
    out.push_back(e);
  }
  return out;
}

void free_embeddings(std::vector<nerkit_embeddings*>& stores) {
  for (auto* e : stores) nerkit_embeddings_free(e);
  stores.clear();
}

/// Feature/training knobs shared by train and ablate.
struct train_args {
  nerkit_feature_config features;
  nerkit_train_config train;
  bool no_shape = false;
  bool unweighted = false;
  bool no_smooth = false;
};

void add_train_flags(CLI::App* sub, train_args& t) {
  nerkit_feature_config_init(&t.features);
  nerkit_train_config_init(&t.train);
  sub->add_option("--hash-dim", t.features.hash_dim, "Feature-hash buckets")
      ->capture_default_str();
  sub->add_option("--ngram-lo", t.features.ngram_lo,
                  "Shortest character n-gram feature")
      ->capture_default_str();
  sub->add_option("--ngram-hi", t.features.ngram_hi,
                  "Longest character n-gram feature")
      ->capture_default_str();
  sub->add_option("--context", t.features.context,
                  "Neighbour tokens on each side")
      ->capture_default_str();
  sub->add_flag("--no-shape", t.no_shape, "Drop token-shape features");
  sub->add_option("--learning-rate", t.train.learning_rate, "SGD step size")
      ->capture_default_str();
  sub->add_option("--epochs", t.train.epochs, "Maximum training epochs")
      ->capture_default_str();
  sub->add_option("--patience", t.train.patience,
                  "Epochs without validation improvement before stopping")
      ->capture_default_str();
  sub->add_flag("--unweighted", t.unweighted,
                "Plain cross-entropy instead of class-weighted");
  sub->add_flag("--no-smooth", t.no_smooth,
                "Fail on a missing class instead of smoothing the weights");
  sub->add_option("--beta", t.train.beta,
                  "Beta for the validation F-score used in model selection")
      ->capture_default_str();
}

void finish_train_args(train_args& t, uint64_t seed) {
  t.features.shape = t.no_shape ? 0 : 1;
  t.train.weighted = t.unweighted ? 0 : 1;
  t.train.smooth_fallback = t.no_smooth ? 0 : 1;
  t.train.seed = seed;
}

nerkit_collection* open_cache(const std::string& path) {
  nerkit_collection* col = nullptr;
  ck(nerkit_collection_open_cache(path.c_str(), &col));
  return col;
}

nerkit_indexes* open_indexes(const std::string& path, nerkit_collection* col) {
  nerkit_indexes* idx = nullptr;
  ck(nerkit_indexes_open(path.c_str(), col, &idx));
  return idx;
}

nerkit_gazetteer* open_gazetteer(const std::string& path) {
  nerkit_gazetteer* gaz = nullptr;
  ck(nerkit_gazetteer_open(path.c_str(), &gaz));
  return gaz;
}

nerkit_corpus* open_corpus(const std::string& path,
                           const std::string& gold = {}) {
  nerkit_corpus* c = nullptr;
  ck(nerkit_corpus_open(path.c_str(), opt_cstr(gold), &c));
  return c;
}

nerkit_model* open_model(const std::string& path) {
  nerkit_model* m = nullptr;
  ck(nerkit_model_open(path.c_str(), &m));
  return m;
}

/// Writes a report (seed header + body) to `path`, or stdout when empty.
void emit_report(const nerkit_report* rep, const std::string& path,
                 uint64_t seed) {
  std::string text = "# generator=nerkit seed=" + std::to_string(seed) + "\n";
  text += nerkit_report_text(rep);
  if (!text.empty() && text.back() != '\n') text += '\n';
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) die_io("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) die_io("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bootstrap NER corpora from OCR collections: candidate retrieval, "
      "BIO projection, linear tagging, evaluation."};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI config file; sections are named after subcommands");
  app.allow_config_extras(false);

  uint64_t seed = 1;
  uint64_t jobs = 1;
  app.add_option("--seed", seed, "Seed for every random choice downstream")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads (1 = serial)")
      ->capture_default_str();

  // ingest
  auto* sc_ingest = app.add_subcommand(
      "ingest", "Read a manifest of raw text files into a collection cache");
  sc_ingest->fallthrough();
  std::string in_manifest, in_abbrev, in_out;
  sc_ingest->add_option("--manifest", in_manifest, "Manifest TSV")->required();
  sc_ingest->add_option("--abbreviations", in_abbrev,
                        "Abbreviation list for sentence splitting");
  sc_ingest->add_option("--out", in_out, "Collection cache file")->required();

  // index
  auto* sc_index = app.add_subcommand(
      "index", "Build the search indexes over a collection cache");
  sc_index->fallthrough();
  std::string ix_collection, ix_lemmas, ix_suffix, ix_out;
  bool ix_no_fold = false, ix_rebuild = false;
  nerkit_index_params ix_params;
  nerkit_index_params_init(&ix_params);
  sc_index->add_option("--collection", ix_collection, "Collection cache")
      ->required();
  sc_index->add_option("--lemmas", ix_lemmas, "Lemma dictionary TSV");
  sc_index->add_option("--suffix-rules", ix_suffix, "Suffix rewrite rules TSV");
  sc_index->add_flag("--no-case-fold", ix_no_fold,
                     "Index surface forms without case folding");
  sc_index->add_option("--k1", ix_params.k1, "BM25 k1")->capture_default_str();
  sc_index->add_option("--b", ix_params.b, "BM25 b")->capture_default_str();
  sc_index->add_option("--phrase-n-lo", ix_params.phrase_n_lo,
                       "Shortest indexed phrase unit")
      ->capture_default_str();
  sc_index->add_option("--phrase-n-hi", ix_params.phrase_n_hi,
                       "Longest indexed phrase unit")
      ->capture_default_str();
  sc_index->add_flag("--rebuild", ix_rebuild,
                     "Reconstruct even if the output file already exists");
  sc_index->add_option("--out", ix_out, "Index file")->required();

  // retrieve
  auto* sc_retrieve = app.add_subcommand(
      "retrieve", "Run one retrieval method for every gazetteer entry");
  sc_retrieve->fallthrough();
  std::string rt_collection, rt_index, rt_gazetteer, rt_method, rt_out;
  rt_method = "boolean_phrase";
  retrieval_args rt_args;
  sc_retrieve->add_option("--collection", rt_collection, "Collection cache")
      ->required();
  sc_retrieve->add_option("--index", rt_index, "Index file")->required();
  sc_retrieve->add_option("--gazetteer", rt_gazetteer, "Gazetteer TSV")
      ->required();
  sc_retrieve
      ->add_option("--method", rt_method,
                   "jaccard, bm25, boolean_phrase, fuzzy_regex, edit_rerank, "
                   "embedding_rerank, rrf, or concat")
      ->capture_default_str();
  add_retrieval_flags(sc_retrieve, rt_args);
  sc_retrieve->add_option("--out", rt_out, "Candidate TSV")->required();

  // compare-methods
  auto* sc_compare = app.add_subcommand(
      "compare-methods",
      "Score every retrieval method against relevance judgments");
  sc_compare->fallthrough();
  std::string cm_collection, cm_index, cm_gazetteer, cm_judgments, cm_out;
  uint64_t cm_depth = 10;
  double cm_beta = 0.25;
  retrieval_args cm_args;
  sc_compare->add_option("--collection", cm_collection, "Collection cache")
      ->required();
  sc_compare->add_option("--index", cm_index, "Index file")->required();
  sc_compare->add_option("--gazetteer", cm_gazetteer, "Gazetteer TSV")
      ->required();
  sc_compare->add_option("--judgments", cm_judgments, "Relevance judgments TSV")
      ->required();
  sc_compare->add_option("--depth", cm_depth, "Candidates scored per entity")
      ->capture_default_str();
  sc_compare->add_option("--beta", cm_beta, "Beta for the tabulated F-score")
      ->capture_default_str();
  add_retrieval_flags(sc_compare, cm_args);
  sc_compare->add_option("--out", cm_out, "Report file (default stdout)");

  // bootstrap
  auto* sc_bootstrap = app.add_subcommand(
      "bootstrap", "Project gazetteer matches into a BIO-tagged corpus");
  sc_bootstrap->fallthrough();
  std::string bs_collection, bs_index, bs_gazetteer, bs_technique, bs_out,
      bs_review;
  bs_technique = "boolean_phrase";
  double bs_train = 0.8, bs_val = 0.1, bs_test = 0.1;
  retrieval_args bs_args;
  sc_bootstrap->add_option("--collection", bs_collection, "Collection cache")
      ->required();
  sc_bootstrap->add_option("--index", bs_index, "Index file")->required();
  sc_bootstrap->add_option("--gazetteer", bs_gazetteer, "Gazetteer TSV")
      ->required();
  sc_bootstrap
      ->add_option("--technique", bs_technique, "Retrieval method to project")
      ->capture_default_str();
  add_retrieval_flags(sc_bootstrap, bs_args);
  sc_bootstrap->add_option("--train-ratio", bs_train, "Train share")
      ->capture_default_str();
  sc_bootstrap->add_option("--validation-ratio", bs_val, "Validation share")
      ->capture_default_str();
  sc_bootstrap->add_option("--test-ratio", bs_test, "Test share")
      ->capture_default_str();
  sc_bootstrap->add_option("--out", bs_out, "Corpus CoNLL file")->required();
  sc_bootstrap->add_option("--review", bs_review,
                           "Also write a review TSV for manual correction");

  // train
  auto* sc_train =
      app.add_subcommand("train", "Fit the linear tagger on a corpus");
  sc_train->fallthrough();
  std::string tr_corpus, tr_model_out, tr_report_out;
  train_args tr_args;
  sc_train->add_option("--corpus", tr_corpus, "Training corpus CoNLL")
      ->required();
  add_train_flags(sc_train, tr_args);
  sc_train->add_option("--model-out", tr_model_out, "Model file")->required();
  sc_train->add_option("--report-out", tr_report_out,
                       "Training report file (default stdout)");

  // infer
  auto* sc_infer = app.add_subcommand(
      "infer", "Tag a corpus or a whole collection with a trained model");
  sc_infer->fallthrough();
  std::string if_model, if_corpus, if_collection, if_out;
  sc_infer->add_option("--model", if_model, "Model file")->required();
  auto* if_c = sc_infer->add_option("--corpus", if_corpus, "Corpus to re-tag");
  sc_infer->add_option("--collection", if_collection, "Collection cache to tag")
      ->excludes(if_c);
  sc_infer->add_option("--out", if_out, "Tagged corpus CoNLL file")->required();

  // augment
  auto* sc_augment = app.add_subcommand(
      "augment", "Add model-predicted mentions to a corpus's existing ones");
  sc_augment->fallthrough();
  std::string ag_corpus, ag_model, ag_out;
  sc_augment->add_option("--corpus", ag_corpus, "Corpus CoNLL")->required();
  sc_augment->add_option("--model", ag_model, "Model file")->required();
  sc_augment->add_option("--out", ag_out, "Augmented corpus CoNLL file")
      ->required();

  // eval
  auto* sc_eval = app.add_subcommand(
      "eval", "Token and entity metrics of a prediction against gold");
  sc_eval->fallthrough();
  std::string ev_gold, ev_gold_entities, ev_pred, ev_out, ev_diff;
  double ev_beta = 0.25;
  bool ev_no_lang = false;
  sc_eval->add_option("--gold", ev_gold, "Gold corpus CoNLL")->required();
  sc_eval->add_option("--gold-entities", ev_gold_entities,
                      "Nested-entity sidecar for the gold corpus");
  sc_eval->add_option("--pred", ev_pred, "Predicted corpus CoNLL")->required();
  sc_eval->add_option("--beta", ev_beta, "Beta for the F-score")
      ->capture_default_str();
  sc_eval->add_flag("--no-per-language", ev_no_lang,
                    "Skip the per-language breakdown");
  sc_eval->add_option("--out", ev_out, "Report file (default stdout)");
  sc_eval->add_option("--diff", ev_diff,
                      "Also write an entity-level diff report here");

  // ablate
  auto* sc_ablate = app.add_subcommand(
      "ablate",
      "Train on small/augmented/collection-scale corpora with and without "
      "class weighting, and tabulate test F-scores");
  sc_ablate->fallthrough();
  std::string ab_corpus, ab_collection, ab_out;
  train_args ab_args;
  sc_ablate->add_option("--corpus", ab_corpus, "Seed corpus CoNLL")->required();
  sc_ablate->add_option("--collection", ab_collection, "Collection cache")
      ->required();
  add_train_flags(sc_ablate, ab_args);
  sc_ablate->add_option("--out", ab_out, "Report file (default stdout)");

  // stats
  auto* sc_stats =
      app.add_subcommand("stats", "Sentence and mention counts per split");
  sc_stats->fallthrough();
  std::string st_corpus, st_out;
  sc_stats->add_option("--corpus", st_corpus, "Corpus CoNLL")->required();
  sc_stats->add_option("--out", st_out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand(sc_ingest)) {
    nerkit_collection* col = nullptr;
    ck(nerkit_collection_open(in_manifest.c_str(), opt_cstr(in_abbrev), jobs,
                              &col));
    ck(nerkit_collection_save_cache(col, in_out.c_str()));
    std::cout << "collection: " << nerkit_collection_doc_count(col)
              << " documents -> " << in_out << "\n";
    nerkit_collection_free(col);
    return 0;
  }

  if (app.got_subcommand(sc_index)) {
    nerkit_collection* col = open_cache(ix_collection);
    if (!ix_rebuild && std::filesystem::exists(ix_out)) {
      nerkit_indexes* idx = open_indexes(ix_out, col);
      std::cout << "indexes: " << ix_out
                << " is current (use --rebuild to reconstruct)\n";
      nerkit_indexes_free(idx);
      nerkit_collection_free(col);
      return 0;
    }
    nerkit_indexes* idx = nullptr;
    ck(nerkit_indexes_build(col, opt_cstr(ix_lemmas), opt_cstr(ix_suffix),
                            ix_no_fold ? 0 : 1, &ix_params, jobs, &idx));
    ck(nerkit_indexes_save(idx, ix_out.c_str()));
    std::cout << "indexes -> " << ix_out << "\n";
    nerkit_indexes_free(idx);
    nerkit_collection_free(col);
    return 0;
  }

  if (app.got_subcommand(sc_retrieve)) {
    nerkit_collection* col = open_cache(rt_collection);
    nerkit_indexes* idx = open_indexes(rt_index, col);
    nerkit_gazetteer* gaz = open_gazetteer(rt_gazetteer);
    auto stores = open_embeddings(rt_args.embedding_specs);
    ck(nerkit_retrieve_to_file(gaz, col, idx, rt_method.c_str(), &rt_args.opt,
                               stores.data(), stores.size(), jobs, seed,
                               rt_out.c_str()));
    std::cout << "candidates -> " << rt_out << "\n";
    free_embeddings(stores);
    nerkit_gazetteer_free(gaz);
    nerkit_indexes_free(idx);
    nerkit_collection_free(col);
    return 0;
  }

  if (app.got_subcommand(sc_compare)) {
    nerkit_collection* col = open_cache(cm_collection);
    nerkit_indexes* idx = open_indexes(cm_index, col);
    nerkit_gazetteer* gaz = open_gazetteer(cm_gazetteer);
    auto stores = open_embeddings(cm_args.embedding_specs);
    nerkit_report* rep = nullptr;
    ck(nerkit_compare_methods(gaz, col, idx, cm_judgments.c_str(), &cm_args.opt,
                              stores.data(), stores.size(), cm_depth, cm_beta,
                              jobs, &rep));
    emit_report(rep, cm_out, seed);
    nerkit_report_free(rep);
    free_embeddings(stores);
    nerkit_gazetteer_free(gaz);
    nerkit_indexes_free(idx);
    nerkit_collection_free(col);
    return 0;
  }

  if (app.got_subcommand(sc_bootstrap)) {
    nerkit_collection* col = open_cache(bs_collection);
    nerkit_indexes* idx = open_indexes(bs_index, col);
    nerkit_gazetteer* gaz = open_gazetteer(bs_gazetteer);
    auto stores = open_embeddings(bs_args.embedding_specs);
    nerkit_bootstrap_config cfg;
    nerkit_bootstrap_config_init(&cfg);
    cfg.technique = bs_technique.c_str();
    cfg.retrieval = bs_args.opt;
    cfg.train_ratio = bs_train;
    cfg.validation_ratio = bs_val;
    cfg.test_ratio = bs_test;
    cfg.seed = seed;
    cfg.jobs = jobs;
    nerkit_corpus* corpus = nullptr;
    ck(nerkit_bootstrap(gaz, col, idx, &cfg, stores.data(), stores.size(),
                        &corpus));
    ck(nerkit_corpus_save(corpus, bs_out.c_str(), seed));
    std::cout << "corpus: " << nerkit_corpus_sentence_count(corpus)
              << " sentences -> " << bs_out << "\n";
    if (!bs_review.empty()) {
      ck(nerkit_corpus_save_review(corpus, bs_review.c_str(), seed));
      std::cout << "review sheet -> " << bs_review << "\n";
    }
    nerkit_corpus_free(corpus);
    free_embeddings(stores);
    nerkit_gazetteer_free(gaz);
    nerkit_indexes_free(idx);
    nerkit_collection_free(col);
    return 0;
  }

  if (app.got_subcommand(sc_train)) {
    finish_train_args(tr_args, seed);
    nerkit_corpus* corpus = open_corpus(tr_corpus);
    nerkit_model* model = nullptr;
    nerkit_report* rep = nullptr;
    ck(nerkit_train(corpus, &tr_args.features, &tr_args.train, &model, &rep));
    ck(nerkit_model_save(model, tr_model_out.c_str()));
    emit_report(rep, tr_report_out, seed);
    std::cout << "model -> " << tr_model_out << "\n";
    nerkit_report_free(rep);
    nerkit_model_free(model);
    nerkit_corpus_free(corpus);
    return 0;
  }

  if (app.got_subcommand(sc_infer)) {
    if (if_corpus.empty() == if_collection.empty())
      die_usage("infer: exactly one of --corpus or --collection is required");
    nerkit_model* model = open_model(if_model);
    nerkit_corpus* tagged = nullptr;
    if (!if_corpus.empty()) {
      nerkit_corpus* corpus = open_corpus(if_corpus);
      ck(nerkit_annotate_corpus(model, corpus, &tagged));
      nerkit_corpus_free(corpus);
    } else {
      nerkit_collection* col = open_cache(if_collection);
      ck(nerkit_annotate_collection(model, col, jobs, &tagged));
      nerkit_collection_free(col);
    }
    ck(nerkit_corpus_save(tagged, if_out.c_str(), seed));
    std::cout << "tagged corpus: " << nerkit_corpus_sentence_count(tagged)
              << " sentences -> " << if_out << "\n";
    nerkit_corpus_free(tagged);
    nerkit_model_free(model);
    return 0;
  }

  if (app.got_subcommand(sc_augment)) {
    nerkit_corpus* corpus = open_corpus(ag_corpus);
    nerkit_model* model = open_model(ag_model);
    nerkit_corpus* grown = nullptr;
    ck(nerkit_augment(corpus, model, &grown));
    ck(nerkit_corpus_save(grown, ag_out.c_str(), seed));
    std::cout << "augmented corpus: " << nerkit_corpus_sentence_count(grown)
              << " sentences -> " << ag_out << "\n";
    nerkit_corpus_free(grown);
    nerkit_model_free(model);
    nerkit_corpus_free(corpus);
    return 0;
  }

  if (app.got_subcommand(sc_eval)) {
    nerkit_corpus* gold = open_corpus(ev_gold, ev_gold_entities);
    nerkit_corpus* pred = open_corpus(ev_pred);
    nerkit_report* rep = nullptr;
    ck(nerkit_evaluate(gold, pred, ev_beta, ev_no_lang ? 0 : 1, &rep));
    emit_report(rep, ev_out, seed);
    nerkit_report_free(rep);
    if (!ev_diff.empty()) {
      nerkit_report* diff = nullptr;
      ck(nerkit_diff(gold, pred, &diff));
      emit_report(diff, ev_diff, seed);
      nerkit_report_free(diff);
    }
    nerkit_corpus_free(pred);
    nerkit_corpus_free(gold);
    return 0;
  }

  if (app.got_subcommand(sc_ablate)) {
    finish_train_args(ab_args, seed);
    nerkit_corpus* corpus = open_corpus(ab_corpus);
    nerkit_collection* col = open_cache(ab_collection);
    nerkit_report* rep = nullptr;
    ck(nerkit_ablate(corpus, col, &ab_args.features, &ab_args.train, jobs,
                     &rep));
    emit_report(rep, ab_out, seed);
    nerkit_report_free(rep);
    nerkit_collection_free(col);
    nerkit_corpus_free(corpus);
    return 0;
  }

  if (app.got_subcommand(sc_stats)) {
    nerkit_corpus* corpus = open_corpus(st_corpus);
    nerkit_report* rep = nullptr;
    ck(nerkit_corpus_stats(corpus, &rep));
    emit_report(rep, st_out, seed);
    nerkit_report_free(rep);
    nerkit_corpus_free(corpus);
    return 0;
  }

  std::cerr << app.help();
  return 2;
}
