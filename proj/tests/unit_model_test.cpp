#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "core/compare.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/hash.hpp"
#include "core/tagger.hpp"
#include "core/textseg.hpp"
#include "test_util.hpp"

using namespace nerkit;

namespace {

annotated_sentence sent(const std::string& id, const std::string& text,
                        const std::vector<label>& tags,
                        split part = split::train,
                        const std::string& lang = "xx") {
  annotated_sentence s;
  s.sentence_id = id;
  s.doc_id = "doc";
  s.language = lang;
  s.part = part;
  s.text = text;
  s.tokens = tokenize(text);
  s.tags = tags;
  return s;
}

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  return errc::io;  // sentinel: "did not throw"
}

std::vector<token> toks(const std::string& text) { return tokenize(text); }

// A model whose every score is the chosen class's bias; argmax is that class.
tagger_model biased_model(label favorite, std::uint32_t hash_dim = 16) {
  tagger_model m;
  m.features.hash_dim = hash_dim;
  m.w.assign((static_cast<std::size_t>(hash_dim) + 1) * label_count, 0.0);
  if (favorite != label::b_per)  // all-zero already favors the lowest id
    m.w[static_cast<std::size_t>(hash_dim) * label_count +
        static_cast<int>(favorite)] = 1.0;
  return m;
}

}  // namespace

TEST_CASE("class weights are mean-normalized inverse train frequencies") {
  using l = label;
  corpus c;
  c.name = "w";
  // train counts: B-PER 2, I-PER 1, B-LOC 1, I-LOC 1, O 5
  c.sentences = {
      sent("a", "p q r s t", {l::b_per, l::i_per, l::outside, l::outside,
                              l::outside}),
      sent("b", "p q r", {l::b_per, l::b_loc, l::i_loc}),
      sent("c", "p q", {l::outside, l::outside}),
      // non-train tags must not be counted
      sent("d", "p", {l::b_loc}, split::test),
  };
  const auto w = class_weights(c);
  CHECK(w[0] == 0.6756756756756757);
  CHECK(w[1] == 1.3513513513513513);
  CHECK(w[2] == 1.3513513513513513);
  CHECK(w[3] == 1.3513513513513513);
  CHECK(w[4] == 0.2702702702702703);

  // Laplace variant works from counts + 1: (3, 2, 2, 2, 6)
  const auto ws = class_weights_smoothed(c);
  CHECK(ws[0] == 0.8333333333333333);
  CHECK(ws[1] == 1.25);
  CHECK(ws[2] == 1.25);
  CHECK(ws[3] == 1.25);
  CHECK(ws[4] == 0.41666666666666663);

  corpus missing;
  missing.name = "m";
  missing.sentences = {sent("a", "p q", {l::b_per, l::outside})};
  CHECK(code_of([&] { class_weights(missing); }) == errc::missing_class);
  CHECK_NOTHROW(class_weights_smoothed(missing));

  // equal counts collapse to exactly 1.0 everywhere
  corpus eq;
  eq.name = "eq";
  eq.sentences = {
      sent("a", "p q r s t", {l::b_per, l::i_per, l::b_loc, l::i_loc,
                              l::outside})};
  for (double v : class_weights(eq)) CHECK(v == 1.0);
  for (double v : unit_class_weights()) CHECK(v == 1.0);
}

TEST_CASE("token features hash the documented strings in order") {
  feature_config cfg;
  cfg.hash_dim = 1024;
  cfg.ngram_lo = 2;
  cfg.ngram_hi = 3;
  cfg.context = 1;
  cfg.shape = true;
  auto fid = [&](const std::string& s) {
    return static_cast<std::uint32_t>(fnv1a64(s) % cfg.hash_dim);
  };

  const auto two = toks("Ab cd");
  CHECK(token_features(two, 0, cfg) ==
        std::vector<std::uint32_t>{fid("w-1=<s>"), fid("w0=ab"), fid("w1=cd"),
                                   fid("g2=ab"), fid("sh=iu"), fid("sh=l2")});
  CHECK(token_features(two, 1, cfg) ==
        std::vector<std::uint32_t>{fid("w-1=ab"), fid("w0=cd"), fid("w1=</s>"),
                                   fid("g2=cd"), fid("sh=l2")});
  CHECK(token_features(two, 0, cfg) == token_features(two, 0, cfg));
  for (auto f : token_features(two, 0, cfg)) CHECK(f < cfg.hash_dim);

  // folding reaches the window and the n-grams
  const auto folded = toks("Čáp");
  cfg.context = 0;
  CHECK(token_features(folded, 0, cfg)[0] == fid("w0=čáp"));

  // repeated n-grams keep every occurrence
  cfg.shape = false;
  const auto rep = toks("aaaa");
  const auto feats = token_features(rep, 0, cfg);
  CHECK(std::count(feats.begin(), feats.end(), fid("g2=aa")) == 3);
  CHECK(std::count(feats.begin(), feats.end(), fid("g3=aaa")) == 2);
  CHECK(feats.size() == 6);  // w0 + 3 bigrams + 2 trigrams

  // sentence edges fill the whole window with sentinels
  cfg.context = 2;
  cfg.ngram_lo = 9;  // no token this short has 9-grams
  cfg.ngram_hi = 9;
  const auto lone = toks("x");
  CHECK(token_features(lone, 0, cfg) ==
        std::vector<std::uint32_t>{fid("w-2=<s>"), fid("w-1=<s>"), fid("w0=x"),
                                   fid("w1=</s>"), fid("w2=</s>")});
}

TEST_CASE("shape features fire per capitalization, digits and punctuation") {
  feature_config cfg;
  cfg.hash_dim = 4096;
  cfg.ngram_lo = 40;  // longer than any token here: no n-gram features
  cfg.ngram_hi = 40;
  cfg.context = 0;
  cfg.shape = true;
  auto fid = [&](const std::string& s) {
    return static_cast<std::uint32_t>(fnv1a64(s) % cfg.hash_dim);
  };
  auto shapes = [&](const std::string& word) {
    auto f = token_features(toks(word), 0, cfg);
    f.erase(f.begin());  // drop w0=...
    return f;
  };
  CHECK(shapes("AB") ==
        std::vector<std::uint32_t>{fid("sh=iu"), fid("sh=au"), fid("sh=l2")});
  CHECK(shapes("A7") ==
        std::vector<std::uint32_t>{fid("sh=iu"), fid("sh=hd"), fid("sh=l2")});
  CHECK(shapes("77") ==
        std::vector<std::uint32_t>{fid("sh=hd"), fid("sh=ad"), fid("sh=l2")});
  CHECK(shapes(",") ==
        std::vector<std::uint32_t>{fid("sh=pu"), fid("sh=l1")});
  CHECK(shapes("abcdefghijkl") == std::vector<std::uint32_t>{fid("sh=l8")});

  cfg.shape = false;
  CHECK(token_features(toks("AB"), 0, cfg).size() == 1);  // w0 only
}

TEST_CASE("score_features adds bias row plus one row per occurrence") {
  const std::uint32_t dim = 4;
  std::vector<double> w((dim + 1) * label_count);
  for (std::size_t r = 0; r <= dim; ++r)
    for (int c = 0; c < label_count; ++c) w[r * label_count + c] =
        static_cast<double>(r * 10 + c);

  const auto s = score_features(w, dim, {0, 2, 2});
  for (int c = 0; c < label_count; ++c)
    CHECK(s[c] == 80.0 + 4.0 * c);  // bias(40+c) + row0(c) + 2*row2(20+c)

  const auto bias_only = score_features(w, dim, {});
  for (int c = 0; c < label_count; ++c) CHECK(bias_only[c] == 40.0 + c);
}

TEST_CASE("token loss and gradient follow weighted softmax cross-entropy") {
  const std::array<double, label_count> uniform{0, 0, 0, 0, 0};
  CHECK(token_loss(uniform, label::b_loc, unit_class_weights()) ==
        doctest::Approx(1.6094379124341003).epsilon(1e-15));  // ln 5
  class_weight_vector cw = unit_class_weights();
  cw[static_cast<int>(label::b_loc)] = 2.0;
  CHECK(token_loss(uniform, label::b_loc, cw) ==
        doctest::Approx(2 * 1.6094379124341003).epsilon(1e-15));

  // loss is -cw * log softmax[gold] for any scores
  const std::array<double, label_count> scores{1.5, -0.5, 0.25, 3.0, 0.0};
  double lse = 0.0;
  for (double v : scores) lse += std::exp(v);
  lse = std::log(lse);
  CHECK(token_loss(scores, label::i_per, unit_class_weights()) ==
        doctest::Approx(-(scores[1] - lse)).epsilon(1e-12));

  // gradient rows sum to zero and push the gold score up
  const auto g = token_score_gradient(scores, label::i_per, cw);
  double sum = 0.0;
  for (double v : g) sum += v;
  CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g[1] < 0.0);
  for (int c = 0; c < label_count; ++c)
    if (c != 1) CHECK(g[c] > 0.0);
  // uniform scores: softmax = 1/5 each
  const auto gu =
      token_score_gradient(uniform, label::b_per, unit_class_weights());
  CHECK(gu[0] == doctest::Approx(0.2 - 1.0).epsilon(1e-12));
  CHECK(gu[4] == doctest::Approx(0.2).epsilon(1e-12));
}

namespace {

corpus separable_corpus() {
  using l = label;
  corpus c;
  c.name = "sep";
  c.sentences = {
      sent("t0", "karel novak pracuje", {l::b_per, l::i_per, l::outside}),
      sent("t1", "jan svoboda mluvi", {l::b_per, l::i_per, l::outside}),
      sent("t2", "praha lezi blizko", {l::b_loc, l::outside, l::outside}),
      sent("t3", "brno lezi daleko", {l::b_loc, l::outside, l::outside}),
      sent("v0", "jan novak pracuje", {l::b_per, l::i_per, l::outside},
           split::validation),
      sent("v1", "praha lezi daleko", {l::b_loc, l::outside, l::outside},
           split::validation),
  };
  return c;
}

}  // namespace

TEST_CASE("train validates its inputs") {
  const corpus c = separable_corpus();
  feature_config f;
  f.hash_dim = 64;
  train_config t;
  t.epochs = 1;

  feature_config bad = f;
  bad.hash_dim = 1;
  CHECK(code_of([&] { train(c, bad, t); }) == errc::invalid_argument);
  bad = f;
  bad.ngram_lo = 5;
  bad.ngram_hi = 2;
  CHECK(code_of([&] { train(c, bad, t); }) == errc::invalid_argument);
  train_config badt = t;
  badt.learning_rate = 0.0;
  CHECK(code_of([&] { train(c, f, badt); }) == errc::invalid_argument);
  badt = t;
  badt.epochs = 0;
  CHECK(code_of([&] { train(c, f, badt); }) == errc::invalid_argument);

  corpus no_val = c;
  for (auto& s : no_val.sentences)
    if (s.part == split::validation) s.part = split::test;
  CHECK(code_of([&] { train(no_val, f, t); }) == errc::empty_split);
  corpus no_train = c;
  for (auto& s : no_train.sentences)
    if (s.part == split::train) s.part = split::test;
  CHECK(code_of([&] { train(no_train, f, t); }) == errc::empty_split);
}

TEST_CASE("train is deterministic and keeps the best validation epoch") {
  const corpus c = separable_corpus();
  feature_config f;
  f.hash_dim = 512;
  f.ngram_lo = 2;
  f.ngram_hi = 3;
  f.context = 1;
  train_config t;
  t.learning_rate = 0.5;
  t.epochs = 8;
  t.patience = 8;
  t.seed = 5;

  train_report r1, r2;
  const auto m1 = train(c, f, t, &r1);
  const auto m2 = train(c, f, t, &r2);
  CHECK(m1.w == m2.w);
  CHECK(m1.epochs_trained == m2.epochs_trained);
  REQUIRE(r1.epochs.size() == r2.epochs.size());
  for (std::size_t i = 0; i < r1.epochs.size(); ++i) {
    CHECK(r1.epochs[i].avg_loss == r2.epochs[i].avg_loss);
    CHECK(r1.epochs[i].val_fbeta == r2.epochs[i].val_fbeta);
  }

  // the report names the first epoch reaching the maximum validation score
  REQUIRE(r1.best_epoch >= 1);
  REQUIRE(r1.best_epoch <= r1.epochs.size());
  double best = -1.0;
  std::size_t first_best = 0;
  for (std::size_t i = 0; i < r1.epochs.size(); ++i)
    if (r1.epochs[i].val_fbeta > best) {
      best = r1.epochs[i].val_fbeta;
      first_best = i + 1;
    }
  CHECK(r1.best_epoch == first_best);
  CHECK(r1.best_val_fbeta == best);

  // distinct surface forms per class: the model must separate them well
  CHECK(r1.best_val_fbeta > 0.5);
  CHECK(m1.epochs_trained == 8);
  CHECK(m1.seed == 5);
  CHECK(m1.corpus_name == "sep");
  // the smoothed fallback engaged (I-LOC never occurs in training)
  CHECK(m1.train_weights[static_cast<int>(label::i_loc)] > 0.0);

  // a different seed shuffles differently somewhere in 8 epochs
  train_config t2 = t;
  t2.seed = 6;
  const auto m3 = train(c, f, t2);
  CHECK(m1.w != m3.w);

  const std::string text = render_train_report(m1, r1);
  CHECK(text.find("trained on sep:") != std::string::npos);
  CHECK(text.find("class_weights") != std::string::npos);
  CHECK(text.find("epoch 1 avg_loss=") != std::string::npos);
  CHECK(text.find("best_epoch") != std::string::npos);
}

TEST_CASE("training stops after patience epochs without improvement") {
  using l = label;
  corpus c = separable_corpus();
  // a validation split with no entity tokens pins the score to zero
  c.sentences[4] = sent("v0", "novak karel lezi",
                        {l::outside, l::outside, l::outside},
                        split::validation);
  c.sentences.pop_back();

  feature_config f;
  f.hash_dim = 64;
  train_config t;
  t.epochs = 10;
  t.patience = 2;
  train_report r;
  const auto m = train(c, f, t, &r);
  CHECK(m.epochs_trained == 3);  // first epoch counts as the only gain
  CHECK(r.epochs.size() == 3);
  CHECK(r.best_epoch == 1);
  CHECK(r.best_val_fbeta == 0.0);

  // the epoch budget still caps a run that never stalls out
  t.patience = 50;
  t.epochs = 4;
  CHECK(train(c, f, t).epochs_trained == 4);
}

TEST_CASE("predict breaks ties to the lowest label and repairs orphans") {
  const auto m0 = biased_model(label::b_per);
  CHECK(predict(m0, toks("a b c")) ==
        std::vector<label>{label::b_per, label::b_per, label::b_per});
  CHECK(predict(m0, {}).empty());

  // a model shouting I-LOC everywhere comes out as one BIO-valid run
  const auto mi = biased_model(label::i_loc);
  CHECK(predict(mi, toks("a b c")) ==
        std::vector<label>{label::b_loc, label::i_loc, label::i_loc});
  const auto mp = biased_model(label::i_per);
  CHECK(predict(mp, toks("a b")) ==
        std::vector<label>{label::b_per, label::i_per});
}

TEST_CASE("annotate_corpus replaces tags and drops gold") {
  using l = label;
  corpus c;
  c.name = "ann";
  c.sentences = {sent("s1", "aa bb", {l::b_loc, l::outside}, split::test)};
  entity_mention g;
  g.char_start = 0;
  g.char_end = 2;
  c.sentences[0].gold = {g};

  const auto out = annotate_corpus(biased_model(label::b_per), c);
  CHECK(out.sentences[0].tags == std::vector<l>{l::b_per, l::b_per});
  CHECK(out.sentences[0].gold.empty());
  CHECK(out.sentences[0].sentence_id == "s1");
  CHECK(out.sentences[0].part == split::test);
  CHECK(out.sentences[0].text == "aa bb");
  // the input is untouched
  CHECK(c.sentences[0].tags[0] == l::b_loc);
}

TEST_CASE("augment_corpus adds predictions only on unclaimed tokens") {
  using l = label;
  corpus c;
  c.name = "aug";
  c.sentences = {sent("s1", "aa bb cc dd ee",
                      {l::outside, l::b_loc, l::i_loc, l::outside,
                       l::outside})};
  const auto out = augment_corpus(c, biased_model(label::b_per));
  CHECK(out.sentences[0].tags ==
        std::vector<l>{l::b_per, l::b_loc, l::i_loc, l::b_per, l::b_per});
}

TEST_CASE("annotate_collection tags every sentence of every document") {
  const auto dir = testutil::scratch_dir("anncol");
  const auto col = testutil::make_collection(
      dir, {{"da", "cs", "Jedna veta. Druha veta."}, {"db", "de", "Nur eine."}});
  const auto model = biased_model(label::b_per);
  const auto out = annotate_collection(model, col);
  REQUIRE(out.sentences.size() == 3);
  CHECK(out.sentences[0].sentence_id == "da#0");
  CHECK(out.sentences[1].sentence_id == "da#1");
  CHECK(out.sentences[2].sentence_id == "db#0");
  CHECK(out.sentences[1].text == "Druha veta.");
  CHECK(out.sentences[2].language == "de");
  for (const auto& s : out.sentences) {
    CHECK(s.part == split::unassigned);
    for (label t : s.tags) CHECK(t == label::b_per);
    CHECK(s.tokens.front().char_start == 0);  // sentence-relative offsets
  }
  // job count never changes the output
  const auto par = annotate_collection(model, col, 4);
  REQUIRE(par.sentences.size() == out.sentences.size());
  for (std::size_t i = 0; i < out.sentences.size(); ++i) {
    CHECK(par.sentences[i].sentence_id == out.sentences[i].sentence_id);
    CHECK(par.sentences[i].tags == out.sentences[i].tags);
  }
}

TEST_CASE("models survive a save/load round trip") {
  tagger_model m;
  m.features.hash_dim = 8;
  m.features.ngram_lo = 2;
  m.features.ngram_hi = 3;
  m.features.context = 1;
  m.features.shape = false;
  m.train_weights = {0.6756756756756757, 1.3513513513513513,
                     1.3513513513513513, 1.3513513513513513,
                     0.2702702702702703};
  m.w.assign((8 + 1) * label_count, 0.0);
  for (std::size_t i = 0; i < m.w.size(); ++i)
    m.w[i] = 0.5 * static_cast<double>(i) - 3.0;
  m.epochs_trained = 3;
  m.seed = 99;
  m.corpus_name = "rt";

  const auto dir = testutil::scratch_dir("model");
  const auto path = (dir / "m.bin").string();
  save_model(m, path);
  const auto back = load_model(path);
  CHECK(back.features.hash_dim == 8);
  CHECK(back.features.ngram_lo == 2);
  CHECK(back.features.ngram_hi == 3);
  CHECK(back.features.context == 1);
  CHECK(back.features.shape == false);
  CHECK(back.train_weights == m.train_weights);
  CHECK(back.w == m.w);
  CHECK(back.epochs_trained == 3);
  CHECK(back.seed == 99);
  CHECK(back.corpus_name == "rt");

  // a wrong magic is refused
  auto bytes = testutil::read_file(path);
  bytes[0] = 'X';
  const auto bad = testutil::write_file(dir / "bad.bin", bytes);
  CHECK(code_of([&] { load_model(bad); }) == errc::parse);
  // so is a truncated file
  const auto cut = testutil::write_file(dir / "cut.bin", bytes.substr(0, 10));
  CHECK_THROWS_AS(load_model(cut), error);
  // and a non-finite weight
  tagger_model inf = m;
  inf.w[7] = std::numeric_limits<double>::infinity();
  const auto infp = (dir / "inf.bin").string();
  save_model(inf, infp);
  CHECK(code_of([&] { load_model(infp); }) == errc::parse);
}

TEST_CASE("fbeta weighs precision heavily at low beta") {
  CHECK(fbeta(0.0, 0.0, 0.25) == 0.0);
  CHECK(fbeta(1.0, 1.0, 0.25) == 1.0);
  CHECK(fbeta(0.5, 0.25, 0.25) ==
        doctest::Approx(0.4722222222222222).epsilon(1e-15));
  CHECK(fbeta(0.9, 0.1, 0.25) > fbeta(0.1, 0.9, 0.25));
  CHECK(fbeta(0.6, 0.25, 0.25) > fbeta(0.5, 0.25, 0.25));
  CHECK(fbeta(0.5, 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

namespace {

corpus pair_gold() {
  using l = label;
  corpus g;
  g.name = "g";
  g.sentences = {
      sent("s1", "aa bb cc dd ee",
           {l::b_per, l::outside, l::b_loc, l::outside, l::b_per},
           split::test, "cs"),
      sent("s2", "ff gg", {l::b_per, l::outside}, split::test, "de"),
  };
  return g;
}

corpus pair_pred() {
  using l = label;
  corpus p = pair_gold();
  p.name = "p";
  p.sentences[0].tags = {l::b_per, l::b_loc, l::outside, l::outside, l::b_loc};
  p.sentences[1].tags = {l::b_per, l::outside};
  return p;
}

}  // namespace

TEST_CASE("token metrics count micro TP/FP/FN over non-O tags") {
  // s1: TP(b_per), FP(b_loc on O), FN(b_loc missed), nothing, FP+FN(type);
  // s2: TP(b_per), nothing
  const auto r = token_metrics(pair_gold(), pair_pred(), 0.25);
  CHECK(r.counts.tp == 2);
  CHECK(r.counts.fp == 2);
  CHECK(r.counts.fn == 2);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f == doctest::Approx(0.5).epsilon(1e-12));

  const auto by_lang = token_metrics_by_language(pair_gold(), pair_pred(), 0.25);
  REQUIRE(by_lang.size() == 2);
  CHECK(by_lang.at("cs").counts.tp == 1);
  CHECK(by_lang.at("cs").counts.fp == 2);
  CHECK(by_lang.at("de").counts.tp == 1);
  CHECK(by_lang.at("de").counts.fp == 0);
  // language counts pool to the overall counts
  CHECK(by_lang.at("cs").counts.tp + by_lang.at("de").counts.tp ==
        r.counts.tp);

  corpus misaligned = pair_pred();
  misaligned.sentences[1].sentence_id = "zz";
  CHECK(code_of([&] { token_metrics(pair_gold(), misaligned, 0.25); }) ==
        errc::alignment);
  corpus fewer = pair_pred();
  fewer.sentences.pop_back();
  CHECK(code_of([&] { token_metrics(pair_gold(), fewer, 0.25); }) ==
        errc::alignment);
  corpus short_sent = pair_pred();
  short_sent.sentences[0].tokens.pop_back();
  short_sent.sentences[0].tags.pop_back();
  CHECK(code_of([&] { token_metrics(pair_gold(), short_sent, 0.25); }) ==
        errc::alignment);
}

TEST_CASE("entity metrics: exact matching, claims, and the fuzzy overlap") {
  using l = label;
  // identical corpora score perfectly in both regimes
  const auto perfect =
      entity_metrics(pair_gold(), pair_gold(), match_regime::strict);
  CHECK(perfect.counts.matched == 4);
  CHECK(perfect.counts.predicted == 4);
  CHECK(perfect.counts.matched_top == 4);
  CHECK(perfect.counts.gold_top == 4);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);

  // one gold, two same-type overlapping predictions: one claim only
  corpus g1;
  g1.name = "g";
  g1.sentences = {sent("s", "aa bb cc", {l::b_loc, l::i_loc, l::i_loc})};
  entity_mention wide;
  wide.type = entity_type::loc;
  wide.char_start = 0;
  wide.char_end = 8;
  g1.sentences[0].gold = {wide};
  corpus p1 = g1;
  p1.sentences[0].gold.clear();
  p1.sentences[0].tags = {l::b_loc, l::outside, l::b_loc};
  const auto once = entity_metrics(g1, p1, match_regime::fuzzy);
  CHECK(once.counts.matched == 1);
  CHECK(once.counts.predicted == 2);
  CHECK(once.counts.matched_top == 1);
  CHECK(once.counts.gold_top == 1);
  CHECK(once.precision == 0.5);
  CHECK(once.recall == 1.0);
  // strict: neither prediction has the exact span
  const auto strict1 = entity_metrics(g1, p1, match_regime::strict);
  CHECK(strict1.counts.matched == 0);
  CHECK(strict1.recall == 0.0);
}

TEST_CASE("entity metrics run the exact pass before any overlap claims") {
  using l = label;
  corpus g;
  g.name = "g";
  g.sentences = {sent("s", "aa bb cc", {l::outside, l::b_loc, l::outside})};
  // G1 [4,8) listed first would soak up an overlap-first matcher
  entity_mention g1, g2;
  g1.type = entity_type::loc;
  g1.char_start = 4;
  g1.char_end = 8;
  g2.type = entity_type::loc;
  g2.char_start = 3;
  g2.char_end = 5;
  g.sentences[0].gold = {g1, g2};

  corpus p = g;
  p.sentences[0].gold.clear();
  p.sentences[0].tags = {l::outside, l::b_loc, l::b_loc};  // [3,5) and [6,8)
  const auto fz = entity_metrics(g, p, match_regime::fuzzy);
  CHECK(fz.counts.matched == 2);  // [3,5) exact on G2 leaves G1 for [6,8)
  CHECK(fz.counts.matched_top == 2);
  const auto st = entity_metrics(g, p, match_regime::strict);
  CHECK(st.counts.matched == 1);
  CHECK(st.counts.matched_top == 1);
  CHECK(st.precision == 0.5);
  CHECK(st.recall == 0.5);
}

TEST_CASE("a prediction matching a nested gold counts for its top mention") {
  using l = label;
  corpus g;
  g.name = "g";
  g.sentences = {sent("s", "pan novak z prahy",
                      {l::b_per, l::i_per, l::i_per, l::i_per})};
  entity_mention per, loc;
  per.type = entity_type::per;
  per.char_start = 0;
  per.char_end = 17;
  loc.type = entity_type::loc;
  loc.char_start = 12;
  loc.char_end = 17;
  per.nested = {loc};
  g.sentences[0].gold = {per};

  corpus p = g;
  p.sentences[0].gold.clear();
  p.sentences[0].tags = {l::outside, l::outside, l::outside, l::b_loc};
  const auto st = entity_metrics(g, p, match_regime::strict);
  CHECK(st.counts.matched == 1);     // the nested LOC, exactly
  CHECK(st.counts.predicted == 1);
  CHECK(st.counts.matched_top == 1); // finding the part finds the whole
  CHECK(st.counts.gold_top == 1);
  CHECK(st.precision == 1.0);
  CHECK(st.recall == 1.0);

  // the same nested span is NOT a strict match for a PER prediction
  corpus p2 = p;
  p2.sentences[0].tags = {l::outside, l::outside, l::outside, l::b_per};
  const auto st2 = entity_metrics(g, p2, match_regime::strict);
  CHECK(st2.counts.matched == 0);
  // but fuzzily it overlaps the enclosing PER
  const auto fz2 = entity_metrics(g, p2, match_regime::fuzzy);
  CHECK(fz2.counts.matched == 1);
}

TEST_CASE("confusion matrix counts, normalizes and flags support") {
  const auto m = confusion(pair_gold(), pair_pred());
  CHECK(m.counts[0][0] == 2);  // aa and ff, both predicted B-PER
  CHECK(m.counts[0][2] == 1);  // ee: gold B-PER, predicted B-LOC
  CHECK(m.counts[2][4] == 1);  // cc: gold B-LOC, predicted O
  CHECK(m.counts[4][2] == 1);  // bb: gold O, predicted B-LOC
  CHECK(m.counts[4][4] == 2);
  CHECK(m.supported[0]);
  CHECK_FALSE(m.supported[1]);  // I-PER never appears in gold
  CHECK(m.supported[2]);
  CHECK_FALSE(m.supported[3]);
  CHECK(m.supported[4]);
  CHECK(m.rows[0][0] == 2.0 / 3.0);
  CHECK(m.rows[0][2] == 1.0 / 3.0);
  for (int r = 0; r < label_count; ++r) {
    double sum = 0.0;
    for (int c = 0; c < label_count; ++c) sum += m.rows[r][c];
    if (m.supported[r])
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    else
      CHECK(sum == 0.0);
  }
  const auto grid = confusion_grid(m);
  CHECK(grid.rfind("label\tB-PER\tI-PER\tB-LOC\tI-LOC\tO\n", 0) == 0);
  CHECK(grid.find("\n B-PER") == std::string::npos);  // unpadded rows
  CHECK(grid.find("B-PER\t0.666667\t0.000000\t0.333333") != std::string::npos);
}

TEST_CASE("evaluate_corpus assembles metrics, table and confusion grid") {
  const auto rep = evaluate_corpus(pair_gold(), pair_pred(), eval_config{});
  auto get = [&](const std::string& key) {
    for (const auto& [k, v] : rep.values)
      if (k == key) return v;
    REQUIRE(false);
    return 0.0;
  };
  CHECK(get("token.tp") == 2.0);
  CHECK(get("token.fp") == 2.0);
  CHECK(get("token.precision") == 0.5);
  CHECK(get("entity.strict.predicted") == 4.0);
  CHECK(get("entity.fuzzy.predicted") == 4.0);
  CHECK(get("lang.de.token.tp") == 1.0);
  CHECK(get("entity.strict.precision") <= get("entity.fuzzy.precision") + 1e-12);

  CHECK(rep.table.rfind("scope", 0) == 0);
  CHECK(rep.table.find("overall") != std::string::npos);
  CHECK(rep.table.find("cs") != std::string::npos);
  CHECK(rep.table.find("de") != std::string::npos);
  CHECK(rep.confusion_tsv.rfind("label\t", 0) == 0);

  const auto text = render_eval_report(rep);
  CHECK(text.find(rep.table) != std::string::npos);
  CHECK(text.find("confusion (rows gold, columns predicted, row-normalized):") !=
        std::string::npos);
  CHECK(text.find("token.fbeta\t") != std::string::npos);

  // render_kv prints six decimals
  CHECK(render_kv({{"k", 0.5}}) == "k\t0.500000\n");
  CHECK(render_kv({{"n", 2.0}}) == "n\t2.000000\n");

  CHECK(code_of([&] {
          evaluate_corpus(pair_gold(), pair_pred(), eval_config{0.0, true});
        }) == errc::invalid_argument);
}

TEST_CASE("diff_report classifies each prediction and ties out to metrics") {
  using l = label;
  corpus g;
  g.name = "g";
  g.sentences = {
      sent("s1", "aa bb cc dd", {l::b_per, l::outside, l::b_loc, l::outside},
           split::test),
      sent("s2", "ee ff", {l::b_per, l::outside}, split::test),
  };
  corpus p = g;
  p.name = "p";
  // s1: LOC over the PER span (type), LOC overlapping gold LOC (boundary)
  p.sentences[0].tags = {l::b_loc, l::outside, l::b_loc, l::i_loc};
  // s2: exact PER (ok) plus an unrelated LOC (spurious)
  p.sentences[1].tags = {l::b_per, l::b_loc};

  const auto d = diff_report(g, p);
  CHECK(d.ok == 1);
  CHECK(d.boundary == 1);
  CHECK(d.type_error == 1);
  CHECK(d.spurious == 1);
  CHECK(d.miss == 1);
  CHECK(d.text.rfind("entity diff: ok=1 boundary=1 type=1 spurious=1 miss=1",
                     0) == 0);
  CHECK(d.text.find("s1") != std::string::npos);
  CHECK(d.text.find("[LOC cc dd]") != std::string::npos);

  // documented identities against the entity metrics
  const auto st = entity_metrics(g, p, match_regime::strict);
  const auto fz = entity_metrics(g, p, match_regime::fuzzy);
  CHECK(d.ok + d.boundary + d.type_error + d.spurious == st.counts.predicted);
  CHECK(d.boundary + d.type_error + d.spurious ==
        st.counts.predicted - st.counts.matched);
  CHECK(d.type_error + d.spurious == fz.counts.predicted - fz.counts.matched);
  CHECK(d.miss == fz.counts.gold_top - fz.counts.matched_top);

  // a clean pair reports once and carries no per-sentence blocks
  const auto clean = diff_report(g, g);
  CHECK(clean.ok == 3);
  CHECK(clean.miss == 0);
  CHECK(clean.text ==
        "entity diff: ok=3 boundary=0 type=0 spurious=0 miss=0\n");
}

namespace {

candidate hit(const std::string& doc_id, std::uint32_t s, std::uint32_t e) {
  candidate c;
  c.doc_id = doc_id;
  c.char_start = s;
  c.char_end = e;
  c.matched_text = "t";
  return c;
}

}  // namespace

TEST_CASE("judgment files load with strict validation") {
  const auto dir = testutil::scratch_dir("judge");
  const auto path = testutil::write_file(dir / "j.tsv",
                                         "# comment\n"
                                         "e1\td1\t0\t5\t1\n"
                                         "e1\td1\t10\t15\t0\n"
                                         "e2\td2\t3\t8\t1\n"
                                         "e3\td3\t0\t4\t1\n");
  const auto j = relevance_judgments::load(path);
  CHECK(j.records.size() == 4);
  CHECK(j.total_relevant == 3);
  REQUIRE(j.find("e1", "d1", 0, 5) != nullptr);
  CHECK(*j.find("e1", "d1", 0, 5));
  CHECK_FALSE(*j.find("e1", "d1", 10, 15));
  CHECK(j.find("e1", "d1", 0, 6) == nullptr);
  CHECK(relevance_judgments::key("a", "b", 1, 2) == "a\tb\t1\t2");

  CHECK(code_of([&] {
          relevance_judgments::load(testutil::write_file(
              dir / "dup.tsv", "e1\td1\t0\t5\t1\ne1\td1\t0\t5\t0\n"));
        }) == errc::parse);
  CHECK(code_of([&] {
          relevance_judgments::load(
              testutil::write_file(dir / "flag.tsv", "e1\td1\t0\t5\t2\n"));
        }) == errc::parse);
  CHECK(code_of([&] {
          relevance_judgments::load(
              testutil::write_file(dir / "short.tsv", "e1\td1\t0\t5\n"));
        }) == errc::parse);
  CHECK(code_of([&] {
          relevance_judgments::load(
              testutil::write_file(dir / "num.tsv", "e1\td1\tx\t5\t1\n"));
        }) == errc::parse);
}

TEST_CASE("evaluate_retrieval scores micro P/R at depth and warns once") {
  const auto dir = testutil::scratch_dir("evret");
  const auto j = relevance_judgments::load(
      testutil::write_file(dir / "j.tsv",
                           "e1\td1\t0\t5\t1\n"
                           "e1\td1\t10\t15\t0\n"
                           "e2\td2\t3\t8\t1\n"
                           "e3\td3\t0\t4\t1\n"));

  method_results a;
  a.name = "alpha";
  a.per_entity = {
      {"e1", {hit("d1", 0, 5), hit("d1", 10, 15), hit("d2", 99, 100)}},
      {"e2", {hit("d2", 3, 8)}},
  };
  method_results b;
  b.name = "beta";
  b.per_entity = {{"e1", {hit("d1", 10, 15)}}};

  const auto cmp = evaluate_retrieval({b, a}, j, 10, 0.25);
  REQUIRE(cmp.rows.size() == 2);
  // sorted by f descending: alpha scores, beta does not
  CHECK(cmp.rows[0].name == "alpha");
  CHECK(cmp.rows[0].retrieved == 4);
  CHECK(cmp.rows[0].relevant_retrieved == 2);
  CHECK(cmp.rows[0].precision == 0.5);
  CHECK(cmp.rows[0].recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(cmp.rows[0].f ==
        fbeta(cmp.rows[0].precision, cmp.rows[0].recall, 0.25));
  CHECK(cmp.rows[1].name == "beta");
  CHECK(cmp.rows[1].retrieved == 1);
  CHECK(cmp.rows[1].relevant_retrieved == 0);
  CHECK(cmp.rows[1].f == 0.0);
  REQUIRE(cmp.warnings.size() == 1);
  CHECK(cmp.warnings[0] == "unjudged: alpha e1 d2 [99,100)");
  CHECK(cmp.table.rfind("method", 0) == 0);
  CHECK(cmp.table.find("F(0.25)") != std::string::npos);
  CHECK(cmp.table.find("alpha") != std::string::npos);

  // depth truncates per entity before anything is counted
  const auto shallow = evaluate_retrieval({a}, j, 2, 0.25);
  CHECK(shallow.rows[0].retrieved == 3);
  CHECK(shallow.rows[0].relevant_retrieved == 2);
  CHECK(shallow.warnings.empty());

  // ties on f fall back to the name ordering
  const auto tied = evaluate_retrieval({b, b}, j, 10, 0.25);
  CHECK(tied.rows[0].name == "beta");
  CHECK(tied.rows[1].name == "beta");
}

TEST_CASE("run_ablation trains the three variants against the test split") {
  using l = label;
  corpus small = separable_corpus();
  small.sentences.push_back(sent("te0", "karel svoboda mluvi",
                                 {l::b_per, l::i_per, l::outside},
                                 split::test));
  small.sentences.push_back(sent("te1", "brno lezi blizko",
                                 {l::b_loc, l::outside, l::outside},
                                 split::test));
  const auto dir = testutil::scratch_dir("ablate");
  const auto col = testutil::make_collection(
      dir, {{"da", "cs", "Karel novak pracuje. Praha lezi blizko."},
            {"db", "cs", "Jan svoboda mluvi."}});

  ablation_config cfg;
  cfg.features.hash_dim = 256;
  cfg.features.ngram_lo = 2;
  cfg.features.ngram_hi = 3;
  cfg.features.context = 1;
  cfg.train.epochs = 3;
  cfg.train.patience = 5;
  cfg.train.learning_rate = 0.5;

  const auto res = run_ablation(small, col, cfg);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].variant == "small");
  CHECK(res.rows[1].variant == "medium");
  CHECK(res.rows[2].variant == "large");
  for (const auto& row : res.rows) {
    CHECK(row.f_weighted >= 0.0);
    CHECK(row.f_weighted <= 1.0);
    CHECK(row.f_unweighted >= 0.0);
    CHECK(row.f_unweighted <= 1.0);
  }
  CHECK(res.values.size() == 6);
  CHECK(res.values[0].first == "ablate.small.wce");
  CHECK(res.values[5].first == "ablate.large.ce");
  CHECK(res.table.rfind("corpus", 0) == 0);
  CHECK(res.table.find("WCE-F(0.25)") != std::string::npos);
  CHECK(res.table.find("large") != std::string::npos);

  // an input without test sentences cannot be scored
  CHECK(code_of([&] { run_ablation(separable_corpus(), col, cfg); }) ==
        errc::empty_split);
}
