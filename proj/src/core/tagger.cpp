#include "core/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/binio.hpp"
#include "core/bio.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/hash.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/utf8.hpp"

namespace nerkit {

namespace {

std::array<std::uint64_t, label_count> tag_counts(const corpus& c) {
  std::array<std::uint64_t, label_count> counts{};
  for (const auto& s : c.sentences) {
    if (s.part != split::train) continue;
    for (label t : s.tags) counts[static_cast<int>(t)]++;
  }
  return counts;
}

class_weight_vector weights_from_counts(
    const std::array<std::uint64_t, label_count>& counts) {
  class_weight_vector inv{};
  double sum = 0.0;
  for (int i = 0; i < label_count; ++i) {
    inv[i] = 1.0 / static_cast<double>(counts[i]);
    sum += inv[i];
  }
  const double mean = sum / label_count;
  class_weight_vector w{};
  for (int i = 0; i < label_count; ++i) w[i] = inv[i] / mean;
  return w;
}

}  // namespace

class_weight_vector class_weights(const corpus& c) {
  auto counts = tag_counts(c);
  for (int i = 0; i < label_count; ++i)
    if (counts[i] == 0)
      raise(errc::missing_class, std::string("no training occurrence of ") +
                                     label_name(static_cast<label>(i)));
  return weights_from_counts(counts);
}

class_weight_vector class_weights_smoothed(const corpus& c) {
  auto counts = tag_counts(c);
  for (auto& n : counts) n += 1;
  return weights_from_counts(counts);
}

std::vector<std::uint32_t> token_features(const std::vector<token>& tokens,
                                          std::size_t i,
                                          const feature_config& cfg) {
  std::vector<std::uint32_t> out;
  std::string buf;
  auto add = [&]() {
    out.push_back(static_cast<std::uint32_t>(fnv1a64(buf) % cfg.hash_dim));
  };

  const auto n = static_cast<long>(tokens.size());
  for (long off = -static_cast<long>(cfg.context);
       off <= static_cast<long>(cfg.context); ++off) {
    buf = "w";
    buf += std::to_string(off);
    buf += '=';
    const long j = static_cast<long>(i) + off;
    if (j < 0)
      buf += "<s>";
    else if (j >= n)
      buf += "</s>";
    else
      buf += utf8::fold_utf8(tokens[j].text);
    add();
  }

  const std::u32string raw = utf8::decode(tokens[i].text);
  const std::u32string folded = utf8::fold(raw);
  for (std::uint32_t g = cfg.ngram_lo; g <= cfg.ngram_hi; ++g) {
    if (folded.size() < g) break;
    for (std::size_t p = 0; p + g <= folded.size(); ++p) {
      buf = "g";
      buf += std::to_string(g);
      buf += '=';
      buf += utf8::encode(std::u32string_view(folded).substr(p, g));
      add();
    }
  }

  if (cfg.shape && !raw.empty()) {
    if (utf8::is_upper(raw[0])) {
      buf = "sh=iu";
      add();
    }
    if (std::all_of(raw.begin(), raw.end(), [](char32_t ch) {
          return utf8::is_letter(ch) && utf8::is_upper(ch);
        })) {
      buf = "sh=au";
      add();
    }
    if (std::any_of(raw.begin(), raw.end(), utf8::is_digit)) {
      buf = "sh=hd";
      add();
    }
    if (std::all_of(raw.begin(), raw.end(), utf8::is_digit)) {
      buf = "sh=ad";
      add();
    }
    if (std::none_of(raw.begin(), raw.end(), utf8::is_alnum)) {
      buf = "sh=pu";
      add();
    }
    buf = "sh=l";
    buf += std::to_string(std::min<std::size_t>(raw.size(), 8));
    add();
  }
  return out;
}

std::array<double, label_count> score_features(
    const std::vector<double>& w, std::uint32_t hash_dim,
    const std::vector<std::uint32_t>& features) {
  std::array<double, label_count> scores;
  const double* bias = &w[static_cast<std::size_t>(hash_dim) * label_count];
  for (int cl = 0; cl < label_count; ++cl) scores[cl] = bias[cl];
  for (std::uint32_t f : features) {
    const double* row = &w[static_cast<std::size_t>(f) * label_count];
    for (int cl = 0; cl < label_count; ++cl) scores[cl] += row[cl];
  }
  return scores;
}

namespace {

double log_sum_exp(const std::array<double, label_count>& s) {
  const double m = *std::max_element(s.begin(), s.end());
  double acc = 0.0;
  for (double v : s) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace

double token_loss(const std::array<double, label_count>& scores, label gold,
                  const class_weight_vector& cw) {
  const int g = static_cast<int>(gold);
  return -cw[g] * (scores[g] - log_sum_exp(scores));
}

std::array<double, label_count> token_score_gradient(
    const std::array<double, label_count>& scores, label gold,
    const class_weight_vector& cw) {
  const int g = static_cast<int>(gold);
  const double lse = log_sum_exp(scores);
  std::array<double, label_count> grad;
  for (int cl = 0; cl < label_count; ++cl) {
    const double p = std::exp(scores[cl] - lse);
    grad[cl] = cw[g] * (p - (cl == g ? 1.0 : 0.0));
  }
  return grad;
}

namespace {

label argmax_label(const std::array<double, label_count>& scores) {
  int best = 0;
  for (int cl = 1; cl < label_count; ++cl)
    if (scores[cl] > scores[best]) best = cl;
  return static_cast<label>(best);
}

void repair_tags(std::vector<label>& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_inside(tags[i])) continue;
    const entity_type ty = type_of(tags[i]);
    const bool continues =
        i > 0 && tags[i - 1] != label::outside && type_of(tags[i - 1]) == ty;
    if (!continues) tags[i] = begin_of(ty);
  }
}

double validation_fbeta(const tagger_model& m, const corpus& c, double beta) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& s : c.sentences) {
    if (s.part != split::validation) continue;
    const auto pred = predict(m, s.tokens);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const label g = s.tags[i], p = pred[i];
      if (p == g && g != label::outside) tp++;
      if (p != label::outside && p != g) fp++;
      if (g != label::outside && p != g) fn++;
    }
  }
  const double prec = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
  const double rec = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return fbeta(prec, rec, beta);
}

}  // namespace

tagger_model train(const corpus& c, const feature_config& fcfg,
                   const train_config& tcfg, train_report* report) {
  if (fcfg.hash_dim < 2)
    raise(errc::invalid_argument, "hash_dim must be at least 2");
  if (fcfg.ngram_lo > fcfg.ngram_hi)
    raise(errc::invalid_argument, "empty char n-gram range");
  if (!(tcfg.learning_rate > 0))
    raise(errc::invalid_argument, "learning rate must be positive");
  if (tcfg.epochs < 1) raise(errc::invalid_argument, "need at least one epoch");

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    if (c.sentences[i].part == split::train) train_idx.push_back(i);
    if (c.sentences[i].part == split::validation) val_idx.push_back(i);
  }
  if (train_idx.empty()) raise(errc::empty_split, "train split is empty");
  if (val_idx.empty()) raise(errc::empty_split, "validation split is empty");

  class_weight_vector cw = unit_class_weights();
  if (tcfg.weighted) {
    if (tcfg.smooth_fallback) {
      try {
        cw = class_weights(c);
      } catch (const error& e) {
        if (e.code() != errc::missing_class) throw;
        cw = class_weights_smoothed(c);
      }
    } else {
      cw = class_weights(c);
    }
  }

  tagger_model m;
  m.features = fcfg;
  m.train_weights = cw;
  m.seed = tcfg.seed;
  m.corpus_name = c.name;
  m.w.assign((static_cast<std::size_t>(fcfg.hash_dim) + 1) * label_count, 0.0);

  splitmix64 rng(tcfg.seed);
  std::vector<double> best_w = m.w;
  double best_f = -1.0;
  std::uint32_t best_epoch = 0, stale = 0, ran = 0;
  if (report) *report = train_report{};

  for (std::uint32_t epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    ran = epoch;
    std::vector<std::size_t> order = train_idx;
    seeded_shuffle(order, rng);

    double total_loss = 0.0;
    std::uint64_t n_tokens = 0;
    double* bias =
        &m.w[static_cast<std::size_t>(fcfg.hash_dim) * label_count];
    for (std::size_t si : order) {
      const auto& s = c.sentences[si];
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const auto feats = token_features(s.tokens, i, fcfg);
        const auto scores = score_features(m.w, fcfg.hash_dim, feats);
        total_loss += token_loss(scores, s.tags[i], cw);
        n_tokens++;
        const auto grad = token_score_gradient(scores, s.tags[i], cw);
        for (int cl = 0; cl < label_count; ++cl)
          bias[cl] -= tcfg.learning_rate * grad[cl];
        for (std::uint32_t f : feats) {
          double* row = &m.w[static_cast<std::size_t>(f) * label_count];
          for (int cl = 0; cl < label_count; ++cl)
            row[cl] -= tcfg.learning_rate * grad[cl];
        }
      }
    }

    epoch_record rec;
    rec.avg_loss = n_tokens ? total_loss / static_cast<double>(n_tokens) : 0.0;
    rec.val_fbeta = validation_fbeta(m, c, tcfg.beta);
    if (report) report->epochs.push_back(rec);

    if (rec.val_fbeta > best_f) {
      best_f = rec.val_fbeta;
      best_epoch = epoch;
      best_w = m.w;
      stale = 0;
    } else if (++stale >= tcfg.patience) {
      break;
    }
  }

  m.w = std::move(best_w);
  m.epochs_trained = ran;
  if (report) {
    report->best_epoch = best_epoch;
    report->best_val_fbeta = best_f;
  }
  return m;
}

std::vector<label> predict(const tagger_model& model,
                           const std::vector<token>& tokens) {
  std::vector<label> tags;
  tags.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto feats = token_features(tokens, i, model.features);
    tags.push_back(
        argmax_label(score_features(model.w, model.features.hash_dim, feats)));
  }
  repair_tags(tags);
  return tags;
}

corpus annotate_corpus(const tagger_model& model, const corpus& c) {
  corpus out = c;
  for (auto& s : out.sentences) {
    s.tags = predict(model, s.tokens);
    s.gold.clear();
  }
  return out;
}

corpus augment_corpus(const corpus& c, const tagger_model& model) {
  corpus out = c;
  for (auto& s : out.sentences) {
    auto mentions = parse_bio(s.tags, s.tokens);
    std::vector<bool> claimed(s.tokens.size(), false);
    for (const auto& m : mentions) {
      const auto [first, last] =
          token_range(s.tokens, {m.char_start, m.char_end});
      for (std::uint32_t t = first; t < last; ++t) claimed[t] = true;
    }
    const auto pred = parse_bio(predict(model, s.tokens), s.tokens);
    for (const auto& m : pred) {
      const auto [first, last] =
          token_range(s.tokens, {m.char_start, m.char_end});
      bool free = true;
      for (std::uint32_t t = first; t < last; ++t)
        if (claimed[t]) free = false;
      if (!free) continue;
      for (std::uint32_t t = first; t < last; ++t) claimed[t] = true;
      mentions.push_back(m);
    }
    std::sort(mentions.begin(), mentions.end(),
              [](const entity_mention& a, const entity_mention& b) {
                return a.char_start < b.char_start;
              });
    s.tags = project_bio(s.tokens, mentions);
  }
  return out;
}

corpus annotate_collection(const tagger_model& model,
                           const document_collection& col, std::size_t jobs) {
  std::vector<std::vector<annotated_sentence>> per_doc(col.docs.size());
  parallel_for(col.docs.size(), jobs, [&](std::size_t di) {
    const document& doc = col.docs[di];
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      const span sent = doc.sentences[si];
      annotated_sentence s;
      s.sentence_id = doc.doc_id + "#" + std::to_string(si);
      s.doc_id = doc.doc_id;
      s.language = doc.language;
      s.part = split::unassigned;
      s.text = utf8::encode(std::u32string_view(doc.chars)
                                .substr(sent.start, sent.end - sent.start));
      for (std::uint32_t t = doc.sentence_token_begin[si];
           t < doc.sentence_token_begin[si + 1]; ++t) {
        token tok = doc.tokens[t];
        tok.char_start -= sent.start;
        tok.char_end -= sent.start;
        s.tokens.push_back(std::move(tok));
      }
      s.tags = predict(model, s.tokens);
      per_doc[di].push_back(std::move(s));
    }
  });
  corpus out;
  out.name = "annotated";
  for (auto& bucket : per_doc)
    for (auto& s : bucket) out.sentences.push_back(std::move(s));
  validate_corpus(out);
  return out;
}

std::string render_train_report(const tagger_model& model,
                                const train_report& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "trained on %s: hash_dim=%u ngram=%u..%u context=%u shape=%d "
                "seed=%llu\n",
                model.corpus_name.c_str(), model.features.hash_dim,
                model.features.ngram_lo, model.features.ngram_hi,
                model.features.context, model.features.shape ? 1 : 0,
                static_cast<unsigned long long>(model.seed));
  out += buf;
  out += "class_weights";
  for (int cl = 0; cl < label_count; ++cl) {
    std::snprintf(buf, sizeof buf, " %s=%.6f",
                  label_name(static_cast<label>(cl)),
                  model.train_weights[cl]);
    out += buf;
  }
  out += '\n';
  for (std::size_t e = 0; e < report.epochs.size(); ++e) {
    std::snprintf(buf, sizeof buf, "epoch %zu avg_loss=%.6f val_fbeta=%.6f\n",
                  e + 1, report.epochs[e].avg_loss,
                  report.epochs[e].val_fbeta);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "best_epoch %u val_fbeta=%.6f\n",
                report.best_epoch, report.best_val_fbeta);
  out += buf;
  return out;
}

void save_model(const tagger_model& model, const std::string& path) {
  bin_writer w(path);
  w.magic("NKMD");
  w.u32(1);
  w.u32(model.features.hash_dim);
  w.u32(model.features.ngram_lo);
  w.u32(model.features.ngram_hi);
  w.u32(model.features.context);
  w.u8(model.features.shape ? 1 : 0);
  for (double v : model.train_weights) w.f64(v);
  w.u32(model.epochs_trained);
  w.u64(model.seed);
  w.str(model.corpus_name);
  w.u64(model.w.size());
  for (double v : model.w) w.f64(v);
  w.finish(path);
}

tagger_model load_model(const std::string& path) {
  bin_reader r(path);
  r.expect_magic("NKMD");
  if (r.u32() != 1) raise(errc::parse, path + ": unsupported model version");
  tagger_model m;
  m.features.hash_dim = r.u32();
  m.features.ngram_lo = r.u32();
  m.features.ngram_hi = r.u32();
  m.features.context = r.u32();
  m.features.shape = r.u8() != 0;
  if (m.features.hash_dim < 2) raise(errc::parse, path + ": bad hash_dim");
  for (auto& v : m.train_weights) v = r.f64();
  m.epochs_trained = r.u32();
  m.seed = r.u64();
  m.corpus_name = r.str();
  const std::uint64_t n = r.u64();
  const std::uint64_t expect =
      (static_cast<std::uint64_t>(m.features.hash_dim) + 1) * label_count;
  if (n != expect) raise(errc::parse, path + ": weight count mismatch");
  m.w.resize(n);
  for (auto& v : m.w) {
    v = r.f64();
    if (!std::isfinite(v)) raise(errc::parse, path + ": non-finite weight");
  }
  return m;
}

}  // namespace nerkit
