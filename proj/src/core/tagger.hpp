#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/collection.hpp"
#include "core/types.hpp"

namespace nerkit {

struct feature_config {
  std::uint32_t hash_dim = 1u << 18;  // hashed buckets (bias row is extra)
  std::uint32_t ngram_lo = 2;         // char n-gram sizes of the focus token
  std::uint32_t ngram_hi = 4;
  std::uint32_t context = 2;          // word-identity window, tokens each side
  bool shape = true;                  // capitalization/digit/punct/length
};

/// Per-label loss weights.  `class_weights` computes mean-normalized inverse
/// frequencies over the train split and raises MissingClass when a label
/// never occurs; the smoothed variant adds one to every count first and is
/// the usual fallback.
using class_weight_vector = std::array<double, label_count>;

class_weight_vector class_weights(const corpus& c);
class_weight_vector class_weights_smoothed(const corpus& c);
inline class_weight_vector unit_class_weights() {
  return {1.0, 1.0, 1.0, 1.0, 1.0};
}

struct tagger_model {
  feature_config features;
  class_weight_vector train_weights = unit_class_weights();
  std::vector<double> w;  // (hash_dim + 1) rows * 5 classes, row-major
  std::uint32_t epochs_trained = 0;
  std::uint64_t seed = 0;
  std::string corpus_name;
};

struct train_config {
  double learning_rate = 0.1;
  std::uint32_t epochs = 20;
  std::uint32_t patience = 3;  // epochs without validation gain before stop
  std::uint64_t seed = 1;
  bool weighted = true;        // inverse-frequency loss weights vs all-ones
  bool smooth_fallback = true; // Laplace counts when a class is missing
  double beta = 0.25;          // validation token F_beta
};

struct epoch_record {
  double avg_loss = 0.0;  // mean per-token training loss
  double val_fbeta = 0.0;
};

struct train_report {
  std::vector<epoch_record> epochs;
  std::uint32_t best_epoch = 0;  // 1-based; 0 when nothing trained
  double best_val_fbeta = 0.0;
};

/// Bucket ids of every feature of token `i`, bias row excluded.  A bucket
/// appears once per feature occurrence, so collisions simply add up.
std::vector<std::uint32_t> token_features(const std::vector<token>& tokens,
                                          std::size_t i,
                                          const feature_config& cfg);

/// Raw class scores: bias row plus the rows of the given buckets.
std::array<double, label_count> score_features(
    const std::vector<double>& w, std::uint32_t hash_dim,
    const std::vector<std::uint32_t>& features);

/// Weighted cross-entropy of one token: -cw[gold] * log softmax(scores)[gold].
double token_loss(const std::array<double, label_count>& scores, label gold,
                  const class_weight_vector& cw);

/// dLoss/dscores for the same token — cw[gold] * (softmax - onehot(gold)).
std::array<double, label_count> token_score_gradient(
    const std::array<double, label_count>& scores, label gold,
    const class_weight_vector& cw);

/// Seeded SGD over shuffled train-split tokens; keeps the weights of the
/// epoch with the best validation token F_beta.  Deterministic given the
/// config.  Raises EmptySplit when train or validation has no sentences.
tagger_model train(const corpus& c, const feature_config& fcfg,
                   const train_config& tcfg, train_report* report = nullptr);

/// Per-token argmax (ties to the lowest label id), then I->B repair so the
/// output is always BIO-valid.
std::vector<label> predict(const tagger_model& model,
                           const std::vector<token>& tokens);

/// Re-tag every sentence with the model's predictions; ids, text, tokens and
/// split assignment carry over, gold annotations are dropped (they describe
/// the input tags, not these).
corpus annotate_corpus(const tagger_model& model, const corpus& c);

/// Predictions merged into existing tags: existing mentions always survive,
/// predicted mentions that share a token with any existing mention are
/// dropped, the rest are added.
corpus augment_corpus(const corpus& c, const tagger_model& model);

/// Tag every sentence of every document (parallel across documents, output
/// order fixed).  Sentence ids are `<doc_id>#<index>`, splits unassigned.
corpus annotate_collection(const tagger_model& model,
                           const document_collection& col,
                           std::size_t jobs = 1);

void save_model(const tagger_model& model, const std::string& path);
tagger_model load_model(const std::string& path);

/// Text summary of a finished run: config echo, per-epoch loss and
/// validation score, retained epoch.
std::string render_train_report(const tagger_model& model,
                                const train_report& report);

}  // namespace nerkit
