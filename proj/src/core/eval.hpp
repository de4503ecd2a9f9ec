#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core/bio.hpp"
#include "core/retrieval.hpp"
#include "core/types.hpp"

namespace nerkit {

/// (1+b^2)*p*r / (b^2*p + r), defined as 0 when p = r = 0.
double fbeta(double p, double r, double beta);

struct eval_config {
  double beta = 0.25;
  bool per_language = true;
};

enum class match_regime { strict, fuzzy };

struct token_counts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

struct token_result {
  token_counts counts;
  double precision = 0.0, recall = 0.0, f = 0.0;
};

struct entity_counts {
  std::uint64_t matched = 0;      // predicted mentions matched to gold
  std::uint64_t predicted = 0;    // all predicted mentions
  std::uint64_t matched_top = 0;  // top-level gold matched (self or nested)
  std::uint64_t gold_top = 0;     // top-level gold mentions
};

struct entity_result {
  entity_counts counts;
  double precision = 0.0, recall = 0.0;
};

/// Micro token P/R/F over non-O classes: TP gold = pred != O; FP pred != O
/// and wrong; FN gold != O and wrong.  Corpora must align (same sentence ids
/// in order, same token counts) or AlignmentError is raised.
token_result token_metrics(const corpus& gold, const corpus& pred,
                           double beta);
std::map<std::string, token_result> token_metrics_by_language(
    const corpus& gold, const corpus& pred, double beta);

/// Entity P/R with the nested-gold allowance: predictions may match any
/// top-level or nested gold mention, each at most once, exact spans claimed
/// before overlaps, predictions processed left to right.  Strict requires
/// identical type+span; fuzzy identical type plus span overlap.  Recall
/// counts a top-level mention as found when it or any of its nested mentions
/// is matched.  Gold mentions come from gold_entities when present, else
/// from the sentence's own tags.
entity_result entity_metrics(const corpus& gold, const corpus& pred,
                             match_regime regime);
std::map<std::string, entity_result> entity_metrics_by_language(
    const corpus& gold, const corpus& pred, match_regime regime);

struct confusion_matrix {
  // rows = gold label id, columns = predicted label id
  std::array<std::array<std::uint64_t, label_count>, label_count> counts{};
  std::array<std::array<double, label_count>, label_count> rows{};
  std::array<bool, label_count> supported{};
};

confusion_matrix confusion(const corpus& gold, const corpus& pred);

/// Tab-separated row-normalized grid with label headers, for external
/// plotting.
std::string confusion_grid(const confusion_matrix& m);

struct eval_report {
  std::vector<std::pair<std::string, double>> values;  // ordered key/value
  std::string table;  // overall + per-language text table
  std::string confusion_tsv;
};

/// The full scorecard: token and entity metrics overall and per language,
/// plus the confusion matrix.  values carries every metric and its raw
/// counts under dotted keys (token.*, entity.strict.*, entity.fuzzy.*,
/// lang.<code>.*).
eval_report evaluate_corpus(const corpus& gold, const corpus& pred,
                            const eval_config& cfg);

/// `<key>\t<value>` lines, values printed with six decimals.
std::string render_kv(
    const std::vector<std::pair<std::string, double>>& values);

/// Aligned text table; first row is the header, first column left-aligned,
/// the rest right-aligned.
std::string format_table(const std::vector<std::vector<std::string>>& rows);

/// One body: table, blank line, key/values, blank line, confusion grid.
std::string render_eval_report(const eval_report& r);

/// Per-split sentence / B-PER / B-LOC counts as an aligned text table.
std::string render_stats(const corpus_statistics& st,
                         const std::string& corpus_name);
std::vector<std::pair<std::string, double>> stats_values(
    const corpus_statistics& st);

struct diff_result {
  std::uint64_t ok = 0;        // exact type+span matches
  std::uint64_t boundary = 0;  // right type, overlapping span only
  std::uint64_t type_error = 0;  // span overlaps gold of another type
  std::uint64_t spurious = 0;  // no usable gold counterpart
  std::uint64_t miss = 0;      // top-level gold left unmatched
  std::string text;            // side-by-side sentences with flags
};

/// Gold and predicted mentions side by side per sentence, each prediction
/// classified.  ok+boundary+type+spurious = predicted mentions; boundary+
/// type+spurious equals the strict false positives, type+spurious the fuzzy
/// ones, miss the fuzzy top-level misses.
diff_result diff_report(const corpus& gold, const corpus& pred);

struct relevance_judgments {
  // key: entity_id \t doc_id \t char_start \t char_end
  std::unordered_map<std::string, bool> records;
  std::uint64_t total_relevant = 0;

  /// TSV `entity_id\tdoc_id\tchar_start\tchar_end\trelevant(0|1)`; blank and
  /// '#' lines skipped; duplicate keys rejected.
  static relevance_judgments load(const std::string& path);

  static std::string key(const std::string& entity_id,
                         const std::string& doc_id, std::uint32_t char_start,
                         std::uint32_t char_end);
  /// nullptr when the result was never judged.
  const bool* find(const std::string& entity_id, const std::string& doc_id,
                   std::uint32_t char_start, std::uint32_t char_end) const;
};

struct method_results {
  std::string name;
  // (entity_id, ranked candidates) per queried entity
  std::vector<std::pair<std::string, std::vector<candidate>>> per_entity;
};

struct method_row {
  std::string name;
  std::uint64_t retrieved = 0;
  std::uint64_t relevant_retrieved = 0;
  double precision = 0.0, recall = 0.0, f = 0.0;
};

struct retrieval_comparison {
  std::vector<method_row> rows;  // sorted by f desc, then name
  std::vector<std::string> warnings;  // unjudged results, left non-relevant
  std::string table;
};

/// Micro P/R/F per method over the top `depth` results per entity.
/// P = relevant retrieved / retrieved; R = relevant retrieved / total
/// relevant judgments.  Unjudged results count as retrieved non-relevant
/// and are listed in warnings.
retrieval_comparison evaluate_retrieval(
    const std::vector<method_results>& results,
    const relevance_judgments& judgments, std::size_t depth = 10,
    double beta = 0.25);

}  // namespace nerkit
