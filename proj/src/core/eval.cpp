#include "core/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/utf8.hpp"

namespace nerkit {

double fbeta(double p, double r, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

namespace {

void check_aligned(const corpus& gold, const corpus& pred) {
  if (gold.sentences.size() != pred.sentences.size())
    raise(errc::alignment,
          "sentence counts differ: " + std::to_string(gold.sentences.size()) +
              " vs " + std::to_string(pred.sentences.size()));
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = pred.sentences[i];
    if (g.sentence_id != p.sentence_id)
      raise(errc::alignment, "sentence ids differ at position " +
                                 std::to_string(i) + ": '" + g.sentence_id +
                                 "' vs '" + p.sentence_id + "'");
    if (g.tokens.size() != p.tokens.size())
      raise(errc::alignment,
            "token counts differ in sentence '" + g.sentence_id + "'");
  }
}

void derive_token(token_result& r, double beta) {
  const auto& c = r.counts;
  r.precision = c.tp + c.fp
                    ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)
                    : 0.0;
  r.recall = c.tp + c.fn
                 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                 : 0.0;
  r.f = fbeta(r.precision, r.recall, beta);
}

void count_tokens(const annotated_sentence& g, const annotated_sentence& p,
                  token_counts& c) {
  for (std::size_t i = 0; i < g.tags.size(); ++i) {
    const label gl = g.tags[i], pl = p.tags[i];
    if (pl == gl && gl != label::outside) c.tp++;
    if (pl != label::outside && pl != gl) c.fp++;
    if (gl != label::outside && pl != gl) c.fn++;
  }
}

struct gold_candidate {
  entity_type type = entity_type::per;
  std::uint32_t char_start = 0, char_end = 0;
  std::size_t top = 0;  // index of the top-level ancestor
};

void collect_nested(const entity_mention& m, std::size_t top,
                    std::vector<gold_candidate>& out) {
  for (const auto& n : m.nested) {
    out.push_back({n.type, n.char_start, n.char_end, top});
    collect_nested(n, top, out);
  }
}

std::vector<gold_candidate> gold_candidates(const annotated_sentence& s,
                                            std::size_t& top_count) {
  std::vector<gold_candidate> out;
  if (!s.gold.empty()) {
    top_count = s.gold.size();
    for (std::size_t i = 0; i < s.gold.size(); ++i) {
      const auto& m = s.gold[i];
      out.push_back({m.type, m.char_start, m.char_end, i});
      collect_nested(m, i, out);
    }
  } else {
    const auto flat = parse_bio(s.tags, s.tokens);
    top_count = flat.size();
    for (std::size_t i = 0; i < flat.size(); ++i)
      out.push_back({flat[i].type, flat[i].char_start, flat[i].char_end, i});
  }
  return out;
}

enum class pred_state { unmatched, exact, overlap };

struct sentence_match {
  std::vector<pred_state> preds;
  std::vector<bool> top_matched;
};

bool overlaps(std::uint32_t a0, std::uint32_t a1, std::uint32_t b0,
              std::uint32_t b1) {
  return a0 < b1 && b0 < a1;
}

/// Exact spans first, then (fuzzy only) same-type overlaps; predictions in
/// order, each gold candidate usable once.
sentence_match match_mentions(const std::vector<gold_candidate>& cands,
                              std::size_t top_count,
                              const std::vector<entity_mention>& preds,
                              bool fuzzy) {
  sentence_match out;
  out.preds.assign(preds.size(), pred_state::unmatched);
  out.top_matched.assign(top_count, false);
  std::vector<bool> used(cands.size(), false);

  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < cands.size(); ++j) {
      if (used[j] || cands[j].type != preds[i].type) continue;
      if (cands[j].char_start != preds[i].char_start ||
          cands[j].char_end != preds[i].char_end)
        continue;
      used[j] = true;
      out.preds[i] = pred_state::exact;
      out.top_matched[cands[j].top] = true;
      break;
    }
  }
  if (fuzzy) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (out.preds[i] != pred_state::unmatched) continue;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (used[j] || cands[j].type != preds[i].type) continue;
        if (!overlaps(cands[j].char_start, cands[j].char_end,
                      preds[i].char_start, preds[i].char_end))
          continue;
        used[j] = true;
        out.preds[i] = pred_state::overlap;
        out.top_matched[cands[j].top] = true;
        break;
      }
    }
  }
  return out;
}

void count_entities(const annotated_sentence& g, const annotated_sentence& p,
                    match_regime regime, entity_counts& c) {
  std::size_t top_count = 0;
  const auto cands = gold_candidates(g, top_count);
  const auto preds = parse_bio(p.tags, p.tokens);
  const auto m =
      match_mentions(cands, top_count, preds, regime == match_regime::fuzzy);
  c.predicted += preds.size();
  c.gold_top += top_count;
  for (pred_state st : m.preds)
    if (st != pred_state::unmatched) c.matched++;
  for (bool b : m.top_matched)
    if (b) c.matched_top++;
}

void derive_entity(entity_result& r) {
  const auto& c = r.counts;
  r.precision = c.predicted ? static_cast<double>(c.matched) /
                                  static_cast<double>(c.predicted)
                            : 0.0;
  r.recall = c.gold_top ? static_cast<double>(c.matched_top) /
                              static_cast<double>(c.gold_top)
                        : 0.0;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }

}  // namespace

token_result token_metrics(const corpus& gold, const corpus& pred,
                           double beta) {
  check_aligned(gold, pred);
  token_result r;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i)
    count_tokens(gold.sentences[i], pred.sentences[i], r.counts);
  derive_token(r, beta);
  return r;
}

std::map<std::string, token_result> token_metrics_by_language(
    const corpus& gold, const corpus& pred, double beta) {
  check_aligned(gold, pred);
  std::map<std::string, token_result> out;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i)
    count_tokens(gold.sentences[i], pred.sentences[i],
                 out[gold.sentences[i].language].counts);
  for (auto& [lang, r] : out) derive_token(r, beta);
  return out;
}

entity_result entity_metrics(const corpus& gold, const corpus& pred,
                             match_regime regime) {
  check_aligned(gold, pred);
  entity_result r;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i)
    count_entities(gold.sentences[i], pred.sentences[i], regime, r.counts);
  derive_entity(r);
  return r;
}

std::map<std::string, entity_result> entity_metrics_by_language(
    const corpus& gold, const corpus& pred, match_regime regime) {
  check_aligned(gold, pred);
  std::map<std::string, entity_result> out;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i)
    count_entities(gold.sentences[i], pred.sentences[i], regime,
                   out[gold.sentences[i].language].counts);
  for (auto& [lang, r] : out) derive_entity(r);
  return out;
}

confusion_matrix confusion(const corpus& gold, const corpus& pred) {
  check_aligned(gold, pred);
  confusion_matrix m;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = pred.sentences[i];
    for (std::size_t t = 0; t < g.tags.size(); ++t)
      m.counts[static_cast<int>(g.tags[t])][static_cast<int>(p.tags[t])]++;
  }
  for (int r = 0; r < label_count; ++r) {
    std::uint64_t total = 0;
    for (int c = 0; c < label_count; ++c) total += m.counts[r][c];
    m.supported[r] = total > 0;
    for (int c = 0; c < label_count; ++c)
      m.rows[r][c] = total ? static_cast<double>(m.counts[r][c]) /
                                 static_cast<double>(total)
                           : 0.0;
  }
  return m;
}

std::string confusion_grid(const confusion_matrix& m) {
  std::string out = "label";
  for (int c = 0; c < label_count; ++c) {
    out += '\t';
    out += label_name(static_cast<label>(c));
  }
  out += '\n';
  char buf[32];
  for (int r = 0; r < label_count; ++r) {
    out += label_name(static_cast<label>(r));
    for (int c = 0; c < label_count; ++c) {
      std::snprintf(buf, sizeof buf, "\t%.6f", m.rows[r][c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c >= width.size()) width.resize(c + 1, 0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      const std::size_t pad = width[c] - row[c].size();
      if (c == 0) {
        out += row[c];
        if (c + 1 < row.size()) out.append(pad, ' ');
      } else {
        out.append(pad, ' ');
        out += row[c];
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

void push_token_values(std::vector<std::pair<std::string, double>>& kv,
                       const std::string& prefix, const token_result& r) {
  kv.emplace_back(prefix + ".tp", static_cast<double>(r.counts.tp));
  kv.emplace_back(prefix + ".fp", static_cast<double>(r.counts.fp));
  kv.emplace_back(prefix + ".fn", static_cast<double>(r.counts.fn));
  kv.emplace_back(prefix + ".precision", r.precision);
  kv.emplace_back(prefix + ".recall", r.recall);
  kv.emplace_back(prefix + ".fbeta", r.f);
}

void push_entity_values(std::vector<std::pair<std::string, double>>& kv,
                        const std::string& prefix, const entity_result& r) {
  kv.emplace_back(prefix + ".matched", static_cast<double>(r.counts.matched));
  kv.emplace_back(prefix + ".predicted",
                  static_cast<double>(r.counts.predicted));
  kv.emplace_back(prefix + ".matched_top",
                  static_cast<double>(r.counts.matched_top));
  kv.emplace_back(prefix + ".gold_top",
                  static_cast<double>(r.counts.gold_top));
  kv.emplace_back(prefix + ".precision", r.precision);
  kv.emplace_back(prefix + ".recall", r.recall);
}

std::vector<std::string> scope_row(const std::string& scope,
                                   const token_result& t,
                                   const entity_result& st,
                                   const entity_result& fz) {
  return {scope,
          pct(t.precision),
          pct(t.recall),
          pct(t.f),
          pct(st.precision),
          pct(st.recall),
          pct(fz.precision),
          pct(fz.recall)};
}

}  // namespace

eval_report evaluate_corpus(const corpus& gold, const corpus& pred,
                            const eval_config& cfg) {
  if (!(cfg.beta > 0)) raise(errc::invalid_argument, "beta must be positive");
  const auto tok = token_metrics(gold, pred, cfg.beta);
  const auto ent_s = entity_metrics(gold, pred, match_regime::strict);
  const auto ent_f = entity_metrics(gold, pred, match_regime::fuzzy);
  const auto conf = confusion(gold, pred);

  eval_report rep;
  push_token_values(rep.values, "token", tok);
  push_entity_values(rep.values, "entity.strict", ent_s);
  push_entity_values(rep.values, "entity.fuzzy", ent_f);

  std::vector<std::vector<std::string>> table;
  table.push_back({"scope", "tok-P", "tok-R", "tok-F", "str-P", "str-R",
                   "fuz-P", "fuz-R"});
  table.push_back(scope_row("overall", tok, ent_s, ent_f));

  if (cfg.per_language) {
    const auto tok_l = token_metrics_by_language(gold, pred, cfg.beta);
    const auto s_l = entity_metrics_by_language(gold, pred,
                                                match_regime::strict);
    const auto f_l = entity_metrics_by_language(gold, pred,
                                                match_regime::fuzzy);
    for (const auto& [lang, t] : tok_l) {
      table.push_back(scope_row(lang, t, s_l.at(lang), f_l.at(lang)));
      push_token_values(rep.values, "lang." + lang + ".token", t);
      push_entity_values(rep.values, "lang." + lang + ".entity.strict",
                         s_l.at(lang));
      push_entity_values(rep.values, "lang." + lang + ".entity.fuzzy",
                         f_l.at(lang));
    }
  }
  rep.table = format_table(table);
  rep.confusion_tsv = confusion_grid(conf);
  return rep;
}

std::string render_kv(
    const std::vector<std::pair<std::string, double>>& values) {
  std::string out;
  char buf[64];
  for (const auto& [k, v] : values) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out += k;
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

std::string render_eval_report(const eval_report& r) {
  std::string out = r.table;
  out += '\n';
  out += render_kv(r.values);
  out += "\nconfusion (rows gold, columns predicted, row-normalized):\n";
  out += r.confusion_tsv;
  return out;
}

std::string render_stats(const corpus_statistics& st,
                         const std::string& corpus_name) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"split", "sentences", "B-PER", "B-LOC"});
  for (int s = 0; s < 4; ++s)
    table.push_back({split_name(static_cast<split>(s)),
                     num(st.by_split[s].sentences), num(st.by_split[s].b_per),
                     num(st.by_split[s].b_loc)});
  table.push_back({"total", num(st.total.sentences), num(st.total.b_per),
                   num(st.total.b_loc)});
  return "corpus: " + corpus_name + "\n" + format_table(table);
}

std::vector<std::pair<std::string, double>> stats_values(
    const corpus_statistics& st) {
  std::vector<std::pair<std::string, double>> kv;
  auto push = [&](const std::string& scope, const split_counts& c) {
    kv.emplace_back("stats." + scope + ".sentences",
                    static_cast<double>(c.sentences));
    kv.emplace_back("stats." + scope + ".b_per",
                    static_cast<double>(c.b_per));
    kv.emplace_back("stats." + scope + ".b_loc",
                    static_cast<double>(c.b_loc));
  };
  for (int s = 0; s < 4; ++s)
    push(split_name(static_cast<split>(s)), st.by_split[s]);
  push("total", st.total);
  return kv;
}

namespace {

std::string bracketed(const annotated_sentence& s,
                      const std::vector<entity_mention>& mentions) {
  const std::u32string chars = utf8::decode(s.text);
  std::string out;
  std::size_t pos = 0;
  for (const auto& m : mentions) {
    if (m.char_start < pos || m.char_end > chars.size()) continue;
    out += utf8::encode(
        std::u32string_view(chars).substr(pos, m.char_start - pos));
    out += '[';
    out += entity_type_name(m.type);
    out += ' ';
    out += utf8::encode(std::u32string_view(chars).substr(
        m.char_start, m.char_end - m.char_start));
    out += ']';
    pos = m.char_end;
  }
  out += utf8::encode(std::u32string_view(chars).substr(pos));
  return out;
}

std::vector<entity_mention> top_gold(const annotated_sentence& s) {
  if (!s.gold.empty()) {
    std::vector<entity_mention> out = s.gold;
    for (auto& m : out) m.nested.clear();
    return out;
  }
  return parse_bio(s.tags, s.tokens);
}

}  // namespace

diff_result diff_report(const corpus& gold, const corpus& pred) {
  check_aligned(gold, pred);
  diff_result out;
  std::string body;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = pred.sentences[i];
    std::size_t top_count = 0;
    const auto cands = gold_candidates(g, top_count);
    const auto preds = parse_bio(p.tags, p.tokens);
    const auto m = match_mentions(cands, top_count, preds, true);

    std::uint64_t ok = 0, boundary = 0, type_err = 0, spurious = 0, miss = 0;
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
      switch (m.preds[pi]) {
        case pred_state::exact:
          ok++;
          break;
        case pred_state::overlap:
          boundary++;
          break;
        case pred_state::unmatched: {
          bool near_other_type = false;
          for (const auto& c : cands)
            if (c.type != preds[pi].type &&
                overlaps(c.char_start, c.char_end, preds[pi].char_start,
                         preds[pi].char_end))
              near_other_type = true;
          if (near_other_type)
            type_err++;
          else
            spurious++;
          break;
        }
      }
    }
    for (bool b : m.top_matched)
      if (!b) miss++;

    out.ok += ok;
    out.boundary += boundary;
    out.type_error += type_err;
    out.spurious += spurious;
    out.miss += miss;
    if (boundary + type_err + spurious + miss == 0) continue;

    body += g.sentence_id;
    body += "\n  gold: ";
    body += bracketed(g, top_gold(g));
    body += "\n  pred: ";
    body += bracketed(p, preds);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "\n  flags: ok=%llu boundary=%llu type=%llu spurious=%llu "
                  "miss=%llu\n\n",
                  static_cast<unsigned long long>(ok),
                  static_cast<unsigned long long>(boundary),
                  static_cast<unsigned long long>(type_err),
                  static_cast<unsigned long long>(spurious),
                  static_cast<unsigned long long>(miss));
    body += buf;
  }
  char head[160];
  std::snprintf(head, sizeof head,
                "entity diff: ok=%llu boundary=%llu type=%llu spurious=%llu "
                "miss=%llu\n",
                static_cast<unsigned long long>(out.ok),
                static_cast<unsigned long long>(out.boundary),
                static_cast<unsigned long long>(out.type_error),
                static_cast<unsigned long long>(out.spurious),
                static_cast<unsigned long long>(out.miss));
  out.text = head;
  if (!body.empty()) {
    out.text += '\n';
    out.text += body;
  }
  return out;
}

namespace {

std::uint32_t parse_u32(const std::string& s, const std::string& where) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    raise(errc::parse, where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::string relevance_judgments::key(const std::string& entity_id,
                                     const std::string& doc_id,
                                     std::uint32_t char_start,
                                     std::uint32_t char_end) {
  return entity_id + '\t' + doc_id + '\t' + std::to_string(char_start) + '\t' +
         std::to_string(char_end);
}

const bool* relevance_judgments::find(const std::string& entity_id,
                                      const std::string& doc_id,
                                      std::uint32_t char_start,
                                      std::uint32_t char_end) const {
  const auto it = records.find(key(entity_id, doc_id, char_start, char_end));
  return it == records.end() ? nullptr : &it->second;
}

relevance_judgments relevance_judgments::load(const std::string& path) {
  relevance_judgments j;
  const auto lines = split_lines(read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    const auto f = split_tsv(lines[i]);
    if (f.size() != 5)
      raise(errc::parse,
            where + ": expected entity_id, doc_id, char_start, char_end, "
                    "relevant");
    if (f[4] != "0" && f[4] != "1")
      raise(errc::parse, where + ": relevance must be 0 or 1");
    const std::string k =
        key(f[0], f[1], parse_u32(f[2], where), parse_u32(f[3], where));
    if (!j.records.emplace(k, f[4] == "1").second)
      raise(errc::parse, where + ": duplicate judgment");
    if (f[4] == "1") j.total_relevant++;
  }
  return j;
}

retrieval_comparison evaluate_retrieval(
    const std::vector<method_results>& results,
    const relevance_judgments& judgments, std::size_t depth, double beta) {
  retrieval_comparison out;
  for (const auto& mr : results) {
    method_row row;
    row.name = mr.name;
    for (const auto& [entity_id, list] : mr.per_entity) {
      const std::size_t n = std::min(depth, list.size());
      for (std::size_t i = 0; i < n; ++i) {
        const candidate& c = list[i];
        row.retrieved++;
        const bool* rel =
            judgments.find(entity_id, c.doc_id, c.char_start, c.char_end);
        if (!rel) {
          out.warnings.push_back("unjudged: " + mr.name + " " + entity_id +
                                 " " + c.doc_id + " [" +
                                 std::to_string(c.char_start) + "," +
                                 std::to_string(c.char_end) + ")");
        } else if (*rel) {
          row.relevant_retrieved++;
        }
      }
    }
    row.precision = row.retrieved
                        ? static_cast<double>(row.relevant_retrieved) /
                              static_cast<double>(row.retrieved)
                        : 0.0;
    row.recall = judgments.total_relevant
                     ? static_cast<double>(row.relevant_retrieved) /
                           static_cast<double>(judgments.total_relevant)
                     : 0.0;
    row.f = fbeta(row.precision, row.recall, beta);
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const method_row& a, const method_row& b) {
              if (a.f != b.f) return a.f > b.f;
              return a.name < b.name;
            });

  char fcol[32];
  std::snprintf(fcol, sizeof fcol, "F(%g)", beta);
  std::vector<std::vector<std::string>> table;
  table.push_back({"method", "P", "R", fcol});
  for (const auto& r : out.rows)
    table.push_back({r.name, pct(r.precision), pct(r.recall), pct(r.f)});
  out.table = format_table(table);
  return out;
}

}  // namespace nerkit
