#include "core/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "core/distance.hpp"
#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/textseg.hpp"
#include "core/utf8.hpp"

namespace nerkit {

const char* method_name(method m) {
  switch (m) {
    case method::jaccard: return "jaccard";
    case method::bm25: return "bm25";
    case method::boolean_phrase: return "boolean_phrase";
    case method::fuzzy_regex: return "fuzzy_regex";
    case method::edit_rerank: return "edit_rerank";
    case method::embedding_rerank: return "embedding_rerank";
    case method::rrf: return "rrf";
    case method::concat: return "concat";
  }
  return "?";
}

method method_from(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(method::concat); ++i)
    if (s == method_name(static_cast<method>(i))) return static_cast<method>(i);
  raise(errc::invalid_argument, "unknown method '" + s + "'");
}

query make_query(std::string entity_id, std::string surface, entity_type type,
                 const normalizer& norm) {
  if (surface.empty()) raise(errc::invalid_argument, "empty query surface");
  query q;
  q.entity_id = std::move(entity_id);
  q.surface = std::move(surface);
  q.type = type;
  q.folded = utf8::fold_utf8(q.surface);
  for (const auto& t : tokenize(q.surface)) {
    q.tokens.push_back(t.text);
    q.lemmas.push_back(norm.apply(t.text));
  }
  return q;
}

void sort_candidates(std::vector<candidate>& cands) {
  std::sort(cands.begin(), cands.end(),
            [](const candidate& a, const candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
              if (a.char_start != b.char_start) return a.char_start < b.char_start;
              return a.char_end < b.char_end;
            });
}

void truncate_candidates(std::vector<candidate>& cands, std::size_t limit) {
  if (cands.size() > limit) cands.resize(limit);
}

namespace {

candidate make_candidate(const document_collection& col, std::uint32_t doc,
                         std::uint32_t start, std::uint32_t end, double score,
                         method origin) {
  const document& d = col.docs[doc];
  candidate c;
  c.doc = doc;
  c.doc_id = d.doc_id;
  c.char_start = start;
  c.char_end = end;
  c.matched_text = utf8::encode(
      std::u32string_view(d.chars).substr(start, end - start));
  c.score = score;
  c.origin = origin;
  return c;
}

}  // namespace

std::vector<candidate> search_jaccard(const query& q,
                                      const document_collection& col,
                                      const retrieval_options& opt) {
  if (opt.limit < 1) raise(errc::invalid_argument, "limit must be >= 1");
  const auto target = static_cast<std::uint32_t>(utf8::length(q.surface));
  const auto [lo, hi] = length_window(target, opt.window_tolerance);
  std::vector<candidate> out;
  for (std::uint32_t d = 0; d < col.docs.size(); ++d) {
    const document& doc = col.docs[d];
    for (const span w : enumerate_windows(doc, lo, hi, opt.window_stride)) {
      const std::string text = utf8::fold_utf8(utf8::encode(
          std::u32string_view(doc.chars).substr(w.start, w.end - w.start)));
      const double score =
          (jaccard_similarity(text, q.folded, gram::character) +
           jaccard_similarity(text, q.folded, gram::word)) /
          2.0;
      if (score <= 0.0) continue;
      out.push_back(make_candidate(col, d, w.start, w.end, score,
                                   method::jaccard));
    }
  }
  sort_candidates(out);
  truncate_candidates(out, opt.limit);
  return out;
}

double bm25_idf(std::uint64_t total_units, std::uint64_t df) {
  const double n = static_cast<double>(total_units);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double bm25_term_score(double idf, double tf, double unit_len, double avgdl,
                       double k1, double b) {
  if (tf <= 0.0) return 0.0;
  const double norm = 1.0 - b + b * (avgdl > 0.0 ? unit_len / avgdl : 0.0);
  return idf * tf * (k1 + 1.0) / (tf + k1 * norm);
}

std::vector<candidate> search_bm25(const query& q,
                                   const document_collection& col,
                                   const search_indexes& idx,
                                   const retrieval_options& opt) {
  if (opt.limit < 1) raise(errc::invalid_argument, "limit must be >= 1");
  // distinct query lemmas that exist in the collection
  std::vector<std::uint32_t> terms;
  for (const auto& lemma : q.lemmas) {
    const std::uint32_t id = idx.lemma_id(lemma);
    if (id != no_lemma &&
        std::find(terms.begin(), terms.end(), id) == terms.end())
      terms.push_back(id);
  }
  if (terms.empty()) return {};

  // eligible unit lengths: query token count +- delta, clamped to the built range
  const long qlen = static_cast<long>(q.tokens.size());
  const long lo = std::max<long>(qlen - static_cast<long>(opt.ngram_delta),
                                 static_cast<long>(idx.params.phrase_n_lo));
  const long hi = std::min<long>(qlen + static_cast<long>(opt.ngram_delta),
                                 static_cast<long>(idx.params.phrase_n_hi));
  if (lo > hi) return {};

  std::vector<std::uint32_t> unit_ids;
  for (const std::uint32_t t : terms)
    unit_ids.insert(unit_ids.end(), idx.unit_postings[t].begin(),
                    idx.unit_postings[t].end());
  std::sort(unit_ids.begin(), unit_ids.end());
  unit_ids.erase(std::unique(unit_ids.begin(), unit_ids.end()),
                 unit_ids.end());

  std::vector<candidate> out;
  for (const std::uint32_t u : unit_ids) {
    const phrase_unit& unit = idx.units[u];
    if (unit.tok_len < lo || unit.tok_len > hi) continue;
    double score = 0.0;
    for (const std::uint32_t t : terms) {
      std::uint32_t tf = 0;
      for (std::uint32_t k = unit.tok_start; k < unit.tok_start + unit.tok_len;
           ++k)
        if (idx.doc_lemmas[unit.doc][k] == t) ++tf;
      score += bm25_term_score(bm25_idf(idx.unit_count(), idx.df(t)), tf,
                               unit.tok_len, idx.avgdl, idx.params.k1,
                               idx.params.b);
    }
    if (score <= 0.0) continue;
    const document& doc = col.docs[unit.doc];
    out.push_back(make_candidate(
        col, unit.doc, doc.tokens[unit.tok_start].char_start,
        doc.tokens[unit.tok_start + unit.tok_len - 1].char_end, score,
        method::bm25));
  }
  sort_candidates(out);
  truncate_candidates(out, opt.limit);
  return out;
}

std::vector<candidate> search_boolean_phrase(const query& q,
                                             const document_collection& col,
                                             const search_indexes& idx,
                                             const retrieval_options& opt) {
  if (opt.limit < 1) raise(errc::invalid_argument, "limit must be >= 1");
  if (q.lemmas.empty()) raise(errc::invalid_argument, "query has no lemmas");
  std::vector<std::uint32_t> seq;
  for (const auto& lemma : q.lemmas) {
    const std::uint32_t id = idx.lemma_id(lemma);
    if (id == no_lemma) return {};  // some lemma never occurs
    seq.push_back(id);
  }
  std::vector<candidate> out;
  for (const posting p : idx.postings[seq[0]]) {
    const auto& lemma_row = idx.doc_lemmas[p.doc];
    if (p.pos + seq.size() > lemma_row.size()) continue;
    bool match = true;
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (lemma_row[p.pos + i] != seq[i]) {
        match = false;
        break;
      }
    if (!match) continue;
    const document& doc = col.docs[p.doc];
    const std::uint32_t start = doc.tokens[p.pos].char_start;
    const std::uint32_t end =
        doc.tokens[p.pos + seq.size() - 1].char_end;
    candidate c = make_candidate(col, p.doc, start, end, 0.0,
                                 method::boolean_phrase);
    c.score = -static_cast<double>(
        edit_distance(utf8::fold_utf8(c.matched_text), q.folded,
                      gram::character));
    out.push_back(std::move(c));
  }
  sort_candidates(out);
  truncate_candidates(out, opt.limit);
  return out;
}

namespace {

struct fuzzy_hit {
  std::uint32_t start, end, dist;
};

// All substrings of `text` within distance k of `pattern`, by a per-start
// column DP.  The column minimum never decreases as a window grows, so a
// start is abandoned once it exceeds k.
std::vector<fuzzy_hit> fuzzy_candidates(const std::u32string& text,
                                        const std::u32string& pattern,
                                        std::uint32_t k) {
  const std::size_t n = text.size(), m = pattern.size();
  std::vector<fuzzy_hit> hits;
  std::vector<std::uint32_t> col(m + 1), next(m + 1);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j <= m; ++j)
      col[j] = static_cast<std::uint32_t>(j);
    const std::size_t max_len = std::min(n - s, m + k);
    for (std::size_t i = 1; i <= max_len; ++i) {
      const char32_t c = text[s + i - 1];
      next[0] = static_cast<std::uint32_t>(i);
      std::uint32_t best = next[0];
      for (std::size_t j = 1; j <= m; ++j) {
        const std::uint32_t sub = col[j - 1] + (c == pattern[j - 1] ? 0 : 1);
        next[j] = std::min({col[j] + 1, next[j - 1] + 1, sub});
        best = std::min(best, next[j]);
      }
      std::swap(col, next);
      if (col[m] <= k)
        hits.push_back({static_cast<std::uint32_t>(s),
                        static_cast<std::uint32_t>(s + i), col[m]});
      if (best > k) break;
    }
  }
  return hits;
}

// Minimality: drop a hit when some proper sub-span matches at least as well.
// Hits are grouped per start with prefix-minimum distances so each check is
// a walk over the contained starts.
std::vector<fuzzy_hit> minimal_hits(const std::vector<fuzzy_hit>& hits,
                                    std::size_t text_len) {
  // per start: hits sorted by end (they already are), prefix-min dist
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_start(
      text_len);  // (end, min dist up to this end)
  for (const auto& h : hits) {
    auto& row = by_start[h.start];
    const std::uint32_t best =
        row.empty() ? h.dist : std::min(row.back().second, h.dist);
    row.emplace_back(h.end, best);
  }
  auto best_within = [&](std::uint32_t start, std::uint32_t max_end,
                         std::uint32_t& out) {
    const auto& row = by_start[start];
    // last entry with end <= max_end
    auto it = std::upper_bound(
        row.begin(), row.end(), max_end,
        [](std::uint32_t v, const auto& e) { return v < e.first; });
    if (it == row.begin()) return false;
    out = std::prev(it)->second;
    return true;
  };
  std::vector<fuzzy_hit> kept;
  for (const auto& h : hits) {
    bool dominated = false;
    for (std::uint32_t s = h.start; s < h.end && !dominated; ++s) {
      // proper sub-span: at the same start only a strictly earlier end counts
      const std::uint32_t cap = s == h.start ? h.end - 1 : h.end;
      std::uint32_t best;
      if (best_within(s, cap, best) && best <= h.dist) dominated = true;
    }
    if (!dominated) kept.push_back(h);
  }
  return kept;
}

}  // namespace

std::vector<candidate> search_fuzzy_regex(const query& q,
                                          const document_collection& col,
                                          const retrieval_options& opt) {
  if (opt.limit < 1) raise(errc::invalid_argument, "limit must be >= 1");
  const std::u32string pattern = utf8::fold(utf8::decode(q.surface));
  const std::uint32_t k =
      opt.max_edits >= 0
          ? static_cast<std::uint32_t>(opt.max_edits)
          : static_cast<std::uint32_t>((pattern.size() + 4) / 5);

  std::vector<candidate> out;
  for (std::uint32_t d = 0; d < col.docs.size(); ++d) {
    const document& doc = col.docs[d];
    std::u32string folded = doc.chars;
    for (auto& c : folded) c = utf8::fold(c);

    auto hits = minimal_hits(fuzzy_candidates(folded, pattern, k),
                             folded.size());
    // transitive overlap clusters keep the single best hit
    std::sort(hits.begin(), hits.end(), [](const fuzzy_hit& a,
                                           const fuzzy_hit& b) {
      if (a.start != b.start) return a.start < b.start;
      return a.end < b.end;
    });
    std::size_t i = 0;
    while (i < hits.size()) {
      std::uint32_t reach = hits[i].end;
      fuzzy_hit best = hits[i];
      std::size_t j = i + 1;
      while (j < hits.size() && hits[j].start < reach) {
        reach = std::max(reach, hits[j].end);
        const fuzzy_hit& h = hits[j];
        if (h.dist < best.dist ||
            (h.dist == best.dist &&
             (h.start < best.start ||
              (h.start == best.start && h.end - h.start < best.end - best.start))))
          best = h;
        ++j;
      }
      out.push_back(make_candidate(col, d, best.start, best.end,
                                   -static_cast<double>(best.dist),
                                   method::fuzzy_regex));
      i = j;
    }
  }
  sort_candidates(out);
  truncate_candidates(out, opt.limit);
  return out;
}

void write_candidates_tsv(
    const std::vector<std::pair<std::string, std::vector<candidate>>>&
        per_entity,
    const std::string& path, std::uint64_t seed) {
  auto out = open_output(path);
  out << "# generator=nerkit seed=" << seed << "\n";
  out << "# entity_id\tmethod\tdoc_id\tchar_start\tchar_end\tscore\t"
         "matched_text\n";
  char score_buf[64];
  for (const auto& [entity_id, cands] : per_entity) {
    for (const auto& c : cands) {
      std::snprintf(score_buf, sizeof score_buf, "%.6f", c.score);
      out << entity_id << '\t' << method_name(c.origin) << '\t' << c.doc_id
          << '\t' << c.char_start << '\t' << c.char_end << '\t' << score_buf
          << '\t' << tsv_escape(c.matched_text) << "\n";
    }
  }
  finish_output(out, path);
}

}  // namespace nerkit
