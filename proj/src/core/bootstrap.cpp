#include "core/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "core/bio.hpp"
#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/utf8.hpp"

namespace nerkit {

gazetteer gazetteer::load(const std::string& path) {
  gazetteer gaz;
  std::unordered_set<std::string> seen;
  const auto lines = split_lines(read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto f = split_tsv(lines[i]);
    if (f.size() != 3 || f[0].empty() || f[2].empty())
      raise(errc::parse, path + ":" + std::to_string(i + 1) +
                             ": expected <entity_id>\\t<type>\\t<surface>");
    if (!seen.insert(f[0]).second)
      raise(errc::parse, path + ": duplicate entity id '" + f[0] + "'");
    gaz.entries.push_back({f[0], entity_type_from(f[1]), f[2]});
  }
  return gaz;
}

std::vector<candidate> base_candidate_pool(const query& q,
                                           const document_collection& col,
                                           const search_indexes& idx,
                                           const retrieval_options& opt) {
  std::vector<candidate> pool;
  auto absorb = [&](std::vector<candidate> list) {
    for (auto& c : list) pool.push_back(std::move(c));
  };
  absorb(search_jaccard(q, col, opt));
  absorb(search_bm25(q, col, idx, opt));
  absorb(search_boolean_phrase(q, col, idx, opt));
  absorb(search_fuzzy_regex(q, col, opt));
  std::unordered_set<std::string> seen;
  std::vector<candidate> out;
  for (auto& c : pool) {
    const std::string key = c.doc_id + '\t' + std::to_string(c.char_start) +
                            '\t' + std::to_string(c.char_end);
    if (seen.insert(key).second) out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::vector<std::vector<candidate>> rrf_inputs(
    const query& q, const document_collection& col, const search_indexes& idx,
    const retrieval_options& opt, const std::vector<named_embeddings>& stores) {
  std::vector<std::vector<candidate>> lists;
  lists.push_back(search_jaccard(q, col, opt));
  lists.push_back(search_bm25(q, col, idx, opt));
  lists.push_back(search_boolean_phrase(q, col, idx, opt));
  lists.push_back(search_fuzzy_regex(q, col, opt));
  if (!opt.rrf_fast_only) {
    auto pool = base_candidate_pool(q, col, idx, opt);
    lists.push_back(rerank_edit_distance(q, pool));
    for (const auto& ne : stores)
      lists.push_back(rerank_embedding(q, pool, *ne.store));
  }
  return lists;
}

}  // namespace

std::vector<candidate> run_method(const query& q, method m,
                                  const document_collection& col,
                                  const search_indexes& idx,
                                  const retrieval_options& opt,
                                  const std::vector<named_embeddings>& stores) {
  std::vector<candidate> out;
  switch (m) {
    case method::jaccard:
      return search_jaccard(q, col, opt);
    case method::bm25:
      return search_bm25(q, col, idx, opt);
    case method::boolean_phrase:
      return search_boolean_phrase(q, col, idx, opt);
    case method::fuzzy_regex:
      return search_fuzzy_regex(q, col, opt);
    case method::edit_rerank:
      out = rerank_edit_distance(q, base_candidate_pool(q, col, idx, opt));
      break;
    case method::embedding_rerank: {
      if (stores.empty())
        raise(errc::invalid_argument,
              "embedding_rerank needs an embedding file");
      out = rerank_embedding(q, base_candidate_pool(q, col, idx, opt), *stores[0].store);
      break;
    }
    case method::rrf:
      out = fuse_rrf(rrf_inputs(q, col, idx, opt, stores), opt.rrf_k);
      break;
    case method::concat:
      out = fuse_concat(search_fuzzy_regex(q, col, opt),
                        fuse_rrf(rrf_inputs(q, col, idx, opt, stores),
                                 opt.rrf_k));
      break;
  }
  truncate_candidates(out, opt.limit);
  return out;
}

extraction extract_occurrence(const document_collection& col,
                              const candidate& c, entity_type type) {
  const document& doc = col.docs[c.doc];
  const std::size_t si = sentence_at(doc, c.char_start);
  const span sent = doc.sentences[si];
  const std::uint32_t ms = std::max(c.char_start, sent.start);
  const std::uint32_t me = std::min(c.char_end, sent.end);
  if (ms >= me)
    raise(errc::span_out_of_range,
          "candidate span lies outside sentence text in " + doc.doc_id);
  extraction ex;
  ex.doc = c.doc;
  ex.sentence = static_cast<std::uint32_t>(si);
  ex.mention.type = type;
  ex.mention.char_start = ms - sent.start;
  ex.mention.char_end = me - sent.start;
  return ex;
}

corpus merge_occurrences(const document_collection& col,
                         const std::vector<extraction>& extractions) {
  // (doc_id, sentence index) -> mentions; map keeps the output order
  std::map<std::pair<std::string, std::uint32_t>,
           std::vector<entity_mention>> grouped;
  std::map<std::pair<std::string, std::uint32_t>, std::uint32_t> doc_of;
  for (const auto& ex : extractions) {
    const auto key = std::make_pair(col.docs[ex.doc].doc_id, ex.sentence);
    grouped[key].push_back(ex.mention);
    doc_of[key] = ex.doc;
  }

  corpus out;
  out.name = "bootstrap";
  for (auto& [key, mentions] : grouped) {
    const document& doc = col.docs[doc_of[key]];
    const span sent = doc.sentences[key.second];
    annotated_sentence s;
    s.sentence_id = key.first + "#" + std::to_string(key.second);
    s.doc_id = key.first;
    s.language = doc.language;
    s.text = utf8::encode(std::u32string_view(doc.chars)
                              .substr(sent.start, sent.end - sent.start));
    const std::uint32_t tok_begin = doc.sentence_token_begin[key.second];
    const std::uint32_t tok_end = doc.sentence_token_begin[key.second + 1];
    for (std::uint32_t t = tok_begin; t < tok_end; ++t) {
      token tok = doc.tokens[t];
      tok.char_start -= sent.start;
      tok.char_end -= sent.start;
      s.tokens.push_back(std::move(tok));
    }

    // snap to token boundaries, deduplicate by (type, token span)
    struct snapped {
      entity_type type;
      std::uint32_t first, last;  // token range
      std::uint32_t char_start, char_end;
    };
    std::vector<snapped> snaps;
    for (const auto& m : mentions) {
      const auto [first, last] =
          token_range(s.tokens, {m.char_start, m.char_end});
      snapped sm{m.type, first, last, s.tokens[first].char_start,
                 s.tokens[last - 1].char_end};
      const bool dup =
          std::any_of(snaps.begin(), snaps.end(), [&](const snapped& o) {
            return o.type == sm.type && o.first == sm.first &&
                   o.last == sm.last;
          });
      if (!dup) snaps.push_back(sm);
    }
    // longest span wins; ties earlier start, then PER before LOC
    std::sort(snaps.begin(), snaps.end(), [](const snapped& a,
                                             const snapped& b) {
      const auto alen = a.char_end - a.char_start;
      const auto blen = b.char_end - b.char_start;
      if (alen != blen) return alen > blen;
      if (a.char_start != b.char_start) return a.char_start < b.char_start;
      return static_cast<int>(a.type) < static_cast<int>(b.type);
    });
    std::vector<bool> taken(s.tokens.size(), false);
    std::vector<entity_mention> kept;
    for (const auto& sm : snaps) {
      bool free = true;
      for (std::uint32_t t = sm.first; t < sm.last; ++t)
        if (taken[t]) free = false;
      if (!free) continue;
      for (std::uint32_t t = sm.first; t < sm.last; ++t) taken[t] = true;
      entity_mention m;
      m.type = sm.type;
      m.char_start = sm.char_start;
      m.char_end = sm.char_end;
      kept.push_back(m);
    }
    std::sort(kept.begin(), kept.end(),
              [](const entity_mention& a, const entity_mention& b) {
                return a.char_start < b.char_start;
              });
    s.tags = project_bio(s.tokens, kept);
    out.sentences.push_back(std::move(s));
  }
  return out;
}

corpus bootstrap_corpus(const gazetteer& gaz, const document_collection& col,
                        const search_indexes& idx, const bootstrap_config& cfg,
                        const std::vector<named_embeddings>& stores) {
  std::vector<query> queries;
  queries.reserve(gaz.entries.size());
  for (const auto& e : gaz.entries)
    queries.push_back(make_query(e.entity_id, e.surface, e.type, idx.norm));
  std::sort(queries.begin(), queries.end(),
            [](const query& a, const query& b) {
              return a.entity_id < b.entity_id;
            });

  std::vector<std::vector<candidate>> results(queries.size());
  parallel_for(queries.size(), cfg.jobs, [&](std::size_t i) {
    results[i] =
        run_method(queries[i], cfg.technique, col, idx, cfg.retrieval, stores);
  });

  std::vector<extraction> extractions;
  for (std::size_t i = 0; i < queries.size(); ++i)
    for (const auto& c : results[i])
      extractions.push_back(extract_occurrence(col, c, queries[i].type));

  corpus out = merge_occurrences(col, extractions);
  split_corpus(out, cfg.train_ratio, cfg.validation_ratio, cfg.test_ratio,
               cfg.seed);
  validate_corpus(out);
  return out;
}

void split_corpus(corpus& c, double train_ratio, double validation_ratio,
                  double test_ratio, std::uint64_t seed) {
  if (train_ratio <= 0 || validation_ratio <= 0 || test_ratio <= 0 ||
      std::abs(train_ratio + validation_ratio + test_ratio - 1.0) > 1e-9)
    raise(errc::invalid_argument, "split ratios must be positive and sum to 1");
  const std::size_t n = c.sentences.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  seeded_shuffle(order, seed);
  // floor rule, with a nudge against binary representation error
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_ratio * static_cast<double>(n) + 1e-9));
  const auto n_val = static_cast<std::size_t>(
      std::floor(validation_ratio * static_cast<double>(n) + 1e-9));
  for (std::size_t i = 0; i < n; ++i) {
    split part = split::test;
    if (i < n_train)
      part = split::train;
    else if (i < n_train + n_val)
      part = split::validation;
    c.sentences[order[i]].part = part;
  }
}

}  // namespace nerkit
