#include "core/indexes.hpp"

#include <algorithm>
#include <cmath>

#include "core/binio.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace nerkit {

namespace {

// Postings, phrase units and stats all follow mechanically from the lemma
// arrays; build and load share this so the two paths cannot drift.
void derive_structures(search_indexes& idx, const document_collection& col) {
  idx.postings.assign(idx.lemma_table.size(), {});
  for (std::uint32_t d = 0; d < idx.doc_lemmas.size(); ++d)
    for (std::uint32_t p = 0; p < idx.doc_lemmas[d].size(); ++p)
      idx.postings[idx.doc_lemmas[d][p]].push_back({d, p});

  idx.units.clear();
  idx.unit_postings.assign(idx.lemma_table.size(), {});
  std::uint64_t length_sum = 0;
  std::vector<std::uint32_t> seen_at(idx.lemma_table.size(), 0);
  std::uint32_t stamp = 0;
  for (std::uint32_t d = 0; d < col.docs.size(); ++d) {
    const auto& doc = col.docs[d];
    for (std::size_t s = 0; s + 1 < doc.sentence_token_begin.size(); ++s) {
      const std::uint32_t begin = doc.sentence_token_begin[s];
      const std::uint32_t end = doc.sentence_token_begin[s + 1];
      for (std::uint32_t n = idx.params.phrase_n_lo;
           n <= idx.params.phrase_n_hi; ++n) {
        if (n == 0 || begin + n > end) continue;
        for (std::uint32_t t = begin; t + n <= end; ++t) {
          const auto unit_id = static_cast<std::uint32_t>(idx.units.size());
          idx.units.push_back({d, t, n});
          length_sum += n;
          ++stamp;
          for (std::uint32_t k = t; k < t + n; ++k) {
            const std::uint32_t lemma = idx.doc_lemmas[d][k];
            if (seen_at[lemma] == stamp) continue;  // one df per unit
            seen_at[lemma] = stamp;
            idx.unit_postings[lemma].push_back(unit_id);
          }
        }
      }
    }
  }
  idx.avgdl = idx.units.empty()
                  ? 0.0
                  : static_cast<double>(length_sum) /
                        static_cast<double>(idx.units.size());
}

}  // namespace

search_indexes build_indexes(const document_collection& col, normalizer norm,
                             const index_params& params, std::size_t jobs) {
  if (params.k1 <= 0 || params.b < 0 || params.b > 1 ||
      params.phrase_n_lo < 1 || params.phrase_n_hi < params.phrase_n_lo)
    raise(errc::invalid_argument, "bad index parameters");

  search_indexes idx;
  idx.params = params;
  idx.norm = std::move(norm);
  idx.collection_fingerprint = col.fingerprint();

  // normalize per document in parallel, intern sequentially in doc order
  std::vector<std::vector<std::string>> per_doc(col.docs.size());
  parallel_for(col.docs.size(), jobs, [&](std::size_t d) {
    per_doc[d].reserve(col.docs[d].tokens.size());
    for (const auto& t : col.docs[d].tokens)
      per_doc[d].push_back(idx.norm.apply(t.text));
  });
  idx.doc_lemmas.resize(col.docs.size());
  for (std::size_t d = 0; d < col.docs.size(); ++d) {
    idx.doc_lemmas[d].reserve(per_doc[d].size());
    for (auto& lemma : per_doc[d]) {
      auto [it, fresh] = idx.lemma_ids.try_emplace(
          lemma, static_cast<std::uint32_t>(idx.lemma_table.size()));
      if (fresh) idx.lemma_table.push_back(lemma);
      idx.doc_lemmas[d].push_back(it->second);
    }
  }

  derive_structures(idx, col);
  return idx;
}

void save_indexes(const search_indexes& idx, const std::string& path) {
  bin_writer w(path);
  w.magic("NKIX");
  w.u32(1);  // format version
  w.u64(idx.collection_fingerprint);
  w.f64(idx.params.k1);
  w.f64(idx.params.b);
  w.u32(idx.params.phrase_n_lo);
  w.u32(idx.params.phrase_n_hi);

  w.u8(idx.norm.case_fold() ? 1 : 0);
  // dictionary in sorted order so the file is reproducible
  std::vector<std::pair<std::string, std::string>> dict(
      idx.norm.dictionary().begin(), idx.norm.dictionary().end());
  std::sort(dict.begin(), dict.end());
  w.u64(dict.size());
  for (const auto& [surface, lemma] : dict) {
    w.str(surface);
    w.str(lemma);
  }
  w.u64(idx.norm.rules().size());
  for (const auto& r : idx.norm.rules()) {
    w.str(r.suffix);
    w.u32(r.min_stem_length);
  }

  w.u64(idx.lemma_table.size());
  for (const auto& lemma : idx.lemma_table) w.str(lemma);
  w.u64(idx.doc_lemmas.size());
  for (const auto& doc : idx.doc_lemmas) {
    w.u64(doc.size());
    for (const std::uint32_t id : doc) w.u32(id);
  }
  w.finish(path);
}

search_indexes load_indexes(const std::string& path,
                            const document_collection& col) {
  bin_reader r(path);
  r.expect_magic("NKIX");
  const std::uint32_t version = r.u32();
  if (version != 1)
    raise(errc::parse, path + ": unsupported format version " +
                           std::to_string(version));
  search_indexes idx;
  idx.collection_fingerprint = r.u64();
  if (idx.collection_fingerprint != col.fingerprint())
    raise(errc::invalid_argument,
          path + ": index was built over a different collection");
  idx.params.k1 = r.f64();
  idx.params.b = r.f64();
  idx.params.phrase_n_lo = r.u32();
  idx.params.phrase_n_hi = r.u32();

  const bool fold = r.u8() != 0;
  std::unordered_map<std::string, std::string> dict;
  const std::uint64_t ndict = r.u64();
  for (std::uint64_t i = 0; i < ndict; ++i) {
    std::string surface = r.str();
    dict[std::move(surface)] = r.str();
  }
  std::vector<suffix_rule> rules(r.u64());
  for (auto& rule : rules) {
    rule.suffix = r.str();
    rule.min_stem_length = r.u32();
  }
  idx.norm = normalizer::from_parts(std::move(dict), std::move(rules), fold);

  idx.lemma_table.resize(r.u64());
  for (std::uint32_t i = 0; i < idx.lemma_table.size(); ++i) {
    idx.lemma_table[i] = r.str();
    idx.lemma_ids[idx.lemma_table[i]] = i;
  }
  idx.doc_lemmas.resize(r.u64());
  if (idx.doc_lemmas.size() != col.docs.size())
    raise(errc::parse, path + ": document count mismatch");
  for (std::size_t d = 0; d < idx.doc_lemmas.size(); ++d) {
    idx.doc_lemmas[d].resize(r.u64());
    if (idx.doc_lemmas[d].size() != col.docs[d].tokens.size())
      raise(errc::parse, path + ": token count mismatch");
    for (auto& id : idx.doc_lemmas[d]) {
      id = r.u32();
      if (id >= idx.lemma_table.size())
        raise(errc::parse, path + ": lemma id out of range");
    }
  }
  derive_structures(idx, col);
  return idx;
}

std::pair<std::uint32_t, std::uint32_t> length_window(std::uint32_t target,
                                                      double tolerance_ratio) {
  auto lo = static_cast<std::uint32_t>(
      std::ceil(static_cast<double>(target) * (1.0 - tolerance_ratio)));
  auto hi = static_cast<std::uint32_t>(
      std::floor(static_cast<double>(target) * (1.0 + tolerance_ratio)));
  if (lo < 1) lo = 1;
  if (hi < lo) hi = lo;
  return {lo, hi};
}

std::vector<span> enumerate_windows(const document& doc, std::uint32_t lo,
                                    std::uint32_t hi, std::uint32_t stride) {
  if (stride < 1) raise(errc::invalid_argument, "stride must be >= 1");
  std::vector<span> out;
  const auto text_len = static_cast<std::uint32_t>(doc.chars.size());
  for (std::size_t t = 0; t < doc.tokens.size(); t += stride) {
    const std::uint32_t start = doc.tokens[t].char_start;
    for (std::uint32_t len = lo; len <= hi; ++len) {
      if (start + len > text_len) break;
      out.push_back({start, start + len});
    }
  }
  return out;
}

}  // namespace nerkit
