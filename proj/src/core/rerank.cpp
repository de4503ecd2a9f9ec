#include "core/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/distance.hpp"
#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/utf8.hpp"

namespace nerkit {

embedding_store embedding_store::load(const std::string& path) {
  embedding_store store;
  const auto lines = split_lines(read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto f = split_tsv(lines[i]);
    if (f.size() != 2 || f[0].empty())
      raise(errc::parse, path + ":" + std::to_string(i + 1) +
                             ": expected <key>\\t<v1 v2 ...>");
    std::vector<double> vec;
    std::istringstream nums(f[1]);
    double v;
    while (nums >> v) {
      if (!std::isfinite(v))
        raise(errc::parse, path + ":" + std::to_string(i + 1) +
                               ": non-finite component");
      vec.push_back(v);
    }
    if (!nums.eof())
      raise(errc::parse, path + ":" + std::to_string(i + 1) + ": bad number");
    if (vec.empty())
      raise(errc::parse, path + ":" + std::to_string(i + 1) + ": empty vector");
    if (store.dim == 0)
      store.dim = vec.size();
    else if (vec.size() != store.dim)
      raise(errc::parse, path + ":" + std::to_string(i + 1) +
                             ": dimension mismatch (expected " +
                             std::to_string(store.dim) + ")");
    if (!store.vectors.emplace(tsv_unescape(f[0]), std::move(vec)).second)
      raise(errc::parse, path + ":" + std::to_string(i + 1) +
                             ": duplicate key '" + f[0] + "'");
  }
  return store;
}

const std::vector<double>* embedding_store::find(const std::string& key) const {
  auto it = vectors.find(key);
  return it == vectors.end() ? nullptr : &it->second;
}

double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<candidate> rerank_edit_distance(const query& q,
                                            std::vector<candidate> cands) {
  struct keyed {
    std::size_t word, chr;
    candidate c;
  };
  std::vector<keyed> rows;
  rows.reserve(cands.size());
  for (auto& c : cands) {
    const std::string folded = utf8::fold_utf8(c.matched_text);
    rows.push_back({edit_distance(folded, q.folded, gram::word),
                    edit_distance(folded, q.folded, gram::character),
                    std::move(c)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const keyed& a, const keyed& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.chr < b.chr;
  });
  std::vector<candidate> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    r.c.origin = method::edit_rerank;
    r.c.score = -static_cast<double>(r.word * 1000 + r.chr);
    out.push_back(std::move(r.c));
  }
  return out;
}

std::vector<candidate> rerank_embedding(const query& q,
                                        std::vector<candidate> cands,
                                        const embedding_store& store) {
  const std::vector<double>* qv = store.find(q.surface);
  if (!qv)
    raise(errc::missing_query_embedding,
          "no vector for query surface '" + q.surface + "'");
  struct keyed {
    bool scored;
    double sim;
    candidate c;
  };
  std::vector<keyed> rows;
  rows.reserve(cands.size());
  for (auto& c : cands) {
    const std::vector<double>* cv = store.find(c.matched_text);
    const double sim = cv ? cosine_similarity(*qv, *cv) : 0.0;
    rows.push_back({cv != nullptr, sim, std::move(c)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const keyed& a, const keyed& b) {
    if (a.scored != b.scored) return a.scored;  // scored ones first
    if (!a.scored) return false;                // unscored keep input order
    return a.sim > b.sim;
  });
  std::vector<candidate> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    r.c.origin = method::embedding_rerank;
    r.c.score = r.scored ? r.sim : -1.0;
    out.push_back(std::move(r.c));
  }
  return out;
}

namespace {

std::string identity_key(const candidate& c) {
  return c.doc_id + '\t' + std::to_string(c.char_start) + '\t' +
         std::to_string(c.char_end);
}

}  // namespace

std::vector<candidate> fuse_rrf(
    const std::vector<std::vector<candidate>>& lists, double rrf_k) {
  if (rrf_k <= 0) raise(errc::invalid_argument, "rrf k must be positive");
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<candidate> out;
  for (const auto& list : lists) {
    for (std::size_t rank = 1; rank <= list.size(); ++rank) {
      const candidate& c = list[rank - 1];
      const double contribution = 1.0 / (rrf_k + static_cast<double>(rank));
      auto [it, fresh] = index_of.try_emplace(identity_key(c), out.size());
      if (fresh) {
        candidate fused = c;
        fused.origin = method::rrf;
        fused.score = contribution;
        out.push_back(std::move(fused));
      } else {
        out[it->second].score += contribution;
      }
    }
  }
  sort_candidates(out);
  return out;
}

std::vector<candidate> fuse_concat(const std::vector<candidate>& fuzzy,
                                   const std::vector<candidate>& fused) {
  std::vector<candidate> out = fuzzy;
  std::unordered_map<std::string, bool> seen;
  for (const auto& c : fuzzy) seen[identity_key(c)] = true;
  for (const auto& c : fused) {
    if (seen.count(identity_key(c))) continue;
    bool overlaps = false;
    for (const auto& f : fuzzy)
      if (f.doc_id == c.doc_id &&
          f.char_start < c.char_end && c.char_start < f.char_end) {
        overlaps = true;
        break;
      }
    if (overlaps) continue;
    out.push_back(c);  // provenance stays with the producing technique
  }
  return out;
}

}  // namespace nerkit
