#include "core/distance.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "core/textseg.hpp"
#include "core/utf8.hpp"

namespace nerkit {

namespace {

template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::vector<std::string> word_sequence(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(s)) out.push_back(t.text);
  return out;
}

}  // namespace

std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  return levenshtein(a, b);
}

std::size_t edit_distance(const std::string& a, const std::string& b,
                          gram mode) {
  if (mode == gram::character)
    return levenshtein(utf8::decode(a), utf8::decode(b));
  return levenshtein(word_sequence(a), word_sequence(b));
}

namespace {

std::set<std::u32string> bigram_set(const std::u32string& chars) {
  std::set<std::u32string> out;
  if (chars.size() == 1) {
    out.insert(chars);  // degenerate: keep single letters comparable
    return out;
  }
  for (std::size_t i = 0; i + 1 < chars.size(); ++i)
    out.insert(chars.substr(i, 2));
  return out;
}

template <typename Set>
double jaccard(const Set& a, const Set& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double jaccard_similarity(const std::string& a, const std::string& b,
                          gram mode) {
  if (mode == gram::character)
    return jaccard(bigram_set(utf8::decode(a)), bigram_set(utf8::decode(b)));
  std::set<std::string> wa, wb;
  for (const auto& t : tokenize(a)) wa.insert(t.text);
  for (const auto& t : tokenize(b)) wb.insert(t.text);
  return jaccard(wa, wb);
}

}  // namespace nerkit
