#include "core/normalize.hpp"

#include <unordered_set>

#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/utf8.hpp"

namespace nerkit {

normalizer normalizer::load(const std::string& lemma_path,
                            const std::string& suffix_path, bool case_fold) {
  std::unordered_map<std::string, std::string> dict;
  if (!lemma_path.empty()) {
    const auto lines = split_lines(read_text_file(lemma_path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty() || lines[i][0] == '#') continue;
      const auto f = split_tsv(lines[i]);
      if (f.size() != 2 || f[0].empty() || f[1].empty())
        raise(errc::parse, lemma_path + ":" + std::to_string(i + 1) +
                               ": expected <surface>\\t<lemma>");
      dict[f[0]] = f[1];
    }
  }
  std::vector<suffix_rule> rules;
  if (!suffix_path.empty()) {
    const auto lines = split_lines(read_text_file(suffix_path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty() || lines[i][0] == '#') continue;
      const auto f = split_tsv(lines[i]);
      unsigned long min_stem = 0;
      if (f.size() == 2) {
        try {
          min_stem = std::stoul(f[1]);
        } catch (const std::exception&) {
          min_stem = 0;  // reported below
        }
      }
      if (f.size() != 2 || f[0].empty() || min_stem == 0)
        raise(errc::parse, suffix_path + ":" + std::to_string(i + 1) +
                               ": expected <suffix>\\t<min-stem-length>");
      rules.push_back({f[0], static_cast<std::uint32_t>(min_stem)});
    }
  }
  return from_parts(std::move(dict), std::move(rules), case_fold);
}

normalizer normalizer::from_parts(
    std::unordered_map<std::string, std::string> dict,
    std::vector<suffix_rule> rules, bool case_fold) {
  normalizer n;
  n.case_fold_ = case_fold;
  n.rules_ = std::move(rules);
  if (case_fold) {
    for (auto& [suffix, min_stem] : n.rules_) suffix = utf8::fold_utf8(suffix);
    for (auto& [surface, lemma] : dict)
      n.dict_[utf8::fold_utf8(surface)] = utf8::fold_utf8(lemma);
  } else {
    n.dict_ = std::move(dict);
  }
  n.validate();
  return n;
}

// One pass of the rewrite: dictionary wins, otherwise the first suffix rule
// that leaves a long enough stem.
std::string normalizer::step(const std::string& tok) const {
  auto hit = dict_.find(tok);
  if (hit != dict_.end()) return hit->second;
  const auto chars = utf8::decode(tok);
  for (const auto& r : rules_) {
    const auto suffix = utf8::decode(r.suffix);
    if (chars.size() <= suffix.size()) continue;
    const std::size_t stem_len = chars.size() - suffix.size();
    if (stem_len < r.min_stem_length) continue;
    if (chars.compare(stem_len, suffix.size(), suffix) != 0) continue;
    return utf8::encode(std::u32string_view(chars).substr(0, stem_len));
  }
  return tok;
}

std::string normalizer::apply(const std::string& tok) const {
  std::string cur = case_fold_ ? utf8::fold_utf8(tok) : tok;
  for (int guard = 0; guard < 64; ++guard) {
    std::string next = step(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  // validate() rules this out for dictionary-reachable values; suffix rules
  // alone always shrink, so running off the guard means a broken invariant.
  raise(errc::parse, "normalizer failed to reach a fixed point on '" + tok + "'");
}

void normalizer::validate() const {
  // The only way the rewrite can grow a string is through the dictionary, so
  // cycles must pass through a dictionary value; chasing each value to its
  // fixed point (with a seen-set) proves termination for every input.
  for (const auto& [surface, lemma] : dict_) {
    std::unordered_set<std::string> seen{lemma};
    std::string cur = lemma;
    while (true) {
      std::string next = step(cur);
      if (next == cur) break;
      if (!seen.insert(next).second)
        raise(errc::parse,
              "lemma dictionary entry '" + surface +
                  "' cycles through the suffix rules (via '" + next + "')");
      cur = std::move(next);
    }
  }
}

}  // namespace nerkit
