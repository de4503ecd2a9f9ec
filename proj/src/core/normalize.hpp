#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace nerkit {

struct suffix_rule {
  std::string suffix;              // UTF-8
  std::uint32_t min_stem_length;   // codepoints that must remain
};

/// Token → lemma-like form: case fold, then dictionary lookup; on a miss the
/// first matching suffix rule with enough stem left is stripped.  The whole
/// thing is iterated to a fixed point so that apply(apply(t)) == apply(t)
/// holds for every configuration; load-time validation rejects dictionaries
/// that would make that iteration cycle.
class normalizer {
 public:
  /// No dictionary, no rules: case folding only.
  normalizer() = default;

  /// Either path may be empty ("no dictionary" / "no rules").
  static normalizer load(const std::string& lemma_path,
                         const std::string& suffix_path, bool case_fold);
  static normalizer from_parts(
      std::unordered_map<std::string, std::string> dict,
      std::vector<suffix_rule> rules, bool case_fold);

  std::string apply(const std::string& tok) const;

  bool case_fold() const { return case_fold_; }
  const std::unordered_map<std::string, std::string>& dictionary() const {
    return dict_;
  }
  const std::vector<suffix_rule>& rules() const { return rules_; }

 private:
  std::string step(const std::string& tok) const;
  void validate() const;

  std::unordered_map<std::string, std::string> dict_;
  std::vector<suffix_rule> rules_;
  bool case_fold_ = true;
};

}  // namespace nerkit
