#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nerkit {

enum class entity_type : std::uint8_t { per = 0, loc = 1 };

const char* entity_type_name(entity_type t);          // "PER" / "LOC"
entity_type entity_type_from(const std::string& s);   // accepts PER/LOC, any case

/// Token-level tags.  Ids are stable and are what the classifier predicts.
enum class label : std::uint8_t {
  b_per = 0,
  i_per = 1,
  b_loc = 2,
  i_loc = 3,
  outside = 4,
};

inline constexpr int label_count = 5;

const char* label_name(label l);           // "B-PER", "I-PER", "B-LOC", "I-LOC", "O"
label label_from(const std::string& s);    // strict; anything else is InvalidBio

inline bool is_begin(label l) { return l == label::b_per || l == label::b_loc; }
inline bool is_inside(label l) { return l == label::i_per || l == label::i_loc; }
inline entity_type type_of(label l) {
  return (l == label::b_per || l == label::i_per) ? entity_type::per
                                                  : entity_type::loc;
}
inline label begin_of(entity_type t) {
  return t == entity_type::per ? label::b_per : label::b_loc;
}
inline label inside_of(entity_type t) {
  return t == entity_type::per ? label::i_per : label::i_loc;
}

/// Character span, end exclusive.  All offsets in this codebase count Unicode
/// scalar values, never bytes.
struct span {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
};

inline bool operator==(span a, span b) { return a.start == b.start && a.end == b.end; }
inline bool spans_overlap(span a, span b) { return a.start < b.end && b.start < a.end; }

/// A token with its position in the enclosing text (sentence-relative inside
/// annotated sentences, document-relative inside documents).
struct token {
  std::string text;
  std::uint32_t char_start = 0;
  std::uint32_t char_end = 0;
};

/// A typed character span, possibly carrying nested inner mentions.
/// Offsets are relative to the containing sentence.
struct entity_mention {
  entity_type type = entity_type::per;
  std::uint32_t char_start = 0;
  std::uint32_t char_end = 0;
  std::vector<entity_mention> nested;
};

enum class split : std::uint8_t { train = 0, validation = 1, test = 2, unassigned = 3 };

const char* split_name(split s);
split split_from(const std::string& s);

struct annotated_sentence {
  std::string sentence_id;
  std::string doc_id;
  std::string language;   // ISO 639-1 code, "unknown" allowed
  split part = split::unassigned;
  std::string text;       // UTF-8 sentence text the offsets index into
  std::vector<token> tokens;
  std::vector<label> tags;                 // same length as tokens
  std::vector<entity_mention> gold;        // optional, hand-checked sets only
};

struct corpus {
  std::string name;
  std::vector<annotated_sentence> sentences;
};

}  // namespace nerkit
