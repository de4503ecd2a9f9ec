#include "core/types.hpp"

#include "core/error.hpp"
#include "core/utf8.hpp"

namespace nerkit {

const char* entity_type_name(entity_type t) {
  return t == entity_type::per ? "PER" : "LOC";
}

entity_type entity_type_from(const std::string& s) {
  const std::string f = utf8::fold_utf8(s);
  if (f == "per") return entity_type::per;
  if (f == "loc") return entity_type::loc;
  raise(errc::parse, "unknown entity type '" + s + "'");
}

const char* label_name(label l) {
  switch (l) {
    case label::b_per: return "B-PER";
    case label::i_per: return "I-PER";
    case label::b_loc: return "B-LOC";
    case label::i_loc: return "I-LOC";
    case label::outside: return "O";
  }
  return "?";
}

label label_from(const std::string& s) {
  if (s == "B-PER") return label::b_per;
  if (s == "I-PER") return label::i_per;
  if (s == "B-LOC") return label::b_loc;
  if (s == "I-LOC") return label::i_loc;
  if (s == "O") return label::outside;
  raise(errc::invalid_bio, "unknown tag '" + s + "'");
}

const char* split_name(split s) {
  switch (s) {
    case split::train: return "train";
    case split::validation: return "validation";
    case split::test: return "test";
    case split::unassigned: return "unassigned";
  }
  return "?";
}

split split_from(const std::string& s) {
  if (s == "train") return split::train;
  if (s == "validation") return split::validation;
  if (s == "test") return split::test;
  if (s == "unassigned") return split::unassigned;
  raise(errc::parse, "unknown split '" + s + "'");
}

}  // namespace nerkit
