#include "core/bio.hpp"

#include <string>
#include <unordered_set>

#include "core/error.hpp"

namespace nerkit {

std::vector<entity_mention> parse_bio(const std::vector<label>& tags,
                                      const std::vector<token>& tokens,
                                      bio_mode mode) {
  if (tags.size() != tokens.size())
    raise(errc::invalid_argument, "tag/token length mismatch");
  std::vector<entity_mention> out;
  bool open = false;
  entity_type open_type = entity_type::per;
  std::size_t run_start = 0;

  auto close = [&](std::size_t end_tok) {
    if (!open) return;
    entity_mention m;
    m.type = open_type;
    m.char_start = tokens[run_start].char_start;
    m.char_end = tokens[end_tok - 1].char_end;
    out.push_back(std::move(m));
    open = false;
  };

  for (std::size_t i = 0; i < tags.size(); ++i) {
    const label t = tags[i];
    if (is_begin(t)) {
      close(i);
      open = true;
      open_type = type_of(t);
      run_start = i;
    } else if (is_inside(t)) {
      if (open && open_type == type_of(t)) continue;  // run continues
      if (mode == bio_mode::strict)
        raise(errc::invalid_bio,
              "I tag without matching predecessor at token " + std::to_string(i));
      close(i);  // repair: promote to B
      open = true;
      open_type = type_of(t);
      run_start = i;
    } else {
      close(i);
    }
  }
  close(tags.size());
  return out;
}

std::pair<std::uint32_t, std::uint32_t> token_range(
    const std::vector<token>& tokens, span s) {
  std::uint32_t first = 0, last = 0;
  bool found = false;
  for (std::uint32_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].char_start < s.end && s.start < tokens[i].char_end) {
      if (!found) first = i;
      last = i + 1;
      found = true;
    }
  }
  if (!found)
    raise(errc::span_out_of_range,
          "span " + std::to_string(s.start) + ".." + std::to_string(s.end) +
              " covers no token");
  return {first, last};
}

std::vector<label> project_bio(const std::vector<token>& tokens,
                               const std::vector<entity_mention>& mentions) {
  std::vector<label> tags(tokens.size(), label::outside);
  std::vector<bool> claimed(tokens.size(), false);
  for (const auto& m : mentions) {
    const auto [first, last] = token_range(tokens, {m.char_start, m.char_end});
    for (std::uint32_t i = first; i < last; ++i) {
      if (claimed[i])
        raise(errc::overlap_conflict,
              "token " + std::to_string(i) + " claimed by two mentions");
      claimed[i] = true;
      tags[i] = i == first ? begin_of(m.type) : inside_of(m.type);
    }
  }
  return tags;
}

bool is_valid_bio(const std::vector<label>& tags) {
  label prev = label::outside;
  for (const label t : tags) {
    if (is_inside(t) && !(type_of(prev) == type_of(t) &&
                          (is_begin(prev) || is_inside(prev))))
      return false;
    prev = t;
  }
  return true;
}

namespace {

void check_mention_tree(const entity_mention& m, std::uint32_t text_len,
                        const std::string& where) {
  if (m.char_start >= m.char_end || m.char_end > text_len)
    raise(errc::parse, "bad mention span in " + where);
  const entity_mention* prev = nullptr;
  for (const auto& child : m.nested) {
    // strict containment, siblings ordered and disjoint
    if (child.char_start < m.char_start || child.char_end > m.char_end ||
        (child.char_start == m.char_start && child.char_end == m.char_end))
      raise(errc::parse, "nested mention escapes its parent in " + where);
    if (prev && child.char_start < prev->char_end)
      raise(errc::parse, "overlapping sibling mentions in " + where);
    check_mention_tree(child, text_len, where);
    prev = &child;
  }
}

}  // namespace

void validate_corpus(const corpus& c) {
  std::unordered_set<std::string> ids;
  for (const auto& s : c.sentences) {
    if (!ids.insert(s.sentence_id).second)
      raise(errc::parse, "duplicate sentence id " + s.sentence_id);
    if (s.tags.size() != s.tokens.size())
      raise(errc::parse, "tag/token mismatch in " + s.sentence_id);
    std::uint32_t prev_end = 0;
    for (const auto& t : s.tokens) {
      if (t.char_start >= t.char_end || t.char_start < prev_end)
        raise(errc::parse, "token spans out of order in " + s.sentence_id);
      prev_end = t.char_end;
    }
    if (!is_valid_bio(s.tags))
      raise(errc::invalid_bio, "invalid tag sequence in " + s.sentence_id);
    const auto text_len =
        s.tokens.empty() ? 0u : s.tokens.back().char_end;
    const entity_mention* prev = nullptr;
    for (const auto& m : s.gold) {
      if (prev && m.char_start < prev->char_end)
        raise(errc::parse, "overlapping gold mentions in " + s.sentence_id);
      check_mention_tree(m, text_len, s.sentence_id);
      prev = &m;
    }
  }
}

corpus_statistics corpus_stats(const corpus& c) {
  corpus_statistics st;
  for (const auto& s : c.sentences) {
    auto& bucket = st.by_split[static_cast<std::size_t>(s.part)];
    bucket.sentences += 1;
    st.total.sentences += 1;
    for (const label t : s.tags) {
      if (t == label::b_per) { bucket.b_per += 1; st.total.b_per += 1; }
      if (t == label::b_loc) { bucket.b_loc += 1; st.total.b_loc += 1; }
    }
  }
  return st;
}

}  // namespace nerkit
