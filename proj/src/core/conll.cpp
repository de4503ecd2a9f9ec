#include "core/conll.hpp"

#include <algorithm>
#include <filesystem>
#include <unordered_map>

#include "core/bio.hpp"
#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/utf8.hpp"

namespace nerkit {

namespace {

[[noreturn]] void bad_line(const std::string& path, std::size_t line_no,
                           const std::string& what) {
  raise(errc::parse, path + ":" + std::to_string(line_no) + ": " + what);
}

// "key=value" with a fixed expected key, or a parse failure.
std::string take_field(const std::string& part, const char* key,
                       const std::string& path, std::size_t line_no) {
  const std::string prefix = std::string(key) + "=";
  if (part.rfind(prefix, 0) != 0)
    bad_line(path, line_no, "expected " + prefix + "..., got '" + part + "'");
  return part.substr(prefix.size());
}

void rebuild_text(annotated_sentence& s) {
  std::string text;
  std::uint32_t pos = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i > 0) {
      text += ' ';
      pos += 1;
    }
    s.tokens[i].char_start = pos;
    pos += static_cast<std::uint32_t>(utf8::length(s.tokens[i].text));
    s.tokens[i].char_end = pos;
    text += s.tokens[i].text;
  }
  s.text = std::move(text);
}

}  // namespace

corpus read_corpus(const std::string& path) {
  const auto lines = split_lines(read_text_file(path));
  corpus c;
  c.name = std::filesystem::path(path).stem().string();

  annotated_sentence cur;
  bool in_sentence = false;
  auto flush = [&] {
    if (!in_sentence) return;
    rebuild_text(cur);
    c.sentences.push_back(std::move(cur));
    cur = annotated_sentence{};
    in_sentence = false;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t line_no = i + 1;
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("# id=", 0) != 0) continue;  // provenance etc.
      flush();
      std::vector<std::string> parts;
      std::size_t pos = 2;
      while (pos < line.size()) {
        std::size_t sp = line.find(' ', pos);
        if (sp == std::string::npos) sp = line.size();
        if (sp > pos) parts.push_back(line.substr(pos, sp - pos));
        pos = sp + 1;
      }
      if (parts.size() != 4)
        bad_line(path, line_no, "header needs id/doc/lang/split");
      cur.sentence_id = take_field(parts[0], "id", path, line_no);
      cur.doc_id = take_field(parts[1], "doc", path, line_no);
      cur.language = take_field(parts[2], "lang", path, line_no);
      cur.part = split_from(take_field(parts[3], "split", path, line_no));
      if (cur.sentence_id.empty()) bad_line(path, line_no, "empty sentence id");
      in_sentence = true;
      continue;
    }
    if (!in_sentence) bad_line(path, line_no, "token line before any header");
    const auto fields = split_tsv(line);
    if (fields.size() != 2 || fields[0].empty())
      bad_line(path, line_no, "expected <token>\\t<tag>");
    utf8::decode(fields[0]);  // reject broken encodings early
    token t;
    t.text = fields[0];
    cur.tokens.push_back(std::move(t));
    cur.tags.push_back(label_from(fields[1]));
  }
  flush();
  validate_corpus(c);
  return c;
}

void write_corpus(const corpus& c, const std::string& path,
                  std::uint64_t seed) {
  auto out = open_output(path);
  out << "# generator=nerkit seed=" << seed << "\n";
  for (const auto& s : c.sentences) {
    out << "# id=" << s.sentence_id << " doc=" << s.doc_id
        << " lang=" << s.language << " split=" << split_name(s.part) << "\n";
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
      out << s.tokens[i].text << '\t' << label_name(s.tags[i]) << "\n";
    out << "\n";
  }
  finish_output(out, path);
}

namespace {

struct sidecar_record {
  entity_type type;
  std::uint32_t start, end;
  long parent;
};

entity_mention build_tree(const std::vector<sidecar_record>& records,
                          const std::vector<std::vector<std::size_t>>& kids,
                          std::size_t i) {
  entity_mention m;
  m.type = records[i].type;
  m.char_start = records[i].start;
  m.char_end = records[i].end;
  for (std::size_t k : kids[i]) m.nested.push_back(build_tree(records, kids, k));
  std::sort(m.nested.begin(), m.nested.end(),
            [](const entity_mention& a, const entity_mention& b) {
              return a.char_start < b.char_start;
            });
  return m;
}

}  // namespace

void attach_gold(corpus& c, const std::string& sidecar_path) {
  std::unordered_map<std::string, annotated_sentence*> by_id;
  for (auto& s : c.sentences) by_id[s.sentence_id] = &s;

  // records grouped per sentence, in file order
  std::unordered_map<std::string, std::vector<sidecar_record>> grouped;
  std::vector<std::string> order;
  const auto lines = split_lines(read_text_file(sidecar_path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_tsv(line);
    if (f.size() != 5) bad_line(sidecar_path, i + 1, "expected 5 fields");
    if (!by_id.count(f[0]))
      bad_line(sidecar_path, i + 1, "unknown sentence id " + f[0]);
    sidecar_record r;
    r.type = entity_type_from(f[1]);
    try {
      r.start = static_cast<std::uint32_t>(std::stoul(f[2]));
      r.end = static_cast<std::uint32_t>(std::stoul(f[3]));
      r.parent = std::stol(f[4]);
    } catch (const std::exception&) {
      bad_line(sidecar_path, i + 1, "bad number");
    }
    auto& bucket = grouped[f[0]];
    if (r.parent != -1 &&
        (r.parent < 0 || static_cast<std::size_t>(r.parent) >= bucket.size()))
      bad_line(sidecar_path, i + 1, "parent must precede child");
    if (bucket.empty()) order.push_back(f[0]);
    bucket.push_back(r);
  }

  for (const auto& sid : order) {
    const auto& records = grouped[sid];
    annotated_sentence& s = *by_id[sid];
    // alignment: every span must start and end on token boundaries
    for (const auto& r : records) {
      bool start_ok = false, end_ok = false;
      for (const auto& t : s.tokens) {
        start_ok = start_ok || t.char_start == r.start;
        end_ok = end_ok || t.char_end == r.end;
      }
      if (!start_ok || !end_ok)
        raise(errc::parse, "gold span not token-aligned in " + sid);
    }
    std::vector<std::vector<std::size_t>> kids(records.size());
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].parent == -1)
        roots.push_back(i);
      else
        kids[static_cast<std::size_t>(records[i].parent)].push_back(i);
    }
    s.gold.clear();
    for (std::size_t r : roots) s.gold.push_back(build_tree(records, kids, r));
    std::sort(s.gold.begin(), s.gold.end(),
              [](const entity_mention& a, const entity_mention& b) {
                return a.char_start < b.char_start;
              });
  }
  validate_corpus(c);
}

namespace {

// Offsets of each token under the "tokens joined by single spaces" layout
// a reloaded corpus will have.
std::vector<span> rejoined_spans(const annotated_sentence& s) {
  std::vector<span> out(s.tokens.size());
  std::uint32_t pos = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i > 0) pos += 1;
    out[i].start = pos;
    pos += static_cast<std::uint32_t>(utf8::length(s.tokens[i].text));
    out[i].end = pos;
  }
  return out;
}

void emit_sidecar(std::ofstream& out, const annotated_sentence& s,
                  const std::vector<span>& rejoined, const entity_mention& m,
                  long parent, std::size_t& counter) {
  const auto [first, last] = token_range(s.tokens, {m.char_start, m.char_end});
  const std::size_t self = counter++;
  out << s.sentence_id << '\t' << entity_type_name(m.type) << '\t'
      << rejoined[first].start << '\t' << rejoined[last - 1].end << '\t'
      << parent << "\n";
  for (const auto& child : m.nested)
    emit_sidecar(out, s, rejoined, child, static_cast<long>(self), counter);
}

}  // namespace

void write_gold_sidecar(const corpus& c, const std::string& path,
                        std::uint64_t seed) {
  auto out = open_output(path);
  out << "# generator=nerkit seed=" << seed << "\n";
  for (const auto& s : c.sentences) {
    if (s.gold.empty()) continue;
    std::size_t counter = 0;
    const auto rejoined = rejoined_spans(s);
    for (const auto& m : s.gold) emit_sidecar(out, s, rejoined, m, -1, counter);
  }
  finish_output(out, path);
}

void write_review(const corpus& c, const std::string& path,
                  std::uint64_t seed) {
  auto out = open_output(path);
  out << "# generator=nerkit seed=" << seed << "\n";
  for (const auto& s : c.sentences) {
    if (s.part != split::test) continue;
    out << "# id=" << s.sentence_id << " doc=" << s.doc_id
        << " lang=" << s.language << "\n";
    const auto mentions = parse_bio(s.tags, s.tokens);
    const auto chars = utf8::decode(s.text);
    std::string rendered;
    std::uint32_t pos = 0;
    for (const auto& m : mentions) {
      rendered += utf8::encode(
          std::u32string_view(chars).substr(pos, m.char_start - pos));
      rendered += '[';
      rendered += entity_type_name(m.type);
      rendered += ' ';
      rendered += utf8::encode(std::u32string_view(chars).substr(
          m.char_start, m.char_end - m.char_start));
      rendered += ']';
      pos = m.char_end;
    }
    rendered += utf8::encode(std::u32string_view(chars).substr(pos));
    out << rendered << "\n\n";
  }
  finish_output(out, path);
}

}  // namespace nerkit
