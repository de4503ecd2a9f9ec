#include "core/collection.hpp"

#include <filesystem>
#include <unordered_set>

#include "core/binio.hpp"
#include "core/error.hpp"
#include "core/fsio.hpp"
#include "core/parallel.hpp"
#include "core/utf8.hpp"

namespace nerkit {

const document* document_collection::find(const std::string& doc_id) const {
  for (const auto& d : docs)
    if (d.doc_id == doc_id) return &d;
  return nullptr;
}

std::uint64_t document_collection::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;  // separator
    h *= 0x100000001b3ull;
  };
  for (const auto& d : docs) {
    mix(d.doc_id);
    mix(d.language);
    mix(d.text);
  }
  return h;
}

namespace {

void segment(document& d, const abbreviation_set& abbrev) {
  d.chars = utf8::decode(d.text);
  d.sentences.clear();
  d.tokens.clear();
  d.sentence_token_begin.clear();
  for (const span raw : split_sentences(d.chars, abbrev)) {
    // trim surrounding whitespace so sentence text is clean
    std::uint32_t s = raw.start, e = raw.end;
    while (s < e && utf8::is_space(d.chars[s])) ++s;
    while (e > s && utf8::is_space(d.chars[e - 1])) --e;
    if (s == e) continue;
    d.sentence_token_begin.push_back(
        static_cast<std::uint32_t>(d.tokens.size()));
    d.sentences.push_back({s, e});
    auto toks = tokenize(d.chars.substr(s, e - s));
    for (auto& t : toks) {
      t.char_start += s;
      t.char_end += s;
      d.tokens.push_back(std::move(t));
    }
  }
  d.sentence_token_begin.push_back(static_cast<std::uint32_t>(d.tokens.size()));
}

}  // namespace

document_collection load_collection(const std::string& manifest_path,
                                    const abbreviation_set& abbrev,
                                    std::size_t jobs) {
  const auto base = std::filesystem::path(manifest_path).parent_path();
  const auto lines = split_lines(read_text_file(manifest_path));

  document_collection col;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto f = split_tsv(lines[i]);
    if (f.size() != 3 || f[0].empty() || f[2].empty())
      raise(errc::parse, manifest_path + ":" + std::to_string(i + 1) +
                             ": expected <doc_id>\\t<language>\\t<path>");
    if (!seen.insert(f[0]).second)
      raise(errc::duplicate_doc_id, "doc id '" + f[0] + "' listed twice");
    document d;
    d.doc_id = f[0];
    d.language = f[1].empty() ? "unknown" : f[1];
    d.text = (base / f[2]).string();  // path stashed here until loaded below
    col.docs.push_back(std::move(d));
  }

  parallel_for(col.docs.size(), jobs, [&](std::size_t i) {
    document& d = col.docs[i];
    d.text = read_text_file(d.text);
    segment(d, abbrev);
  });
  return col;
}

void save_collection_cache(const document_collection& c,
                           const std::string& path) {
  bin_writer w(path);
  w.magic("NKCL");
  w.u32(1);  // format version
  w.u64(c.docs.size());
  for (const auto& d : c.docs) {
    w.str(d.doc_id);
    w.str(d.language);
    w.str(d.text);
    w.u64(d.sentences.size());
    for (const span s : d.sentences) {
      w.u32(s.start);
      w.u32(s.end);
    }
    w.u64(d.tokens.size());
    for (const auto& t : d.tokens) {  // text recoverable from offsets
      w.u32(t.char_start);
      w.u32(t.char_end);
    }
    w.u64(d.sentence_token_begin.size());
    for (const std::uint32_t v : d.sentence_token_begin) w.u32(v);
  }
  w.finish(path);
}

document_collection load_collection_cache(const std::string& path) {
  bin_reader r(path);
  r.expect_magic("NKCL");
  const std::uint32_t version = r.u32();
  if (version != 1)
    raise(errc::parse, path + ": unsupported format version " +
                           std::to_string(version));
  document_collection c;
  const std::uint64_t ndocs = r.u64();
  c.docs.resize(ndocs);
  for (auto& d : c.docs) {
    d.doc_id = r.str();
    d.language = r.str();
    d.text = r.str();
    d.chars = utf8::decode(d.text);
    d.sentences.resize(r.u64());
    for (auto& s : d.sentences) {
      s.start = r.u32();
      s.end = r.u32();
    }
    d.tokens.resize(r.u64());
    for (auto& t : d.tokens) {
      t.char_start = r.u32();
      t.char_end = r.u32();
      if (t.char_end > d.chars.size() || t.char_start >= t.char_end)
        raise(errc::parse, path + ": token span out of range");
      t.text = utf8::encode(std::u32string_view(d.chars).substr(
          t.char_start, t.char_end - t.char_start));
    }
    d.sentence_token_begin.resize(r.u64());
    for (auto& v : d.sentence_token_begin) v = r.u32();
    if (d.sentence_token_begin.size() != d.sentences.size() + 1)
      raise(errc::parse, path + ": sentence table corrupt");
  }
  return c;
}

std::size_t sentence_at(const document& d, std::uint32_t pos) {
  for (std::size_t i = 0; i < d.sentences.size(); ++i) {
    const std::uint32_t limit = i + 1 < d.sentences.size()
                                    ? d.sentences[i + 1].start
                                    : d.sentences[i].end;
    if (pos < limit) return i;
  }
  raise(errc::span_out_of_range,
        "position " + std::to_string(pos) + " past the end of " + d.doc_id);
}

}  // namespace nerkit
