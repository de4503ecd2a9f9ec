#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace nerkit {

/// Little-endian binary readers/writers so persisted files are identical
/// across platforms.  All on-disk integers are fixed width.
struct bin_writer {
  std::ofstream out;

  explicit bin_writer(const std::string& path)
      : out(path, std::ios::binary | std::ios::trunc) {
    if (!out) raise(errc::io, "cannot write " + path);
  }

  void u8(std::uint8_t v) { out.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void magic(const char m[5]) { out.write(m, 4); }

  void finish(const std::string& path) {
    out.flush();
    if (!out) raise(errc::io, "write failed: " + path);
  }
};

struct bin_reader {
  std::ifstream in;
  std::string path;

  explicit bin_reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) raise(errc::missing_file, "no such file: " + p);
  }

  std::uint8_t u8() {
    int c = in.get();
    if (c == EOF) raise(errc::parse, path + ": truncated");
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    if (n > (1ull << 32)) raise(errc::parse, path + ": absurd string length");
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::uint64_t>(in.gcount()) != n)
      raise(errc::parse, path + ": truncated");
    return s;
  }
  void expect_magic(const char m[5]) {
    char got[4];
    in.read(got, 4);
    if (in.gcount() != 4 || std::string(got, 4) != std::string(m, 4))
      raise(errc::parse, path + ": wrong file type");
  }
};

}  // namespace nerkit
