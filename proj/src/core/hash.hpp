#pragma once

#include <cstdint>
#include <string_view>

namespace nerkit {

/// 64-bit FNV-1a.  The one string hash used everywhere a stable, portable
/// value is needed (feature hashing, cache fingerprints).
inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char b : s) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_byte(std::uint8_t b, std::uint64_t h) {
  h ^= b;
  h *= 0x100000001b3ull;
  return h;
}

}  // namespace nerkit
