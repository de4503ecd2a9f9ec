#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace nerkit {

/// Deterministic 64-bit generator (splitmix64).  Used for every seeded
/// operation so that outputs are identical across platforms and standard
/// library versions — std::mt19937 + std::shuffle would not guarantee that.
struct splitmix64 {
  std::uint64_t state;

  explicit splitmix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound) by modulo; bias is negligible for the
  /// corpus sizes involved and keeps the stream layout simple.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

/// Fisher–Yates with an explicit loop (high-to-low) so the permutation for a
/// given seed is pinned down by this code, not by library internals.
template <typename T>
void seeded_shuffle(std::vector<T>& items, splitmix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  splitmix64 rng(seed);
  seeded_shuffle(items, rng);
}

}  // namespace nerkit
