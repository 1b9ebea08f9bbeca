#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mlsbm {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent substream seed from a parent seed and a path of
/// stream indices, e.g. derive_seed(seed, {kLayerStream, t}).
constexpr Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(parent ^ 0x6a09e667f3bcc908ULL);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x3c6ef372fe94f82bULL));
  return h;
}

inline Rng make_rng(Seed parent, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(parent, path));
}

}  // namespace mlsbm
