#pragma once

#include <cstdint>
#include <random>

namespace collapse {

using Seed = std::uint64_t;

/// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive
/// independent per-cell / per-purpose seeds from a base seed so that
/// parallel sweep cells never share an RNG stream.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed split: stream k of a base seed.
constexpr Seed derive_seed(Seed base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL));
}

inline std::mt19937_64 make_engine(Seed seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace collapse
