#pragma once

#include <cstdint>
#include <random>

#include "qs2lab/core/bits.hpp"

namespace qs2lab {

// All sampling goes through an explicitly passed stream. mt19937_64 output is
// fixed by the standard, and every helper below only consumes raw words, so a
// (seed, call sequence) pair replays bit-exactly on any conforming toolchain.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Word uniform_bits(Rng& rng, unsigned width) {
  if (width == 0) return 0;
  return rng() & low_mask(width);
}

inline int coin(Rng& rng) { return static_cast<int>(rng() >> 63); }

inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection on the top bits.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace qs2lab
