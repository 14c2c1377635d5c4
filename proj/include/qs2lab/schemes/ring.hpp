#pragma once

#include <optional>
#include <vector>

#include "qs2lab/core/bits.hpp"

// Arithmetic in Z_2[x]/(x^n + 1). A polynomial is a word whose bit i is the
// coefficient of x^i; addition is XOR and multiplication is cyclic carry-less
// convolution.
namespace qs2lab::schemes::gf2 {

constexpr Word add(Word a, Word b) { return a ^ b; }

constexpr Word mul(Word a, Word b, unsigned n) {
  Word out = 0;
  for (unsigned i = 0; i < n; ++i) {
    if (!((a >> i) & 1U)) continue;
    // b * x^i with x^n = 1: rotate left by i within n bits.
    const Word rotated = i == 0 ? b : ((b << i) | (b >> (n - i))) & low_mask(n);
    out ^= rotated;
  }
  return out & low_mask(n);
}

// Multiplicative inverse by search over the 2^n ring elements (n <= 6 here).
inline std::optional<Word> inverse(Word a, unsigned n) {
  for (Word c = 1; c < dimension_of(n); ++c) {
    if (mul(a, c, n) == 1) return c;
  }
  return std::nullopt;
}

}  // namespace qs2lab::schemes::gf2
