#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "qs2lab/schemes/ring.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

// Public invertible encoding of messages before they are added to b*d. At
// q = 2 it is a rewiring of the n message bits (tau = 0), so it is linear over
// XOR and Bit(Encode(m)) = pi(m).
struct EncodeParams {
  std::vector<unsigned> wires;  // output bit i takes input bit wires[i]
  unsigned tau = 0;
  unsigned q = 2;

  static EncodeParams identity(unsigned n) {
    EncodeParams p;
    p.wires.resize(n);
    std::iota(p.wires.begin(), p.wires.end(), 0U);
    return p;
  }

  static EncodeParams seeded(unsigned n, std::uint64_t seed) {
    EncodeParams p = identity(n);
    Rng rng(seed);
    for (unsigned i = n; i > 1; --i) std::swap(p.wires[i - 1], p.wires[uniform_below(rng, i)]);
    return p;
  }

  unsigned width() const noexcept { return static_cast<unsigned>(wires.size()); }

  Word apply(Word m) const {
    Word out = 0;
    for (unsigned i = 0; i < width(); ++i) out |= ((m >> wires[i]) & 1U) << i;
    return out;
  }

  Word invert(Word y) const {
    Word out = 0;
    for (unsigned i = 0; i < width(); ++i) out |= ((y >> i) & 1U) << wires[i];
    return out;
  }

  void validate() const {
    std::vector<bool> seen(width(), false);
    for (unsigned w : wires) {
      if (w >= width() || seen[w]) fail(Errc::NotABijection, "encode wiring is not a permutation");
      seen[w] = true;
    }
    if (q != 2) fail(Errc::UnsupportedModulus, "only q = 2 is instantiated");
    if (tau != 0) fail(Errc::InvalidArgument, "q = 2 encoding has tau = 0");
  }
};

enum class ErrorProfile { SparseLowWeight, Dense, Noiseless };

inline std::string to_string(ErrorProfile p) {
  switch (p) {
    case ErrorProfile::SparseLowWeight: return "sparse";
    case ErrorProfile::Dense: return "dense";
    case ErrorProfile::Noiseless: return "noiseless";
  }
  return "?";
}

inline ErrorProfile parse_error_profile(const std::string& s) {
  if (s == "sparse") return ErrorProfile::SparseLowWeight;
  if (s == "dense") return ErrorProfile::Dense;
  if (s == "noiseless") return ErrorProfile::Noiseless;
  fail(Errc::ConfigError, "unknown error profile '" + s + "'");
}

struct LweParams {
  unsigned n = 4;
  unsigned q = 2;
  ErrorProfile profile = ErrorProfile::SparseLowWeight;
  EncodeParams encode = EncodeParams::identity(4);
};

// Bits of randomness consumed per derived error polynomial.
inline unsigned lwe_error_chunk(unsigned n, ErrorProfile profile) {
  switch (profile) {
    case ErrorProfile::SparseLowWeight: return static_cast<unsigned>(std::bit_width(n));
    case ErrorProfile::Dense: return n;
    case ErrorProfile::Noiseless: return 0;
  }
  return 0;
}

// Sparse: the chunk names a single monomial x^(v-1), or zero.
inline Word lwe_error_from_chunk(Word chunk, unsigned n, ErrorProfile profile) {
  switch (profile) {
    case ErrorProfile::SparseLowWeight: return (chunk >= 1 && chunk <= n) ? Word{1} << (chunk - 1) : 0;
    case ErrorProfile::Dense: return chunk & low_mask(n);
    case ErrorProfile::Noiseless: return 0;
  }
  return 0;
}

// pk = a || b, sk = s; r = e1 || e2 || d; c = c1 || c2.
inline ClassicalScheme toy_lwe(const LweParams& p) {
  if (p.q != 2) fail(Errc::UnsupportedModulus, "toy LWE supports q = 2 only, got q = " + std::to_string(p.q));
  if (p.n < 2 || p.n > 6) fail(Errc::InvalidArgument, "toy LWE dimension must be in [2, 6]");
  if (p.encode.width() != p.n) fail(Errc::WidthMismatch, "encode wiring must have n bits");
  p.encode.validate();

  const unsigned n = p.n;
  const unsigned chunk = lwe_error_chunk(n, p.profile);
  const ErrorProfile profile = p.profile;
  const EncodeParams encode = p.encode;
  const Word mask = low_mask(n);

  ClassicalScheme s;
  s.name = "toy-lwe";
  s.widths = {2 * chunk + n, n, 2 * n, 2 * n, n};
  s.parts = {{"c1", n}, {"c2", n}};
  s.kgen = [=](Word w) {
    const Word a = w & mask;
    const Word sec = (w >> n) & mask;
    const Word e = lwe_error_from_chunk((w >> (2 * n)) & low_mask(chunk), n, profile);
    const Word b = gf2::mul(a, sec, n) ^ e;
    return Keypair{(a << n) | b, sec};
  };
  auto split_r = [=](Word r, Word& e1, Word& e2, Word& d) {
    d = r & mask;
    e2 = lwe_error_from_chunk((r >> n) & low_mask(chunk), n, profile);
    e1 = lwe_error_from_chunk((r >> (n + chunk)) & low_mask(chunk), n, profile);
  };
  s.enc = [=](Word pk, Word m, Word r) {
    Word e1, e2, d;
    split_r(r, e1, e2, d);
    const Word a = pk >> n, b = pk & mask;
    const Word c1 = gf2::mul(b, d, n) ^ e1 ^ encode.apply(m);
    const Word c2 = gf2::mul(a, d, n) ^ e2;
    return (c1 << n) | c2;
  };
  s.dec = [=](Word sk, Word c) {
    const Word c1 = c >> n, c2 = c & mask;
    return encode.invert(c1 ^ gf2::mul(c2, sk, n));
  };
  s.rec = [=](Word pk, Word r, Word c) {
    Word e1, e2, d;
    split_r(r, e1, e2, d);
    const Word b = pk & mask;
    return encode.invert((c >> n) ^ gf2::mul(b, d, n) ^ e1);
  };
  return s;
}

}  // namespace qs2lab::schemes
