#pragma once

#include "qs2lab/schemes/random_function.hpp"
#include "qs2lab/schemes/ring.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

struct RolloParams {
  unsigned m_bits = 1;  // l
  unsigned code_bits = 3;  // k
  std::uint64_t seed = 0;
};

inline constexpr int kRolloKeyRetries = 64;

// Key draw: (x, y) from a stream derived from the keygen word, redrawn until x
// is invertible in Z_2[x]/(x^k + 1).
inline Keypair rollo_keygen(Word w, unsigned k) {
  for (int attempt = 0; attempt < kRolloKeyRetries; ++attempt) {
    const Word v = splitmix64(derive_seed(w, static_cast<std::uint64_t>(attempt)));
    const Word x = v & low_mask(k);
    const Word y = (v >> k) & low_mask(k);
    if (auto xi = gf2::inverse(x, k)) {
      return Keypair{gf2::mul(*xi, y, k), (x << k) | y};
    }
  }
  fail(Errc::NonInvertibleKeyDraw, "no invertible x after " + std::to_string(kRolloKeyRetries) + " draws");
}

// pk = h, sk = x || y, r = e1 || e2, c = c1 || c2 with c1 = m ^ G(e1 || e2),
// c2 = e1 + e2*h. Dec searches for the first (e1', e2') consistent with the
// syndrome x*c2, which is exactly right only when c2 has a unique preimage.
inline ClassicalScheme toy_rollo(const RolloParams& p) {
  if (p.m_bits < 1 || p.m_bits > 4) fail(Errc::InvalidArgument, "toy ROLLO message width must be in [1, 4]");
  if (p.code_bits < 2 || p.code_bits > 6) fail(Errc::InvalidArgument, "toy ROLLO code width must be in [2, 6]");
  const unsigned l = p.m_bits, k = p.code_bits;
  const BalancedFunction g(derive_seed(p.seed, 0x47), 2 * k, l);
  const Word kmask = low_mask(k);

  ClassicalScheme s;
  s.name = "toy-rollo";
  s.widths = {2 * k, l, l + k, k, 2 * k};
  s.parts = {{"c1", l}, {"c2", k}};
  s.kgen = [k](Word w) { return rollo_keygen(w, k); };
  s.enc = [=](Word h, Word m, Word r) {
    const Word e1 = r >> k, e2 = r & kmask;
    const Word c1 = m ^ g(r);
    const Word c2 = e1 ^ gf2::mul(e2, h, k);
    return (c1 << k) | c2;
  };
  s.dec = [=](Word sk, Word c) {
    const Word x = sk >> k, y = sk & kmask;
    const Word c1 = c >> k, c2 = c & kmask;
    const Word syndrome = gf2::mul(x, c2, k);
    for (Word support = 0; support < dimension_of(2 * k); ++support) {
      const Word e1 = support >> k, e2 = support & kmask;
      if ((gf2::mul(x, e1, k) ^ gf2::mul(y, e2, k)) == syndrome) return c1 ^ g(support);
    }
    return c1;  // unreachable for a well-formed key: e1 = c2, e2 = 0 always matches
  };
  s.rec = [=](Word, Word r, Word c) { return (c >> k) ^ g(r); };
  return s;
}

}  // namespace qs2lab::schemes
