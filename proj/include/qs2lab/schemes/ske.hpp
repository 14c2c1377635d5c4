#pragma once

#include <memory>

#include "qs2lab/schemes/random_function.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

struct OtpPrfParams {
  unsigned key_bits = 2;
  unsigned m_bits = 1;
  unsigned r_bits = 2;
  std::uint64_t seed = 0;
};

// Enc_k(m; r) = r || (m ^ F(k || r)).
inline SkeScheme ske_otp_prf(const OtpPrfParams& p) {
  if (p.key_bits < 1 || p.m_bits < 1 || p.key_bits + p.r_bits > 20 || p.m_bits > 8) {
    fail(Errc::InvalidArgument, "ske-otp-prf widths out of range");
  }
  const unsigned kb = p.key_bits, mb = p.m_bits, rb = p.r_bits;
  const SeededFunction f(derive_seed(p.seed, 0x46), kb + rb, mb);

  SkeScheme s;
  s.name = "ske-otp-prf";
  s.widths = {kb, mb, rb + mb, rb};
  if (rb > 0) s.parts.push_back({"cr", rb});
  s.parts.push_back({"cm", mb});
  s.kgen = [kb](Word w) { return w & low_mask(kb); };
  s.enc = [=](Word key, Word m, Word r) { return (r << mb) | (m ^ f(concat(key, r, rb))); };
  s.dec = [=](Word key, Word c) {
    const Word r = c >> mb;
    return (c & low_mask(mb)) ^ f(concat(key, r, rb));
  };
  return s;
}

struct RandomPermParams {
  unsigned key_bits = 2;
  unsigned m_bits = 1;
  unsigned nonce_bits = 6;
  std::uint64_t seed = 0;
};

// Enc_k(m; r) = sigma_k(m || r) for a uniformly random permutation sigma_k of
// the (m_bits + nonce_bits)-bit strings. With nonce_bits = 0 this is the
// deterministic cipher, which a Hadamard test still breaks because every
// permutation fixes the uniform superposition.
inline SkeScheme ske_random_perm(const RandomPermParams& p) {
  if (p.m_bits < 1 || p.m_bits > 4) fail(Errc::InvalidArgument, "ske-random-perm message width must be in [1, 4]");
  if (p.key_bits < 1 || p.key_bits > 8 || p.nonce_bits > 8) {
    fail(Errc::InvalidArgument, "ske-random-perm widths out of range");
  }
  const unsigned mb = p.m_bits, rb = p.nonce_bits, kb = p.key_bits;
  auto family = std::make_shared<PermutationFamily>(derive_seed(p.seed, 0x50), mb + rb);

  SkeScheme s;
  s.name = "ske-random-perm";
  s.widths = {kb, mb, mb + rb, rb};
  s.parts = {{"cm", mb + rb}};
  s.kgen = [kb](Word w) { return w & low_mask(kb); };
  s.enc = [=](Word key, Word m, Word r) { return family->forward(key, concat(m, r, rb)); };
  s.dec = [=](Word key, Word c) { return family->inverse(key, c) >> rb; };
  return s;
}

}  // namespace qs2lab::schemes
