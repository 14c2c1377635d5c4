#pragma once

#include <memory>

#include "qs2lab/schemes/random_function.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

struct AlmostConstantParams {
  unsigned m_bits = 2;
  unsigned r_bits = 2;
  std::uint64_t seed = 0;
};

// Every key encrypts to 0 except under one randomness value rbar (= pk), where
// Enc is 1 || sigma(m). Dec inverts sigma when the flag bit is set and
// otherwise returns a fixed pseudorandom rejection value.
inline ClassicalScheme almost_constant_scheme(const AlmostConstantParams& p) {
  if (p.m_bits < 1 || p.m_bits > 4) fail(Errc::InvalidArgument, "almost-constant message width must be in [1, 4]");
  if (p.r_bits < 1 || p.r_bits > 8) fail(Errc::InvalidArgument, "almost-constant randomness width must be in [1, 8]");
  const unsigned mb = p.m_bits, rb = p.r_bits;
  auto sigma = std::make_shared<PermutationFamily>(derive_seed(p.seed, 0x53), mb);
  const SeededFunction reject(derive_seed(p.seed, 0x52), mb + 1, mb);
  const Word flag = Word{1} << mb;

  ClassicalScheme s;
  s.name = "almost-constant";
  s.widths = {rb, mb, mb + 1, rb, rb};
  s.parts = {{"c", mb + 1}};
  s.kgen = [rb](Word w) {
    const Word rbar = w & low_mask(rb);
    return Keypair{rbar, rbar};
  };
  s.enc = [=](Word pk, Word m, Word r) { return r == pk ? flag | sigma->forward(0, m) : Word{0}; };
  s.dec = [=](Word, Word c) { return (c & flag) ? sigma->inverse(0, c & low_mask(mb)) : reject(c); };
  return s;
}

}  // namespace qs2lab::schemes
