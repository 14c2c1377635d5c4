#pragma once

#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

// KEM-DEM composition. r = r1 || r2 || r3 with r1 the SKE key draw, c = c1 || c2
// with c1 = SKE.Enc_k(m; r2) and c2 = PKE.Enc_pk(k; r3). The SKE key is
// zero-extended into the PKE message space.
inline ClassicalScheme hybrid_pke(const ClassicalScheme& pke, const SkeScheme& ske) {
  if (ske.widths.key_bits > pke.widths.m_bits) {
    fail(Errc::WidthMismatch, "SKE key (" + std::to_string(ske.widths.key_bits) +
                                  " bits) does not fit the PKE message space (" +
                                  std::to_string(pke.widths.m_bits) + " bits)");
  }
  const unsigned k1 = ske.widths.key_bits, r2b = ske.widths.r_bits, r3b = pke.widths.r_bits;
  const unsigned c1b = ske.widths.c_bits, c2b = pke.widths.c_bits;
  const auto pke_enc = pke.enc;
  const auto pke_dec = pke.dec;
  const auto ske_kgen = ske.kgen;
  const auto ske_enc = ske.enc;
  const auto ske_dec = ske.dec;
  const Word kmask = low_mask(ske.widths.key_bits);

  ClassicalScheme s;
  s.name = "hybrid";
  s.widths = {k1 + r2b + r3b, ske.widths.m_bits, c1b + c2b, pke.widths.pk_bits, pke.widths.sk_bits};
  s.parts = {{"c1", c1b}, {"c2", c2b}};
  s.kgen = pke.kgen;
  s.enc = [=](Word pk, Word m, Word r) {
    const Word r1 = r >> (r2b + r3b);
    const Word r2 = (r >> r3b) & low_mask(r2b);
    const Word r3 = r & low_mask(r3b);
    const Word key = ske_kgen(r1);
    return concat(ske_enc(key, m, r2), pke_enc(pk, key, r3), c2b);
  };
  s.dec = [=](Word sk, Word c) {
    const Word key = pke_dec(sk, c & low_mask(c2b)) & kmask;
    return ske_dec(key, c >> c2b);
  };
  s.rec = [=](Word, Word r, Word c) { return ske_dec(ske_kgen(r >> (r2b + r3b)), c >> c2b); };
  check_parts(s.name, s.parts, s.widths.c_bits);
  return s;
}

}  // namespace qs2lab::schemes
