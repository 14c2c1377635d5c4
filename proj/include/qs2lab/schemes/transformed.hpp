#pragma once

#include <memory>

#include "qs2lab/schemes/random_function.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::schemes {

inline constexpr unsigned kTdfHandleBits = 4;

struct TransformedParams {
  std::uint64_t seed = 0;
  bool identity_tdf = false;
};

// Messages are pushed through a trapdoor permutation before inner encryption.
// pk = pk_e || f, sk = sk_e || f where f is a handle selecting the permutation;
// the stand-in carries no one-wayness. No Rec is declared. Keygen skips handles
// whose permutation is the identity so the inner Rec never inverts the
// transform by accident.
inline ClassicalScheme transformed_scheme(const ClassicalScheme& inner_scheme, const TransformedParams& p) {
  if (!inner_scheme.has_rec()) fail(Errc::NotRecoverable, "transformed scheme needs a recoverable inner scheme");
  auto inner = std::make_shared<const ClassicalScheme>(inner_scheme);
  const unsigned mb = inner->widths.m_bits;
  const unsigned hb = kTdfHandleBits;
  auto family = std::make_shared<PermutationFamily>(derive_seed(p.seed, 0x54), mb);
  const bool identity = p.identity_tdf;

  auto forward = [=](Word pk, Word m) { return identity ? m : family->forward(pk & low_mask(hb), m); };
  auto inverse = [=](Word sk, Word y) { return identity ? y : family->inverse(sk & low_mask(hb), y); };
  auto is_identity = [=](Word handle) {
    for (Word m = 0; m < dimension_of(mb); ++m) {
      if (family->forward(handle, m) != m) return false;
    }
    return true;
  };

  ClassicalScheme s;
  s.name = "transformed";
  s.widths = {inner->widths.r_bits, mb, inner->widths.c_bits, inner->widths.pk_bits + hb,
              inner->widths.sk_bits + hb};
  s.parts = inner->parts;
  s.kgen = [=](Word w) {
    const Keypair e = inner->kgen(w);
    Word handle = splitmix64(derive_seed(w, 0x66)) & low_mask(hb);
    for (Word step = 0; step < dimension_of(hb) && !identity && is_identity(handle); ++step) {
      handle = (handle + 1) & low_mask(hb);
    }
    return Keypair{(e.pk << hb) | handle, (e.sk << hb) | handle};
  };
  s.enc = [=](Word pk, Word m, Word r) { return inner->enc(pk >> hb, forward(pk, m), r); };
  s.dec = [=](Word sk, Word c) { return inverse(sk, inner->dec(sk >> hb, c)); };

  auto layer = std::make_shared<TrapdoorLayer>();
  layer->inner = inner;
  layer->inner_pk = [hb](Word pk) { return pk >> hb; };
  layer->forward = forward;
  layer->inverse = inverse;
  s.trapdoor = std::move(layer);
  return s;
}

}  // namespace qs2lab::schemes
