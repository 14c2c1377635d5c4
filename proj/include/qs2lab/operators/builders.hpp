#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qs2lab/operators/operator.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::operators {

using qsim::BasisPermutation;
using qsim::RegisterLayout;
using schemes::ClassicalScheme;
using schemes::Keypair;
using schemes::SkeScheme;

namespace detail {

using EncFn = std::function<Word(Word m, Word r)>;
using UndoFn = std::function<Word(Word r, Word c)>;

inline EncFn counted_enc(const ClassicalScheme& s, Word pk, const std::shared_ptr<Audit>& audit) {
  auto enc = s.enc;
  return [enc, pk, audit](Word m, Word r) {
    audit->enc.fetch_add(1, std::memory_order_relaxed);
    return enc(pk, m, r);
  };
}

inline UndoFn counted_dec(const ClassicalScheme& s, Word sk, const std::shared_ptr<Audit>& audit) {
  auto dec = s.dec;
  return [dec, sk, audit](Word, Word c) {
    audit->dec.fetch_add(1, std::memory_order_relaxed);
    return dec(sk, c);
  };
}

inline UndoFn counted_rec(const ClassicalScheme& s, Word pk, const std::shared_ptr<Audit>& audit) {
  auto rec = s.rec;
  return [rec, pk, audit](Word r, Word c) {
    audit->rec.fetch_add(1, std::memory_order_relaxed);
    return rec(pk, r, c);
  };
}

inline void check_widths(const ClassicalScheme& s) {
  if (s.widths.c_bits < s.widths.m_bits) {
    fail(Errc::WidthMismatch, s.name + ": ciphertext narrower than message, no injective encryption exists");
  }
}

// Canonical type-2 block on index r || m || y (y has C bits):
// y ^= Enc(m; r), then the (m, y) wires swap, then m ^= undo(r, c).
// Output index r || c || z. The swap is free: it is only a change of which bits
// the next stage reads.
struct Type2Block {
  unsigned r_bits, m_bits, c_bits;
  EncFn enc;
  UndoFn undo;

  Word forward(Word i) const {
    const Word y = i & low_mask(c_bits);
    const Word m = (i >> c_bits) & low_mask(m_bits);
    const Word r = i >> (c_bits + m_bits);
    const Word c = y ^ enc(m, r);
    const Word z = m ^ undo(r, c);
    return (((r << c_bits) | c) << m_bits) | z;
  }

  Word inverse(Word o) const {
    const Word z = o & low_mask(m_bits);
    const Word c = (o >> m_bits) & low_mask(c_bits);
    const Word r = o >> (m_bits + c_bits);
    const Word m = z ^ undo(r, c);
    const Word y = c ^ enc(m, r);
    return (((r << m_bits) | m) << c_bits) | y;
  }
};

inline RegisterLayout type2_input_layout(const schemes::PkeWidths& w, unsigned extra_tdf = 0) {
  return RegisterLayout::compact({{"r", w.r_bits},
                                  {"m", w.m_bits},
                                  {"anc", w.c_bits - w.m_bits},
                                  {"work", w.m_bits},
                                  {"tdf", extra_tdf}});
}

inline RegisterLayout type2_output_layout(const schemes::PkeWidths& w, unsigned extra_tdf = 0) {
  return RegisterLayout::compact({{"r", w.r_bits}, {"c", w.c_bits}, {"work", w.m_bits}, {"tdf", extra_tdf}});
}

inline OracleOperator make_operator(OperatorKind kind, Construction construction, BasisPermutation perm,
                                    KeyMaterial km, std::shared_ptr<Audit> audit, const ClassicalScheme& s) {
  return OracleOperator{kind, construction, std::move(perm), km, std::move(audit), s.widths, s.parts};
}

}  // namespace detail

// |r, m, y> -> |r, m, y ^ Enc(m; r)>
inline OracleOperator build_type1_enc(const ClassicalScheme& s, Word pk) {
  auto audit = std::make_shared<Audit>();
  const auto enc = detail::counted_enc(s, pk, audit);
  const unsigned mb = s.widths.m_bits, cb = s.widths.c_bits;
  auto layout = RegisterLayout::compact({{"r", s.widths.r_bits}, {"m", mb}, {"y", cb}});
  auto perm = BasisPermutation::involution(layout, [=](Word i) {
    const Word m = (i >> cb) & low_mask(mb);
    const Word r = i >> (cb + mb);
    return i ^ enc(m, r);
  });
  return detail::make_operator(OperatorKind::Type1Enc, Construction::None, std::move(perm), KeyMaterial::PublicOnly,
                               std::move(audit), s);
}

// |c, z> -> |c, z ^ Dec(c)>
inline OracleOperator build_type1_dec(const ClassicalScheme& s, Word sk) {
  auto audit = std::make_shared<Audit>();
  audit->sk_reads.fetch_add(1);
  const auto dec = detail::counted_dec(s, sk, audit);
  const unsigned mb = s.widths.m_bits;
  auto layout = RegisterLayout::compact({{"c", s.widths.c_bits}, {"z", mb}});
  auto perm = BasisPermutation::involution(layout, [=](Word i) { return i ^ dec(0, i >> mb); });
  return detail::make_operator(OperatorKind::Type1Dec, Construction::None, std::move(perm),
                               KeyMaterial::PublicAndSecret, std::move(audit), s);
}

// |r, c, z> -> |r, c, z ^ Rec(r, c)>
inline OracleOperator build_type1_rec(const ClassicalScheme& s, Word pk) {
  if (!s.has_rec()) fail(Errc::NotRecoverable, s.name + " declares no Rec");
  auto audit = std::make_shared<Audit>();
  const auto rec = detail::counted_rec(s, pk, audit);
  const unsigned mb = s.widths.m_bits, cb = s.widths.c_bits;
  auto layout = RegisterLayout::compact({{"r", s.widths.r_bits}, {"c", cb}, {"z", mb}});
  auto perm = BasisPermutation::involution(layout, [=](Word i) {
    const Word c = (i >> mb) & low_mask(cb);
    const Word r = i >> (mb + cb);
    return i ^ rec(r, c);
  });
  return detail::make_operator(OperatorKind::Type1Rec, Construction::None, std::move(perm), KeyMaterial::PublicOnly,
                               std::move(audit), s);
}

// Enc, swap, Dec-uncompute. Requires Dec(Enc(m; r)) = m on every (m, r) for
// this keypair; the exhaustive check is skipped under Verification::Trusted.
inline OracleOperator build_type2_canonical_perfect(const ClassicalScheme& s, Word pk, Word sk,
                                                    Verification v = Verification::Exhaustive) {
  detail::check_widths(s);
  if (v == Verification::Exhaustive) {
    for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
      for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
        const Word c = s.enc(pk, m, r);
        if (s.dec(sk, c) != m) {
          fail(Errc::NotPerfectlyCorrect, s.name + ": decryption failure at m=" + format_bits(m, s.widths.m_bits) +
                                              " r=" + format_bits(r, s.widths.r_bits));
        }
      }
    }
  }
  auto audit = std::make_shared<Audit>();
  audit->sk_reads.fetch_add(1);
  auto block = std::make_shared<detail::Type2Block>(detail::Type2Block{
      s.widths.r_bits, s.widths.m_bits, s.widths.c_bits, detail::counted_enc(s, pk, audit),
      detail::counted_dec(s, sk, audit)});
  BasisPermutation perm(detail::type2_input_layout(s.widths), detail::type2_output_layout(s.widths),
                        [block](Word i) { return block->forward(i); },
                        [block](Word o) { return block->inverse(o); });
  return detail::make_operator(OperatorKind::Type2Canonical, Construction::Fig2, std::move(perm),
                               KeyMaterial::PublicAndSecret, std::move(audit), s);
}

// Enc, swap, Rec-uncompute. Needs only pk; Dec is never wired in.
inline OracleOperator build_type2_canonical_recoverable(const ClassicalScheme& s, Word pk,
                                                        Verification v = Verification::Exhaustive) {
  if (!s.has_rec()) fail(Errc::NotRecoverable, s.name + " declares no Rec");
  detail::check_widths(s);
  if (v == Verification::Exhaustive) {
    for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
      for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
        if (s.rec(pk, r, s.enc(pk, m, r)) != m) {
          fail(Errc::RecoveryCheckFailed, s.name + ": Rec fails at m=" + format_bits(m, s.widths.m_bits) +
                                              " r=" + format_bits(r, s.widths.r_bits));
        }
      }
    }
  }
  auto audit = std::make_shared<Audit>();
  auto block = std::make_shared<detail::Type2Block>(detail::Type2Block{
      s.widths.r_bits, s.widths.m_bits, s.widths.c_bits, detail::counted_enc(s, pk, audit),
      detail::counted_rec(s, pk, audit)});
  BasisPermutation perm(detail::type2_input_layout(s.widths), detail::type2_output_layout(s.widths),
                        [block](Word i) { return block->forward(i); },
                        [block](Word o) { return block->inverse(o); });
  return detail::make_operator(OperatorKind::Type2Canonical, Construction::Fig3, std::move(perm),
                               KeyMaterial::PublicOnly, std::move(audit), s);
}

// |r, m, y> -> |r, pi(m), y ^ Enc(m; r)>. Reversible for any scheme, isometric
// or not, because pi(m) keeps m recoverable.
inline OracleOperator build_type_pi(const ClassicalScheme& s, Word pk, std::function<Word(Word)> pi,
                                    std::function<Word(Word)> pi_inverse) {
  const unsigned mb = s.widths.m_bits, cb = s.widths.c_bits;
  if (mb > qsim::kMaterializeCap) fail(Errc::CapExceeded, "message space too wide to verify pi");
  std::vector<bool> hit(dimension_of(mb), false);
  for (Word m = 0; m < dimension_of(mb); ++m) {
    const Word y = pi(m);
    if (y >= dimension_of(mb) || hit[y] || pi_inverse(y) != m) {
      fail(Errc::NotABijection, "pi is not a bijection at m=" + format_bits(m, mb));
    }
    hit[y] = true;
  }
  auto audit = std::make_shared<Audit>();
  const auto enc = detail::counted_enc(s, pk, audit);
  auto layout = RegisterLayout::compact({{"r", s.widths.r_bits}, {"m", mb}, {"y", cb}});
  BasisPermutation perm(
      layout,
      [=](Word i) {
        const Word y = i & low_mask(cb);
        const Word m = (i >> cb) & low_mask(mb);
        const Word r = i >> (cb + mb);
        return (((r << mb) | pi(m)) << cb) | (y ^ enc(m, r));
      },
      [=](Word o) {
        const Word y = o & low_mask(cb);
        const Word m = pi_inverse((o >> cb) & low_mask(mb));
        const Word r = o >> (cb + mb);
        return (((r << mb) | m) << cb) | (y ^ enc(m, r));
      });
  return detail::make_operator(OperatorKind::TypePi, Construction::None, std::move(perm), KeyMaterial::PublicOnly,
                               std::move(audit), s);
}

// Trapdoor stage then the recoverable block of the inner scheme. The extra
// `tdf` register (message width) starts and ends at |0...0>:
//   tdf ^= TDF(m); swap(m, tdf); tdf ^= TDF^-1(m-wire); inner Rec-uncompute block.
inline OracleOperator build_type2_transformed(const ClassicalScheme& s, Word pk, Word sk,
                                              Verification v = Verification::Exhaustive) {
  if (!s.trapdoor) fail(Errc::InvalidArgument, s.name + " has no trapdoor layer");
  const auto& layer = *s.trapdoor;
  const ClassicalScheme& inner = *layer.inner;
  if (!inner.has_rec()) fail(Errc::NotRecoverable, "inner scheme " + inner.name + " declares no Rec");
  detail::check_widths(s);
  const unsigned mb = s.widths.m_bits;
  const Word inner_pk = layer.inner_pk(pk);
  if (v == Verification::Exhaustive) {
    for (Word m = 0; m < dimension_of(mb); ++m) {
      const Word y = layer.forward(pk, m);
      if (y > low_mask(mb) || layer.inverse(sk, y) != m) {
        fail(Errc::InconsistentTrapdoor, "TDF inverse disagrees at m=" + format_bits(m, mb));
      }
    }
    for (Word r = 0; r < dimension_of(inner.widths.r_bits); ++r) {
      for (Word m = 0; m < dimension_of(mb); ++m) {
        if (inner.rec(inner_pk, r, inner.enc(inner_pk, m, r)) != m) {
          fail(Errc::RecoveryCheckFailed, inner.name + ": Rec fails at m=" + format_bits(m, mb) +
                                              " r=" + format_bits(r, inner.widths.r_bits));
        }
      }
    }
  }
  auto audit = std::make_shared<Audit>();
  audit->sk_reads.fetch_add(1);
  auto block = std::make_shared<detail::Type2Block>(detail::Type2Block{
      s.widths.r_bits, mb, s.widths.c_bits, detail::counted_enc(inner, inner_pk, audit),
      detail::counted_rec(inner, inner_pk, audit)});
  auto fwd_tdf = layer.forward;
  auto inv_tdf = layer.inverse;
  auto tdf = [fwd_tdf, pk, audit](Word m) {
    audit->tdf.fetch_add(1, std::memory_order_relaxed);
    return fwd_tdf(pk, m);
  };
  auto tdf_inv = [inv_tdf, sk, audit](Word y) {
    audit->tdf_inverse.fetch_add(1, std::memory_order_relaxed);
    return inv_tdf(sk, y);
  };
  const unsigned cb = s.widths.c_bits;
  const Word mmask = low_mask(mb);
  BasisPermutation perm(
      detail::type2_input_layout(s.widths, mb), detail::type2_output_layout(s.widths, mb),
      [=](Word i) {
        const Word u = i & mmask;
        const Word rest = i >> mb;  // r || m || y
        const Word m = (rest >> cb) & mmask;
        const Word t = u ^ tdf(m);
        const Word vreg = m ^ tdf_inv(t);
        const Word inner_in = (((rest >> (cb + mb)) << mb | t) << cb) | (rest & low_mask(cb));
        return (block->forward(inner_in) << mb) | vreg;
      },
      [=](Word o) {
        const Word vreg = o & mmask;
        const Word inner_in = block->inverse(o >> mb);  // r || t || y
        const Word t = (inner_in >> cb) & mmask;
        const Word m = vreg ^ tdf_inv(t);
        const Word u = t ^ tdf(m);
        const Word rest = (((inner_in >> (cb + mb)) << mb | m) << cb) | (inner_in & low_mask(cb));
        return (rest << mb) | u;
      });
  return detail::make_operator(OperatorKind::Type2Transformed, Construction::Fig8, std::move(perm),
                               KeyMaterial::PublicAndSecret, std::move(audit), s);
}

// Default type-2 construction for a keypair: trapdoor schemes use the trapdoor
// circuit, recoverable schemes the public-key-only Rec circuit, everything else
// the Dec circuit (which rejects schemes with decryption failures).
inline OracleOperator build_type2(const ClassicalScheme& s, const Keypair& kp,
                                  Verification v = Verification::Exhaustive) {
  if (s.trapdoor) return build_type2_transformed(s, kp.pk, kp.sk, v);
  if (s.has_rec()) return build_type2_canonical_recoverable(s, kp.pk, v);
  return build_type2_canonical_perfect(s, kp.pk, kp.sk, v);
}

// A symmetric scheme viewed as a PKE with pk = sk = key, so the PKE builders
// produce its type-2 operator (via the Dec circuit, since Dec inverts Enc exactly).
inline ClassicalScheme as_public_key_view(const SkeScheme& ske) {
  ClassicalScheme s;
  s.name = ske.name;
  s.widths = {ske.widths.r_bits, ske.widths.m_bits, ske.widths.c_bits, ske.widths.key_bits, ske.widths.key_bits};
  s.parts = ske.parts;
  auto kgen = ske.kgen;
  s.kgen = [kgen](Word w) {
    const Word k = kgen(w);
    return Keypair{k, k};
  };
  s.enc = ske.enc;
  s.dec = ske.dec;
  return s;
}

}  // namespace qs2lab::operators
