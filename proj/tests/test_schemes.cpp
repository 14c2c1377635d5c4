#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qs2lab/schemes/descriptor.hpp"

using namespace qs2lab;
using namespace qs2lab::schemes;

namespace {

using oracle::slice;
Word oracle_mul(Word a, Word b, unsigned n) { return oracle::mul(a, b, n); }
Word oracle_lwe_enc(Word pk, Word m, Word r, unsigned n, unsigned chunk, bool sparse) {
  return oracle::lwe_enc(pk, m, r, n, chunk, sparse);
}

ClassicalScheme lwe(unsigned n, const std::string& profile, std::uint64_t seed = 1, const std::string& encode = "identity") {
  return *build_scheme("toy-lwe", seed, {{"n", n}, {"profile", profile}, {"encode", encode}}).pke;
}

template <class F>
void for_all_mr(const ClassicalScheme& s, F f) {
  for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r)
    for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) f(m, r);
}

}  // namespace

TEST(Ring, MultiplicationMatchesSchoolbook) {
  for (unsigned n = 2; n <= 6; ++n)
    for (Word a = 0; a < dimension_of(n); ++a)
      for (Word b = 0; b < dimension_of(n); ++b) ASSERT_EQ(gf2::mul(a, b, n), oracle_mul(a, b, n));
}

TEST(Ring, InverseIsInverse) {
  for (unsigned n = 2; n <= 6; ++n)
    for (Word a = 1; a < dimension_of(n); ++a)
      if (auto inv = gf2::inverse(a, n)) {
        EXPECT_EQ(oracle_mul(a, *inv, n), 1u);
      }
  EXPECT_FALSE(gf2::inverse(0b11, 2).has_value());  // x + 1 divides x^2 + 1
}

TEST(ToyLwe, WidthsForDefaultParameters) {
  auto s = lwe(4, "sparse");
  EXPECT_EQ(s.widths.r_bits, 10u);
  EXPECT_EQ(s.widths.m_bits, 4u);
  EXPECT_EQ(s.widths.c_bits, 8u);
}

TEST(ToyLwe, EncMatchesClassicalOracle) {
  for (const std::string profile : {"sparse", "dense"}) {
    auto s = lwe(4, profile, 3);
    const unsigned chunk = profile == "sparse" ? 3 : 4;
    Rng rng(9);
    for (int k = 0; k < 5; ++k) {
      auto kp = s.keygen(rng);
      for_all_mr(s, [&](Word m, Word r) {
        ASSERT_EQ(s.enc(kp.pk, m, r), oracle_lwe_enc(kp.pk, m, r, 4, chunk, profile == "sparse"));
      });
    }
  }
}

TEST(ToyLwe, KeygenRelation) {
  auto s = lwe(4, "noiseless");
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    auto kp = s.keygen(rng);
    EXPECT_EQ(kp.pk & 0xF, oracle_mul(kp.pk >> 4, kp.sk, 4));
  }
}

TEST(ToyLwe, RecoverableExhaustively) {
  for (const std::string profile : {"sparse", "dense", "noiseless"}) {
    auto s = lwe(4, profile);
    Rng rng(4);
    auto kp = s.keygen(rng);
    for_all_mr(s, [&](Word m, Word r) { ASSERT_EQ(s.rec(kp.pk, r, s.enc(kp.pk, m, r)), m); });
  }
}

TEST(ToyLwe, ZeroNoiseCase) {
  auto s = lwe(4, "sparse", 1, "seeded");
  Rng rng(5);
  auto kp = s.keygen(rng);
  for (Word m = 0; m < 16; ++m) {
    const Word c = s.enc(kp.pk, m, 0);
    EXPECT_EQ(c & 0xF, 0u);
    EXPECT_EQ(c >> 4, EncodeParams::seeded(4, derive_seed(1, 0x45)).apply(m));
  }
}

TEST(ToyLwe, EncodeRepresentation) {
  for (unsigned n = 2; n <= 6; ++n) {
    auto p = EncodeParams::seeded(n, 11 + n);
    std::set<Word> images;
    for (Word m = 0; m < dimension_of(n); ++m) {
      images.insert(p.apply(m));
      EXPECT_EQ(p.invert(p.apply(m)), m);
      // linear over XOR, as a wire permutation must be
      EXPECT_EQ(p.apply(m) ^ p.apply(low_mask(n)), p.apply(m ^ low_mask(n)));
    }
    EXPECT_EQ(images.size(), dimension_of(n));
  }
}

// Oracle for alpha: count failures with the independent encryption.
TEST(ToyLwe, DenseFailureRateMatchesOracle) {
  auto s = lwe(4, "dense", 6);
  Rng rng(6);
  auto kp = s.keygen(rng);
  std::uint64_t failures = 0, total = 0;
  for_all_mr(s, [&](Word m, Word r) {
    const Word c = oracle_lwe_enc(kp.pk, m, r, 4, 4, false);
    const Word c1 = c >> 4, c2 = c & 0xF;
    failures += (c1 ^ oracle_mul(c2, kp.sk, 4)) != m;
    ++total;
    ASSERT_EQ(s.dec(kp.sk, c), c1 ^ oracle_mul(c2, kp.sk, 4));
  });
  EXPECT_GT(failures, 0u);
  EXPECT_LT(failures, total);
}

TEST(ToyLwe, Errors) {
  try {
    lwe(4, "sparse");
    build_scheme("toy-lwe", 1, {{"q", 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedModulus);
  }
  EXPECT_THROW(build_scheme("toy-lwe", 1, {{"n", 7}}), Error);
}

TEST(ToyRollo, PublicKeyRelation) {
  auto s = *build_scheme("toy-rollo", 3, {{"code_bits", 4}}).pke;
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto kp = s.keygen(rng);
    const Word x = kp.sk >> 4, y = kp.sk & 0xF;
    EXPECT_EQ(oracle_mul(x, kp.pk, 4), y);  // h = x^-1 y
  }
}

TEST(ToyRollo, RecoverableExhaustively) {
  for (unsigned l = 1; l <= 4; ++l) {
    for (unsigned k = 2; k <= 6; k += 2) {
      auto s = *build_scheme("toy-rollo", 5, {{"m_bits", l}, {"code_bits", k}}).pke;
      Rng rng(l * 10 + k);
      auto kp = s.keygen(rng);
      for_all_mr(s, [&](Word m, Word r) { ASSERT_EQ(s.rec(kp.pk, r, s.enc(kp.pk, m, r)), m); });
    }
  }
}

TEST(ToyRollo, OneTimePadStructureAndC2Independence) {
  auto s = *build_scheme("toy-rollo", 8, {{"m_bits", 3}, {"code_bits", 3}}).pke;
  Rng rng(8);
  auto kp = s.keygen(rng);
  for (Word r = 0; r < 64; ++r) {
    const Word c0 = s.enc(kp.pk, 0, r);
    const Word e1 = slice(r, 6, 0, 3), e2 = slice(r, 6, 3, 3);
    for (Word m = 0; m < 8; ++m) {
      const Word c = s.enc(kp.pk, m, r);
      EXPECT_EQ((c >> 3) ^ (c0 >> 3), m);
      EXPECT_EQ(c & 7, c0 & 7);
      EXPECT_EQ(c & 7, e1 ^ oracle_mul(e2, kp.pk, 3));
    }
  }
}

TEST(ToyRollo, DecCorrectWhenSyndromeUnique) {
  auto s = *build_scheme("toy-rollo", 8).pke;
  Rng rng(9);
  auto kp = s.keygen(rng);
  for_all_mr(s, [&](Word m, Word r) {
    const Word c = s.enc(kp.pk, m, r);
    int preimages = 0;
    for (Word e = 0; e < 64; ++e) preimages += ((e >> 3) ^ oracle_mul(e & 7, kp.pk, 3)) == (c & 7);
    if (preimages == 1) {
      EXPECT_EQ(s.dec(kp.sk, c), m);
    }
  });
}

TEST(OtpPrf, CorrectAndTranslation) {
  auto s = *build_scheme("ske-otp-prf", 2, {{"m_bits", 2}}).ske;
  for (Word k = 0; k < 4; ++k)
    for (Word r = 0; r < 4; ++r) {
      const Word pad = s.enc(k, 0, r) & 3;
      for (Word m = 0; m < 4; ++m) {
        const Word c = s.enc(k, m, r);
        EXPECT_EQ(s.dec(k, c), m);
        EXPECT_EQ(c >> 2, r);
        EXPECT_EQ(c & 3, m ^ pad);
      }
    }
}

TEST(RandomPerm, CorrectAndBijective) {
  for (unsigned nonce : {0u, 3u}) {
    auto s = *build_scheme("ske-random-perm", 2, {{"m_bits", 3}, {"nonce_bits", nonce}}).ske;
    for (Word k = 0; k < 4; ++k) {
      std::set<Word> images;
      for (Word m = 0; m < 8; ++m)
        for (Word r = 0; r < dimension_of(nonce); ++r) {
          const Word c = s.enc(k, m, r);
          EXPECT_EQ(s.dec(k, c), m);
          EXPECT_LT(c, dimension_of(3 + nonce));
          images.insert(c);
        }
      EXPECT_EQ(images.size(), dimension_of(3 + nonce));
    }
  }
}

TEST(Hybrid, RecoverableIncludingInnerWithoutRec) {
  const json inners[] = {json{{"name", "toy-rollo"}, {"params", {{"m_bits", 2}}}},
                         json{{"name", "transformed"}},
                         json{{"name", "toy-lwe"}, {"params", {{"n", 2}, {"profile", "dense"}}}}};
  for (const auto& inner : inners) {
    auto s = *build_scheme("hybrid", 4, {{"pke", inner}}).pke;
    Rng rng(10);
    auto kp = s.keygen(rng);
    for_all_mr(s, [&](Word m, Word r) { ASSERT_EQ(s.rec(kp.pk, r, s.enc(kp.pk, m, r)), m); });
  }
}

TEST(Hybrid, CompositionAndLayering) {
  auto built = build_scheme("hybrid", 12);
  auto s = *built.pke;
  auto pke = *build_scheme(built.descriptor["params"]["pke"]).pke;
  auto ske = *build_scheme(built.descriptor["params"]["ske"]).ske;
  const unsigned r2b = ske.widths.r_bits, r3b = pke.widths.r_bits;
  Rng rng(12);
  auto kp = s.keygen(rng);
  for_all_mr(s, [&](Word m, Word r) {
    const unsigned rw = s.widths.r_bits;
    const Word r1 = slice(r, rw, 0, 2), r2 = slice(r, rw, 2, r2b), r3 = slice(r, rw, 2 + r2b, r3b);
    const Word c = s.enc(kp.pk, m, r);
    const Word c1 = c >> pke.widths.c_bits, c2 = c & low_mask(pke.widths.c_bits);
    // c1 = m ^ pad(k, r2) with the pad from the SKE itself
    EXPECT_EQ(c1, (r2 << 1) | (m ^ (ske.enc(r1, 0, r2) & 1)));
    EXPECT_EQ(c2, pke.enc(kp.pk, r1, r3));
    // re-encrypting recovered components reproduces c
    const Word k = pke.rec(kp.pk, r3, c2);
    EXPECT_EQ(concat(ske.enc(k, s.rec(kp.pk, r, c), r2), pke.enc(kp.pk, k, r3), pke.widths.c_bits), c);
    if (pke.dec(kp.sk, c2) == r1) {
      EXPECT_EQ(s.dec(kp.sk, c), m);
    }
  });
}

TEST(Hybrid, KeyMustFit) {
  try {
    build_scheme("hybrid", 1, {{"pke", {{"name", "toy-rollo"}, {"params", {{"m_bits", 1}}}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WidthMismatch);
  }
}

TEST(Transformed, CompositionAndNonRecoverabilityWitness) {
  auto built = build_scheme("transformed", 13);
  auto s = *built.pke;
  auto inner = *build_scheme(built.descriptor["params"]["inner"]).pke;
  EXPECT_FALSE(s.has_rec());
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto kp = s.keygen(rng);
    const Word pk_e = kp.pk >> kTdfHandleBits, sk_e = kp.sk >> kTdfHandleBits;
    int witnesses = 0;
    for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
      const Word y = s.trapdoor->forward(kp.pk, m);
      witnesses += y != m;
      for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
        const Word c = s.enc(kp.pk, m, r);
        EXPECT_EQ(c, inner.enc(pk_e, y, r));
        EXPECT_EQ(inner.rec(pk_e, r, c), y);
        if (inner.dec(sk_e, c) == y) {
          EXPECT_EQ(s.dec(kp.sk, c), m);
        }
      }
    }
    EXPECT_GT(witnesses, 0);
  }
}

TEST(Transformed, FailureRateEqualsInner) {
  auto built = build_scheme("transformed", 14);
  auto s = *built.pke;
  auto inner = *build_scheme(built.descriptor["params"]["inner"]).pke;
  Rng rng(14);
  auto kp = s.keygen(rng);
  const Keypair ikp{kp.pk >> kTdfHandleBits, kp.sk >> kTdfHandleBits};
  int outer_fail = 0, inner_fail = 0;
  for_all_mr(s, [&](Word m, Word r) {
    outer_fail += s.dec(kp.sk, s.enc(kp.pk, m, r)) != m;
    inner_fail += inner.dec(ikp.sk, inner.enc(ikp.pk, m, r)) != m;
  });
  EXPECT_EQ(outer_fail, inner_fail);
}

TEST(AlmostConstant, Structure) {
  auto s = *build_scheme("almost-constant", 15).pke;
  Rng rng(15);
  auto kp = s.keygen(rng);
  std::set<Word> at_rbar;
  for (Word r = 0; r < 4; ++r)
    for (Word m = 0; m < 4; ++m) {
      const Word c = s.enc(kp.pk, m, r);
      if (r == kp.pk) {
        at_rbar.insert(c);
        EXPECT_EQ(s.dec(kp.sk, c), m);
      } else {
        EXPECT_EQ(c, s.enc(kp.pk, 0, r));
      }
    }
  EXPECT_EQ(at_rbar.size(), 4u);
}

// Every scheme's functions produce values within the declared widths.
TEST(Schemes, DeclaredWidthsFuzz) {
  Rng rng(16);
  for (const auto& name : builtin_scheme_names()) {
    auto b = build_scheme(name, 16);
    for (int i = 0; i < 2000; ++i) {
      if (b.pke) {
        const auto& s = *b.pke;
        auto kp = s.keygen(rng);
        EXPECT_LE(kp.pk, low_mask(s.widths.pk_bits)) << name;
        EXPECT_LE(kp.sk, low_mask(s.widths.sk_bits)) << name;
        const Word m = uniform_bits(rng, s.widths.m_bits), r = uniform_bits(rng, s.widths.r_bits);
        const Word c = s.enc(kp.pk, m, r);
        ASSERT_LE(c, low_mask(s.widths.c_bits)) << name;
        ASSERT_LE(s.dec(kp.sk, uniform_bits(rng, s.widths.c_bits)), low_mask(s.widths.m_bits)) << name;
        if (s.has_rec()) {
          ASSERT_LE(s.rec(kp.pk, r, uniform_bits(rng, s.widths.c_bits)), low_mask(s.widths.m_bits));
        }
      } else {
        const auto& s = *b.ske;
        const Word k = s.keygen(rng);
        EXPECT_LE(k, low_mask(s.widths.key_bits));
        const Word c = s.enc(k, uniform_bits(rng, s.widths.m_bits), uniform_bits(rng, s.widths.r_bits));
        ASSERT_LE(c, low_mask(s.widths.c_bits)) << name;
      }
    }
  }
}

TEST(Descriptor, RoundTripIsBitExact) {
  for (const auto& name : builtin_scheme_names()) {
    auto a = build_scheme(name, 99);
    auto b = build_scheme(json::parse(a.descriptor.dump()));
    EXPECT_EQ(a.descriptor, b.descriptor) << name;
    Rng ra(1), rb(1);
    for (int i = 0; i < 200; ++i) {
      if (a.pke) {
        auto ka = a.pke->keygen(ra), kb = b.pke->keygen(rb);
        ASSERT_EQ(ka.pk, kb.pk);
        const Word m = uniform_bits(ra, a.pke->widths.m_bits), r = uniform_bits(ra, a.pke->widths.r_bits);
        uniform_bits(rb, 1), uniform_bits(rb, 1);
        ASSERT_EQ(a.pke->enc(ka.pk, m, r), b.pke->enc(kb.pk, m, r)) << name;
      } else {
        const Word k = uniform_bits(ra, a.ske->widths.key_bits);
        rb();
        ASSERT_EQ(a.ske->enc(k, 1, 1), b.ske->enc(k, 1, 1)) << name;
      }
    }
  }
}

TEST(Descriptor, SeedChangesTables) {
  auto a = *build_scheme("toy-rollo", 1).pke;
  auto b = *build_scheme("toy-rollo", 2).pke;
  int differ = 0;
  for (Word r = 0; r < 64; ++r) differ += a.enc(0, 0, r) != b.enc(0, 0, r);
  EXPECT_GT(differ, 0);
}

TEST(Descriptor, OverridesAndErrors) {
  json d = {{"name", "hybrid"}, {"seed", 3}};
  apply_override(d, "ske=ske-random-perm");
  apply_override(d, "ske.nonce_bits=4");
  auto b = build_scheme(d);
  EXPECT_EQ(b.descriptor["params"]["ske"]["params"]["nonce_bits"], 4);
  EXPECT_EQ(b.pke->widths.c_bits, 5u + 5u);
  try {
    build_scheme(json{{"name", "nope"}, {"seed", 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
  }
  EXPECT_THROW(build_scheme(json{{"name", "toy-lwe"}}), Error);
  EXPECT_THROW(apply_override(d, "novalue"), Error);
}
