#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "qs2lab/attacks/attacks.hpp"
#include "qs2lab/games/records.hpp"
#include "qs2lab/schemes/descriptor.hpp"

using namespace qs2lab;
using namespace qs2lab::games;
using namespace qs2lab::schemes;

namespace {

ClassicalScheme pke(const std::string& name, json params = json::object(), std::uint64_t seed = 5) {
  return build_scheme(name, seed, std::move(params)).public_key();
}

SkeScheme ske(const std::string& name, json params = json::object(), std::uint64_t seed = 5) {
  return build_scheme(name, seed, std::move(params)).symmetric();
}

void expect_rate(const AdvantageEstimate& e, double expected, const std::string& what) {
  EXPECT_NEAR(e.win_rate, expected, 3.0 * e.std_error + 1e-12) << what << ": " << e.wins << "/" << e.trials;
}

}  // namespace

TEST(Estimator, AlwaysWinGame) {
  auto e = estimate_advantage(
      TrialFn([](std::uint64_t i, std::uint64_t s) { return make_record(i, s, 1, 1, 0); }), 100, 1);
  EXPECT_EQ(e.trials, 100u);
  EXPECT_EQ(e.win_rate, 1.0);
  EXPECT_EQ(e.advantage, 0.5);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(Estimator, FairCoinWithinBinomialBound) {
  auto fn = TrialFn([](std::uint64_t i, std::uint64_t s) {
    Rng rng(s);
    return make_record(i, s, coin(rng), 0, 0);
  });
  auto e = estimate_advantage(fn, 10000, 42);
  EXPECT_NEAR(e.win_rate, 0.5, 0.015);
  EXPECT_NEAR(e.std_error, std::sqrt(e.win_rate * (1 - e.win_rate) / 10000), 1e-15);
}

TEST(Estimator, ParallelMergeMatchesSerialOrder) {
  auto fn = TrialFn([](std::uint64_t i, std::uint64_t s) {
    Rng rng(s);
    return make_record(i, s, coin(rng), coin(rng), 0);
  });
  std::vector<ExperimentRecord> serial, parallel;
  estimate_advantage(fn, 997, 9, &serial, 1);
  estimate_advantage(fn, 997, 9, &parallel, 8);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(parallel[i].trial, i);
    EXPECT_EQ(serial[i].seed, parallel[i].seed);
    EXPECT_EQ(serial[i].guess, parallel[i].guess);
  }
}

TEST(Estimator, RejectsZeroTrialsAndRethrowsTrialErrors) {
  auto ok = TrialFn([](std::uint64_t i, std::uint64_t s) { return make_record(i, s, 0, 0, 0); });
  EXPECT_THROW(estimate_advantage(ok, 0, 1), Error);
  auto bad = TrialFn([](std::uint64_t i, std::uint64_t) -> ExperimentRecord {
    if (i == 17) fail(Errc::InvalidState, "boom");
    return {};
  });
  EXPECT_THROW(estimate_advantage(bad, 50, 1, nullptr, 4), Error);
}

TEST(Estimator, ThreadCountFromEnvironment) {
  ::setenv("QS2LAB_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  ::setenv("QS2LAB_THREADS", "zero", 1);
  EXPECT_THROW(thread_count(), Error);
  ::setenv("QS2LAB_THREADS", "0", 1);
  EXPECT_THROW(thread_count(), Error);
  ::unsetenv("QS2LAB_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

TEST(QindQcpa, BlindGuesserIsAtHalf) {
  QindQcpaGame game(pke("toy-rollo"), blind_adversary(0));
  expect_rate(estimate_advantage(game, 2000, 3), 0.5, "blind");
}

TEST(QindQcpa, LweHadamardWinsEveryTrial) {
  auto built = build_scheme("toy-lwe", 8);
  QindQcpaGame game(built.public_key(), attacks::lwe_hadamard_adversary(encode_params_of(built)));
  auto e = estimate_advantage(game, 500, 8);
  EXPECT_EQ(e.wins, 500u);
}

TEST(QindQcpa, NonIsometricSchemeIsRejected) {
  try {
    QindQcpaGame game(pke("almost-constant"), blind_adversary(0));
    FAIL() << "expected GameUndefinedForScheme";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GameUndefinedForScheme);
    EXPECT_NE(std::string(e.what()).find("game undefined: non-isometric scheme"), std::string::npos);
  }
}

TEST(QindQcpa, RetainedChallengeHoldsOnlyTheMessageRegister) {
  GameOptions o;
  int seen = 0;
  o.on_retained = [&seen](const QuantumState& kept) {
    EXPECT_EQ(kept.layout(), (RegisterLayout{{"m", 1}}));
    ++seen;
  };
  QindQcpaGame game(pke("toy-rollo"), attacks::rollo_hadamard_adversary(1), o);
  for (std::uint64_t t = 0; t < 20; ++t) game.run(t, t);
  EXPECT_EQ(seen, 20);
}

TEST(QindQcpa, RejectsChallengeOnForeignLayout) {
  Adversary bad = blind_adversary(0);
  bad.prepare = [](const GameContext&, Rng&) {
    auto s = QuantumState::basis(RegisterLayout{{"x", 1}}, 0);
    return Challenge{s, s, {}};
  };
  QindQcpaGame game(pke("toy-rollo"), bad);
  EXPECT_THROW(game.run(0, 1), Error);
}

// The adversary sees only pk and an oracle handle; for a recoverable scheme
// that handle is built from pk alone.
TEST(QindQcpa, OracleDisciplineAndQueryCounting) {
  Adversary probe = blind_adversary(0);
  probe.prepare = [](const GameContext& ctx, Rng&) {
    EXPECT_TRUE(ctx.pk.has_value());
    EXPECT_EQ(ctx.oracle->op().key_material, operators::KeyMaterial::PublicOnly);
    auto zero = QuantumState::basis(ctx.message_layout, 0);
    for (int i = 0; i < 3; ++i) ctx.oracle->query(zero);
    EXPECT_EQ(ctx.oracle->op().audit->dec.load(), 0u);
    EXPECT_EQ(ctx.oracle->op().audit->sk_reads.load(), 0u);
    return Challenge{zero, zero, {}};
  };
  QindQcpaGame game(pke("toy-rollo"), probe);
  auto rec = game.run(0, 77);
  EXPECT_EQ(rec.oracle_calls, 3u);
}

TEST(QindQcpa, ReplayIsDeterministic) {
  auto run = [] {
    QindQcpaGame game(pke("toy-rollo", json::object(), 21), attacks::rollo_hadamard_adversary(1));
    std::vector<ExperimentRecord> recs;
    estimate_advantage(game, 300, 99, &recs, 4);
    std::ostringstream out;
    write_jsonl(out, recs, summarize(recs));
    return out.str();
  };
  EXPECT_EQ(run(), run());
}

TEST(QindQcpa, PinnedKeypairIsUsedEveryTrial) {
  auto s = pke("toy-rollo");
  GameOptions o;
  Rng rng(1);
  o.pinned_keypair = s.keygen(rng);
  const Word pk = o.pinned_keypair->pk;
  Adversary probe = blind_adversary(0);
  probe.guess = [pk](const GameContext& ctx, const std::any&, const QuantumState&, Rng&) {
    EXPECT_EQ(*ctx.pk, pk);
    return 0;
  };
  QindQcpaGame game(s, probe, o);
  for (std::uint64_t t = 0; t < 10; ++t) game.run(t, t * 31);
}

TEST(IndQcpa, RolloPadHidesTheMessage) {
  IndQcpaGame game(pke("toy-rollo"), attacks::c1_pad_guess_adversary());
  expect_rate(estimate_advantage(game, 4000, 4), 0.5, "c1-pad-guess");
}

TEST(IndQcpa, ConstantGuesserIsAtHalf) {
  IndQcpaGame game(pke("toy-lwe"), blind_classical(1));
  expect_rate(estimate_advantage(game, 2000, 4), 0.5, "constant");
}

// b = 0 is always recognized; b = 1 only when c falls outside every
// encryption of 0, which the compressed c2 of toy ROLLO rarely allows.
TEST(IndQcpa, ExhaustiveSearchNeverMissesAnEncryptionOfZero) {
  IndQcpaGame game(pke("toy-rollo"), attacks::exhaustive_search_adversary());
  std::vector<ExperimentRecord> recs;
  auto e = estimate_advantage(game, 2000, 4, &recs);
  for (const auto& r : recs) {
    if (r.secret_bit == 0) {
      EXPECT_TRUE(r.win);
    }
  }
  EXPECT_GE(e.win_rate, 0.5 - 3 * e.std_error);
}

// Noiseless LWE with an odd-weight challenge difference: c1 + c2 * s decrypts,
// so the images of 0 and 1 are disjoint and the search always wins.
TEST(IndQcpa, ExhaustiveSearchWinsWhenImagesAreDisjoint) {
  IndQcpaGame game(pke("toy-lwe", {{"profile", "noiseless"}}), attacks::exhaustive_search_adversary());
  EXPECT_EQ(estimate_advantage(game, 500, 4).wins, 500u);
}

TEST(EmbedClassical, WrappedConstantGuesserMatchesUnwrappedTrialByTrial) {
  auto s = pke("toy-rollo");
  IndQcpaGame classical(s, blind_classical(0));
  QindQcpaGame quantum(s, embed_classical(blind_classical(0)));
  std::vector<ExperimentRecord> a, b;
  estimate_advantage(classical, 500, 12, &a);
  estimate_advantage(quantum, 500, 12, &b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].secret_bit, b[i].secret_bit);
    EXPECT_EQ(a[i].win, b[i].win);
  }
}

TEST(EmbedClassical, WrappedRolloAdversaryMatchesIndRate) {
  auto s = pke("toy-rollo");
  auto ind = estimate_advantage(IndQcpaGame(s, attacks::c1_pad_guess_adversary()), 2000, 13);
  auto qind = estimate_advantage(QindQcpaGame(s, embed_classical(attacks::c1_pad_guess_adversary())), 2000, 13);
  EXPECT_NEAR(qind.win_rate, ind.win_rate, 3.0 * std::hypot(ind.std_error, qind.std_error));
}

TEST(EmbedClassical, ClassicalRandomnessOracleReturnsTheBasisCiphertext) {
  auto s = pke("toy-lwe");
  Rng rng(2);
  auto kp = s.keygen(rng);
  auto op = operators::build_type2(s, kp);
  for (Word r : {0u, 5u, 1023u})
    for (Word m = 0; m < 16; ++m) {
      auto psi = operators::type2_oracle_call_with_r(op, QuantumState::basis(s.message_layout(), m), r);
      const Word c = s.enc(kp.pk, m, r);
      EXPECT_NEAR(psi.probability(c), 1.0, 1e-12);
    }
}

TEST(QindSke, OtpPrfHadamardIsThreeQuarters) {
  QindSkeGame game(ske("ske-otp-prf"), attacks::ske_hadamard_adversary(1));
  expect_rate(estimate_advantage(game, 4000, 6), 0.75, "otp-prf");
}

TEST(QindSke, RandomPermutationDefeatsHadamard) {
  QindSkeGame game(ske("ske-random-perm"), attacks::ske_hadamard_adversary(1));
  expect_rate(estimate_advantage(game, 4000, 6), 0.5, "random-perm");
}

TEST(QindSke, BlindGuesserAndNoPublicKey) {
  Adversary blind = blind_adversary(1);
  blind.prepare = [](const GameContext& ctx, Rng&) {
    EXPECT_FALSE(ctx.pk.has_value());
    EXPECT_FALSE(static_cast<bool>(ctx.public_enc));
    auto zero = QuantumState::basis(ctx.message_layout, 0);
    return Challenge{zero, zero, {}};
  };
  QindSkeGame game(ske("ske-otp-prf"), blind);
  expect_rate(estimate_advantage(game, 2000, 6), 0.5, "blind");
}

TEST(Forbidden, DistinctMessagesWinEveryTrial) {
  for (const char* name : {"toy-lwe", "toy-rollo", "hybrid", "transformed"}) {
    ForbiddenRandomnessGame game(pke(name));
    EXPECT_EQ(estimate_advantage(game, 500, 14).wins, 500u) << name;
  }
}

TEST(Forbidden, SuperposedRandomnessWinsEveryTrial) {
  for (const char* name : {"toy-rollo", "hybrid"}) {
    ForbiddenOptions o;
    o.mode = RandomnessMode::Superposed;
    ForbiddenRandomnessGame game(pke(name), o);
    EXPECT_EQ(estimate_advantage(game, 200, 15).wins, 200u) << name;
  }
}

TEST(Forbidden, EqualMessagesAreAtHalf) {
  ForbiddenOptions o;
  o.messages = std::make_pair(Word{1}, Word{1});
  ForbiddenRandomnessGame game(pke("toy-rollo"), o);
  expect_rate(estimate_advantage(game, 2000, 16), 0.5, "m0 = m1");
}

// b = 0: re-encrypting m0 under the received randomness cancels the
// ciphertext, so the ancilla is |0> with certainty.
TEST(Forbidden, ZeroBranchAncillaIsExactlyZero) {
  auto s = pke("toy-rollo");
  Rng rng(3);
  auto kp = s.keygen(rng);
  auto enc1 = operators::build_type1_enc(s, kp.pk);
  for (Word m0 = 0; m0 < 2; ++m0) {
    auto at_m0 = enc1.perm.fix_register("m", m0);
    auto state = qsim::hadamard_register(QuantumState::basis(RegisterLayout{{"r", 6}, {"y", 4}}, 0), "r");
    state = qsim::apply_permutation(qsim::apply_permutation(state, at_m0), at_m0);
    EXPECT_NEAR(qsim::register_distribution(state, "y")[0], 1.0, 1e-12);
  }
  ForbiddenRandomnessGame game(s);
  std::vector<ExperimentRecord> recs;
  estimate_advantage(game, 500, 17, &recs);
  for (const auto& r : recs) {
    if (r.secret_bit == 0) {
      EXPECT_EQ(r.guess, 0);
    }
  }
}

// almost-constant collides whenever r misses the key; those draws are
// resampled and counted.
TEST(Forbidden, CollidingRandomnessIsResampledAndCounted) {
  ForbiddenOptions o;
  o.messages = std::make_pair(Word{0}, Word{1});
  ForbiddenRandomnessGame game(pke("almost-constant"), o);
  std::vector<ExperimentRecord> recs;
  auto e = estimate_advantage(game, 500, 18, &recs);
  EXPECT_EQ(e.wins, 500u);
  std::uint64_t resampled = 0;
  for (const auto& r : recs) resampled += r.resampled;
  EXPECT_GT(resampled, 0u);
}

TEST(Records, JsonlEndsWithEstimate) {
  std::vector<ExperimentRecord> recs = {make_record(0, 10, 1, 1, 2), make_record(1, 11, 0, 1, 0)};
  std::ostringstream out;
  write_jsonl(out, recs, summarize(recs));
  std::istringstream in(out.str());
  std::string line;
  std::vector<json> rows;
  while (std::getline(in, line)) rows.push_back(json::parse(line));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r["schema_version"], 1);
  EXPECT_EQ(rows[0]["oracle_calls"], 2);
  EXPECT_EQ(rows[1]["win"], false);
  EXPECT_EQ(rows[2]["record_type"], "estimate");
  EXPECT_EQ(rows[2]["win_rate"], 0.5);
  EXPECT_DOUBLE_EQ(rows[2]["stderr"].get<double>(), 0.5 / std::sqrt(2.0));
}

TEST(Records, CsvIsAFlatProjection) {
  std::vector<ExperimentRecord> recs = {make_record(0, 10, 1, 1, 2)};
  std::ostringstream out;
  write_csv(out, recs, summarize(recs));
  std::istringstream in(out.str());
  std::string header, row, est;
  std::getline(in, header);
  std::getline(in, row);
  std::getline(in, est);
  EXPECT_EQ(header, csv_header());
  EXPECT_EQ(row, "1,trial,0,1,1,1,10,2,0,,,,,");
  EXPECT_EQ(est, "1,estimate,,,,,,,,1,1,1,0.5,0");
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}
