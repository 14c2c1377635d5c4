#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qs2lab/classify/classify.hpp"
#include "qs2lab/games/adversary.hpp"
#include "qs2lab/operators/builders.hpp"

namespace qs2lab::games {

using operators::Verification;
using schemes::ClassicalScheme;
using schemes::Keypair;
using schemes::SkeScheme;
using qsim::BasisPermutation;

struct ExperimentRecord {
  std::uint64_t trial = 0;
  int secret_bit = 0;
  int guess = 0;
  bool win = false;
  std::uint64_t seed = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t resampled = 0;
};

inline ExperimentRecord make_record(std::uint64_t trial, std::uint64_t seed, int b, int guess, std::uint64_t calls,
                                    std::uint64_t resampled = 0) {
  return ExperimentRecord{trial, b, guess, b == guess, seed, calls, resampled};
}

struct GameOptions {
  // Fixes one keypair for every trial; by default each trial draws fresh keys.
  std::optional<Keypair> pinned_keypair;
  // Seed of the reference keypair used for the classification gate and the
  // one-time exhaustive operator verification.
  std::uint64_t reference_seed = 0x5eed;
  // Sees the single challenge state the challenger keeps after discarding the
  // other one. Used by tests to check the trace-out step.
  std::function<void(const QuantumState&)> on_retained;
};

inline Keypair reference_keypair(const ClassicalScheme& s, const GameOptions& o) {
  if (o.pinned_keypair) return *o.pinned_keypair;
  Rng rng(o.reference_seed);
  return s.keygen(rng);
}

inline void check_challenge(const Challenge& ch, const RegisterLayout& message) {
  if (!(ch.phi0.layout() == message) || !(ch.phi1.layout() == message)) {
    fail(Errc::LayoutMismatch, "challenge states must live on the message register " + message.to_string());
  }
}

inline GameContext public_context(const ClassicalScheme& s, Word pk, EncryptionOracle* oracle) {
  auto enc = s.enc;
  return GameContext{pk,
                     oracle,
                     s.message_layout(),
                     s.ciphertext_layout(),
                     [enc, pk](Word m, Word r) { return enc(pk, m, r); },
                     s.widths.r_bits};
}

// qIND-qCPA: quantum challenge pair, one type-2 oracle call with hidden
// classical randomness, continued oracle access.
class QindQcpaGame {
 public:
  QindQcpaGame(ClassicalScheme scheme, Adversary adversary, GameOptions options = {})
      : scheme_(std::move(scheme)), adversary_(std::move(adversary)), options_(std::move(options)) {
    const Keypair ref = reference_keypair(scheme_, options_);
    classification_ = classify::classify_scheme(scheme_, ref);
    if (!classification_.isometry.isometric()) {
      fail(Errc::GameUndefinedForScheme, "game undefined: non-isometric scheme");
    }
    if (classification_.type2_path == classify::Type2Path::None) {
      fail(Errc::GameUndefinedForScheme, "game undefined: no type-2 operator construction for " + scheme_.name);
    }
    operators::build_type2(scheme_, ref, Verification::Exhaustive);
  }

  const classify::Classification& classification() const noexcept { return classification_; }

  ExperimentRecord run(std::uint64_t trial, std::uint64_t seed) const {
    Rng rng(seed);
    const Keypair kp = options_.pinned_keypair ? *options_.pinned_keypair : scheme_.keygen(rng);
    EncryptionOracle oracle(operators::build_type2(scheme_, kp, Verification::Trusted), rng);
    const GameContext ctx = public_context(scheme_, kp.pk, &oracle);
    Challenge ch = adversary_.prepare(ctx, rng);
    check_challenge(ch, ctx.message_layout);
    const int b = coin(rng);
    const QuantumState retained = b ? std::move(ch.phi1) : std::move(ch.phi0);
    if (options_.on_retained) options_.on_retained(retained);
    const QuantumState psi = oracle.challenge(retained);
    const int guess = adversary_.guess(ctx, ch.token, psi, rng);
    return make_record(trial, seed, b, guess, oracle.calls());
  }

 private:
  ClassicalScheme scheme_;
  Adversary adversary_;
  GameOptions options_;
  classify::Classification classification_;
};

// IND-qCPA: classical challenge messages, fresh classical randomness, classical
// ciphertext. The quantum learning oracle is offered when the scheme has a
// type-2 construction.
class IndQcpaGame {
 public:
  IndQcpaGame(ClassicalScheme scheme, ClassicalAdversary adversary, GameOptions options = {})
      : scheme_(std::move(scheme)), adversary_(std::move(adversary)), options_(std::move(options)) {
    try {
      operators::build_type2(scheme_, reference_keypair(scheme_, options_), Verification::Exhaustive);
      has_oracle_ = true;
    } catch (const Error&) {
      has_oracle_ = false;
    }
  }

  ExperimentRecord run(std::uint64_t trial, std::uint64_t seed) const {
    Rng rng(seed);
    const Keypair kp = options_.pinned_keypair ? *options_.pinned_keypair : scheme_.keygen(rng);
    std::optional<EncryptionOracle> oracle;
    if (has_oracle_) oracle.emplace(operators::build_type2(scheme_, kp, Verification::Trusted), rng);
    const GameContext ctx = public_context(scheme_, kp.pk, oracle ? &*oracle : nullptr);
    const ClassicalChoice choice = adversary_.choose(ctx, rng);
    if (choice.m0 > low_mask(scheme_.widths.m_bits) || choice.m1 > low_mask(scheme_.widths.m_bits)) {
      fail(Errc::WidthMismatch, "challenge message outside the message space");
    }
    const int b = coin(rng);
    const Word r = uniform_bits(rng, scheme_.widths.r_bits);
    const Word c = scheme_.enc(kp.pk, b ? choice.m1 : choice.m0, r);
    const int guess = adversary_.guess(ctx, choice.token, c, rng);
    return make_record(trial, seed, b, guess, oracle ? oracle->calls() : 0);
  }

 private:
  ClassicalScheme scheme_;
  ClassicalAdversary adversary_;
  GameOptions options_;
  bool has_oracle_ = false;
};

// Symmetric qIND: fresh key per trial, no public key, type-2 oracle built from
// the key (Enc, swap, Dec-uncompute; exact because Dec inverts Enc).
class QindSkeGame {
 public:
  QindSkeGame(SkeScheme ske, Adversary adversary, GameOptions options = {})
      : ske_(std::move(ske)), view_(operators::as_public_key_view(ske_)), adversary_(std::move(adversary)),
        options_(std::move(options)) {
    const Keypair ref = reference_keypair(view_, options_);
    operators::build_type2_canonical_perfect(view_, ref.pk, ref.sk, Verification::Exhaustive);
  }

  ExperimentRecord run(std::uint64_t trial, std::uint64_t seed) const {
    Rng rng(seed);
    const Word key = options_.pinned_keypair ? options_.pinned_keypair->sk : ske_.keygen(rng);
    EncryptionOracle oracle(operators::build_type2_canonical_perfect(view_, key, key, Verification::Trusted), rng);
    const GameContext ctx{std::nullopt, &oracle, ske_.message_layout(), ske_.ciphertext_layout(), {},
                          ske_.widths.r_bits};
    Challenge ch = adversary_.prepare(ctx, rng);
    check_challenge(ch, ctx.message_layout);
    const int b = coin(rng);
    const QuantumState retained = b ? std::move(ch.phi1) : std::move(ch.phi0);
    if (options_.on_retained) options_.on_retained(retained);
    const QuantumState psi = oracle.challenge(retained);
    const int guess = adversary_.guess(ctx, ch.token, psi, rng);
    return make_record(trial, seed, b, guess, oracle.calls());
  }

 private:
  SkeScheme ske_;
  ClassicalScheme view_;
  Adversary adversary_;
  GameOptions options_;
};

enum class RandomnessMode { Superposed, Classical };

struct ForbiddenOptions {
  RandomnessMode mode = RandomnessMode::Classical;
  // Fixed challenge messages; by default each trial draws a distinct pair.
  std::optional<std::pair<Word, Word>> messages;
  std::optional<Keypair> pinned_keypair;
};

// The variant in which the challenger hands the randomness register to the
// adversary along with the ciphertext. The built-in adversary re-encrypts m0
// under the received randomness, XORs it into the ciphertext register with the
// type-1 operator, and answers 0 iff that register measures to 0.
//
// For a classical message the challenger's type-2 step equals the type-1
// operator with the message register fixed and y = 0, which is how it is
// simulated (it keeps r and c as the only live registers).
class ForbiddenRandomnessGame {
 public:
  explicit ForbiddenRandomnessGame(ClassicalScheme scheme, ForbiddenOptions options = {})
      : scheme_(std::move(scheme)), options_(std::move(options)) {
    if (options_.mode == RandomnessMode::Superposed) {
      qsim::QuantumState::check_cap(
          RegisterLayout{{"r", scheme_.widths.r_bits}, {"y", scheme_.widths.c_bits}}, qsim::StateKind::Pure);
    }
    if (options_.messages) {
      const Word lim = low_mask(scheme_.widths.m_bits);
      if (options_.messages->first > lim || options_.messages->second > lim) {
        fail(Errc::WidthMismatch, "challenge message outside the message space");
      }
    }
  }

  ExperimentRecord run(std::uint64_t trial, std::uint64_t seed) const {
    Rng rng(seed);
    const auto& w = scheme_.widths;
    const Keypair kp = options_.pinned_keypair ? *options_.pinned_keypair : scheme_.keygen(rng);
    Word m0, m1;
    if (options_.messages) {
      std::tie(m0, m1) = *options_.messages;
    } else {
      m0 = uniform_bits(rng, w.m_bits);
      m1 = (m0 + 1 + uniform_below(rng, dimension_of(w.m_bits) - 1)) & low_mask(w.m_bits);
    }
    const int b = coin(rng);
    const Word mb = b ? m1 : m0;
    const auto enc1 = operators::build_type1_enc(scheme_, kp.pk);
    std::uint64_t resampled = 0;
    QuantumState received = QuantumState::basis(RegisterLayout{{"y", w.c_bits}}, 0);
    BasisPermutation adversary_op = BasisPermutation::identity(received.layout());

    if (options_.mode == RandomnessMode::Classical) {
      Word r = uniform_bits(rng, w.r_bits);
      const auto collides = [&](Word x) { return scheme_.enc(kp.pk, m0, x) == scheme_.enc(kp.pk, m1, x); };
      // Rejection-sample r until the two challenge ciphertexts differ. After a
      // bounded number of draws, pick uniformly among the remaining good r
      // directly (same distribution); if there is none the pair is degenerate.
      if (m0 != m1) {
        for (int tries = 0; tries < 64 && collides(r); ++tries) {
          r = uniform_bits(rng, w.r_bits);
          ++resampled;
        }
        if (collides(r)) {
          std::vector<Word> good;
          for (Word x = 0; x < dimension_of(w.r_bits); ++x) {
            if (!collides(x)) good.push_back(x);
          }
          if (!good.empty()) {
            r = good[uniform_below(rng, good.size())];
            ++resampled;
          }
        }
      }
      const auto at_r = enc1.perm.fix_register("r", r);
      received = qsim::apply_permutation(received, at_r.fix_register("m", mb));
      adversary_op = at_r.fix_register("m", m0);
    } else {
      QuantumState rc = QuantumState::basis(RegisterLayout{{"r", w.r_bits}, {"y", w.c_bits}}, 0);
      rc = qsim::hadamard_register(rc, "r");
      received = qsim::apply_permutation(rc, enc1.perm.fix_register("m", mb));
      adversary_op = enc1.perm.fix_register("m", m0);
    }
    const QuantumState after = qsim::apply_permutation(received, adversary_op);
    const auto [outcome, post] = qsim::measure_register(after, "y", qsim::Basis::Computational, rng);
    const int guess = outcome.value == 0 ? 0 : 1;
    return make_record(trial, seed, b, guess, 0, resampled);
  }

 private:
  ClassicalScheme scheme_;
  ForbiddenOptions options_;
};

}  // namespace qs2lab::games
