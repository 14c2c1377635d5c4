#pragma once

#include <any>
#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qs2lab/operators/oracle.hpp"
#include "qs2lab/qsim/ops.hpp"

namespace qs2lab::games {

using qsim::QuantumState;
using qsim::RegisterLayout;

// Handle to O^(2)_Enc for one trial. Learning-phase queries are counted; the
// challenge query goes through `challenge`, which the game calls and the
// adversary never sees.
class EncryptionOracle {
 public:
  EncryptionOracle(operators::OracleOperator op, Rng& rng) : op_(std::move(op)), rng_(&rng) {}

  QuantumState query(const QuantumState& plaintext) {
    ++calls_;
    return operators::type2_oracle_call(op_, plaintext, *rng_);
  }

  std::uint64_t calls() const noexcept { return calls_; }
  const operators::OracleOperator& op() const noexcept { return op_; }

  QuantumState challenge(const QuantumState& plaintext) { return operators::type2_oracle_call(op_, plaintext, *rng_); }

 private:
  operators::OracleOperator op_;
  Rng* rng_;
  std::uint64_t calls_ = 0;
};

// What an adversary may see: the public key (absent in the symmetric game), an
// oracle handle, the register layouts and a public encryption function bound
// to pk. There is no secret key here by construction.
struct GameContext {
  std::optional<Word> pk;
  EncryptionOracle* oracle = nullptr;
  RegisterLayout message_layout;
  RegisterLayout ciphertext_layout;
  std::function<Word(Word m, Word r)> public_enc;
  unsigned r_bits = 0;
};

struct Challenge {
  QuantumState phi0;
  QuantumState phi1;
  std::any token;
};

struct Adversary {
  std::string name;
  std::function<Challenge(const GameContext&, Rng&)> prepare;
  std::function<int(const GameContext&, const std::any& token, const QuantumState& psi, Rng&)> guess;
};

struct ClassicalChoice {
  Word m0 = 0;
  Word m1 = 0;
  std::any token;
};

// IND-qCPA adversary: classical challenge messages, classical ciphertext.
struct ClassicalAdversary {
  std::string name;
  std::function<ClassicalChoice(const GameContext&, Rng&)> choose;
  std::function<int(const GameContext&, const std::any& token, Word c, Rng&)> guess;
};

inline Adversary blind_adversary(int bit) {
  return Adversary{"blind",
                   [](const GameContext& ctx, Rng&) {
                     auto zero = QuantumState::basis(ctx.message_layout, 0);
                     return Challenge{zero, zero, {}};
                   },
                   [bit](const GameContext&, const std::any&, const QuantumState&, Rng&) { return bit; }};
}

inline ClassicalAdversary blind_classical(int bit) {
  return ClassicalAdversary{"blind", [](const GameContext&, Rng&) { return ClassicalChoice{0, 0, {}}; },
                            [bit](const GameContext&, const std::any&, Word, Rng&) { return bit; }};
}

// Classical messages as basis states; the returned ciphertext state is measured
// register by register in the computational basis and the outcome handed to the
// classical adversary.
inline Adversary embed_classical(ClassicalAdversary inner) {
  auto shared = std::make_shared<ClassicalAdversary>(std::move(inner));
  Adversary a;
  a.name = "embed:" + shared->name;
  a.prepare = [shared](const GameContext& ctx, Rng& rng) {
    ClassicalChoice choice = shared->choose(ctx, rng);
    return Challenge{QuantumState::basis(ctx.message_layout, choice.m0),
                     QuantumState::basis(ctx.message_layout, choice.m1), std::move(choice.token)};
  };
  a.guess = [shared](const GameContext& ctx, const std::any& token, const QuantumState& psi, Rng& rng) {
    QuantumState state = psi;
    Word c = 0;
    for (const auto& reg : psi.layout().registers()) {
      auto [outcome, post] = qsim::measure_register(state, reg.name, qsim::Basis::Computational, rng);
      c = (c << reg.width) | outcome.value;
      state = std::move(post);
    }
    return shared->guess(ctx, token, c, rng);
  };
  return a;
}

}  // namespace qs2lab::games
