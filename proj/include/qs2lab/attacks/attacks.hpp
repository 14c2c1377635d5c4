#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qs2lab/games/adversary.hpp"
#include "qs2lab/schemes/lwe.hpp"

namespace qs2lab::attacks {

using games::Adversary;
using games::Challenge;
using games::ClassicalAdversary;
using games::ClassicalChoice;
using games::GameContext;
using qsim::BasisPermutation;
using qsim::QuantumState;
using qsim::RegisterLayout;

namespace detail {

inline void require_register(const QuantumState& psi, const std::string& name, const std::string& attack) {
  if (!psi.layout().contains(name)) {
    fail(Errc::LayoutMismatch, attack + " expects a '" + name + "' ciphertext register, got " + psi.layout().to_string());
  }
}

inline void require_message_width(const GameContext& ctx, unsigned m_bits, const std::string& attack) {
  if (ctx.message_layout.total_width() != m_bits) {
    fail(Errc::LayoutMismatch, attack + " built for " + std::to_string(m_bits) + " message bits, game has " +
                                   std::to_string(ctx.message_layout.total_width()));
  }
}

inline bool hadamard_outcome_is_zero(const QuantumState& reg_state, const std::string& name, Rng& rng) {
  const auto [outcome, post] = qsim::measure_register(reg_state, name, qsim::Basis::Hadamard, rng);
  return outcome.value == 0;
}

}  // namespace detail

// Challenges |0..0> and H|0..0>. A ciphertext register that is the message
// XOR a pad turns H|0..0> into |+>^l, whose Hadamard measurement is all-zero
// with certainty; a basis state gives all-zero with probability 2^-l. Guess 1
// iff the outcome is all-zero, for a win rate of 1 - 2^-(l+1).
inline Adversary hadamard_pad_adversary(std::string name, std::string target_register, unsigned m_bits) {
  Adversary a;
  a.name = name;
  a.prepare = [name, m_bits](const GameContext& ctx, Rng&) {
    detail::require_message_width(ctx, m_bits, name);
    const auto zero = QuantumState::basis(ctx.message_layout, 0);
    return Challenge{zero, qsim::hadamard_register(zero, "m"), {}};
  };
  a.guess = [name, target_register](const GameContext&, const std::any&, const QuantumState& psi, Rng& rng) {
    detail::require_register(psi, target_register, name);
    const QuantumState kept = qsim::partial_trace(psi, {target_register});
    return detail::hadamard_outcome_is_zero(kept, target_register, rng) ? 1 : 0;
  };
  return a;
}

inline Adversary rollo_hadamard_adversary(unsigned m_bits) {
  return hadamard_pad_adversary("rollo-hadamard", "c1", m_bits);
}

inline Adversary ske_hadamard_adversary(unsigned m_bits) {
  return hadamard_pad_adversary("ske-hadamard", "cm", m_bits);
}

// Challenges H|0..0> and H|1..1>. With q = 2 the c1 register holds
// w XOR pi(m) for a classical w fixed by (pk, r). Undoing the public wiring pi
// leaves pi^-1(w) XOR m, and an XOR translation only changes the global phase of
// a Hadamard-basis state, so the Hadamard outcome is 0..0 for b = 0 and 1..1
// for b = 1.
inline Adversary lwe_hadamard_adversary(schemes::EncodeParams encode) {
  encode.validate();
  auto wiring = std::make_shared<const schemes::EncodeParams>(std::move(encode));
  Adversary a;
  a.name = "lwe-hadamard";
  a.prepare = [wiring](const GameContext& ctx, Rng&) {
    detail::require_message_width(ctx, wiring->width(), "lwe-hadamard");
    const auto& layout = ctx.message_layout;
    return Challenge{qsim::hadamard_register(QuantumState::basis(layout, 0), "m"),
                     qsim::hadamard_register(QuantumState::basis(layout, low_mask(layout.total_width())), "m"),
                     {}};
  };
  a.guess = [wiring](const GameContext&, const std::any&, const QuantumState& psi, Rng& rng) {
    detail::require_register(psi, "c1", "lwe-hadamard");
    const QuantumState c1 = qsim::partial_trace(psi, {"c1"});
    if (c1.layout().total_width() != wiring->width()) {
      fail(Errc::LayoutMismatch, "lwe-hadamard: c1 width differs from the encode wiring");
    }
    const BasisPermutation undo(c1.layout(), [wiring](Word y) { return wiring->invert(y); },
                                [wiring](Word m) { return wiring->apply(m); });
    const QuantumState unwired = qsim::apply_permutation(c1, undo);
    return detail::hadamard_outcome_is_zero(unwired, "c1", rng) ? 0 : 1;
  };
  return a;
}

// Attacks a hybrid by attacking its symmetric part: forwards the inner
// challenge, discards the public-key part c2, reads c1 as a symmetric
// ciphertext laid out as `ske_ciphertext` and returns the inner guess.
inline Adversary hybrid_lifting_adversary(Adversary inner, RegisterLayout ske_ciphertext) {
  auto shared = std::make_shared<const Adversary>(std::move(inner));
  Adversary a;
  a.name = "hybrid-lifting(" + shared->name + ")";
  a.prepare = [shared](const GameContext& ctx, Rng& rng) { return shared->prepare(ctx, rng); };
  a.guess = [shared, ske_ciphertext](const GameContext& ctx, const std::any& token, const QuantumState& psi,
                                     Rng& rng) {
    const auto& regs = psi.layout().registers();
    if (regs.size() != 2 || regs[0].name != "c1" || regs[1].name != "c2") {
      fail(Errc::LayoutMismatch, "hybrid-lifting needs a (c1, c2) hybrid ciphertext, got " + psi.layout().to_string());
    }
    if (regs[0].width != ske_ciphertext.total_width()) {
      fail(Errc::LayoutMismatch, "hybrid-lifting: c1 has " + std::to_string(regs[0].width) +
                                     " bits but the symmetric ciphertext " + ske_ciphertext.to_string() + " has " +
                                     std::to_string(ske_ciphertext.total_width()));
    }
    const QuantumState c1 = qsim::partial_trace(psi, {"c1"}).relayout(ske_ciphertext);
    GameContext inner_ctx = ctx;
    inner_ctx.ciphertext_layout = ske_ciphertext;
    return shared->guess(inner_ctx, token, c1, rng);
  };
  return a;
}

// Classical adversaries for IND-qCPA and, wrapped with embed_classical, for the
// quantum game.

// m0 = 0..0, m1 = 1..1, guesses the parity of the c1 part.
inline ClassicalAdversary c1_pad_guess_adversary() {
  ClassicalAdversary a;
  a.name = "c1-pad-guess";
  a.choose = [](const GameContext& ctx, Rng&) {
    return ClassicalChoice{0, low_mask(ctx.message_layout.total_width()), {}};
  };
  a.guess = [](const GameContext& ctx, const std::any&, Word c, Rng&) {
    const auto& layout = ctx.ciphertext_layout;
    const Word c1 = layout.contains("c1") ? layout.extract(c, "c1") : c;
    return static_cast<int>(parity(c1));
  };
  return a;
}

// m0 = 0, m1 = 1; re-encrypts m0 under every randomness value with the public
// key and guesses 0 iff some value reproduces c.
inline ClassicalAdversary exhaustive_search_adversary() {
  ClassicalAdversary a;
  a.name = "exhaustive-search";
  a.choose = [](const GameContext& ctx, Rng&) {
    if (!ctx.public_enc) fail(Errc::InvalidArgument, "exhaustive-search needs a public encryption function");
    return ClassicalChoice{0, 1, {}};
  };
  a.guess = [](const GameContext& ctx, const std::any&, Word c, Rng&) {
    for (Word r = 0; r < dimension_of(ctx.r_bits); ++r) {
      if (ctx.public_enc(0, r) == c) return 0;
    }
    return 1;
  };
  return a;
}

}  // namespace qs2lab::attacks
