#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qs2lab/attacks/attacks.hpp"
#include "qs2lab/schemes/descriptor.hpp"

namespace qs2lab::attacks {

using nlohmann::json;

enum class AttackKind { Quantum, Classical, Both, Builtin };

inline std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Quantum: return "quantum";
    case AttackKind::Classical: return "classical";
    case AttackKind::Both: return "quantum+classical";
    case AttackKind::Builtin: return "builtin";
  }
  return "?";
}

struct AttackDescriptor {
  std::string name;
  std::string target;
  std::string claimed_win_rate;  // exact value or a formula in l (message bits)
  std::string rationale;
  AttackKind kind = AttackKind::Quantum;
};

inline json to_json(const AttackDescriptor& d) {
  return json{{"name", d.name},
              {"target", d.target},
              {"claimed_win_rate", d.claimed_win_rate},
              {"rationale", d.rationale},
              {"kind", to_string(d.kind)}};
}

inline const std::vector<AttackDescriptor>& attack_registry() {
  static const std::vector<AttackDescriptor> reg = {
      {"lwe-hadamard", "toy-lwe", "1",
       "challenges H|0..0> and H|1..1>; with q = 2 the c1 register is an XOR translation of the wired message, so "
       "undoing the public wiring and measuring in the Hadamard basis reveals b",
       AttackKind::Quantum},
      {"rollo-hadamard", "toy-rollo", "1 - 2^-(l+1)",
       "challenges |0..0> and H|0..0>; the one-time pad on c1 fixes |+>^l, so an all-zero Hadamard outcome is certain "
       "for b = 1 and has probability 2^-l for b = 0 (3/4 at l = 1)",
       AttackKind::Quantum},
      {"ske-hadamard", "ske-otp-prf", "1 - 2^-(l+1)",
       "the same Hadamard test on the message part cm of a pad-style symmetric ciphertext", AttackKind::Quantum},
      {"hybrid-lifting", "hybrid", "at least the inner symmetric attack's win rate",
       "forwards the inner attack's challenge, discards the key encapsulation c2 and runs the inner attack on c1; "
       "the inner attack defaults to ske-hadamard, `hybrid-lifting:<attack>` picks another",
       AttackKind::Quantum},
      {"blind", "any", "1/2", "ignores the ciphertext and outputs 0", AttackKind::Both},
      {"c1-pad-guess", "toy-rollo", "1/2",
       "classical m0 = 0..0 versus m1 = 1..1, guessing from the parity of c1 alone; the pad makes c1 uniform",
       AttackKind::Classical},
      {"exhaustive-search", "any isometric scheme", "1/2 + Pr[Enc(pk, 1; r) is outside the image of Enc(pk, 0; .)] / 2",
       "classical m0 = 0 versus m1 = 1; re-encrypts 0 under every randomness value with pk", AttackKind::Classical},
      {"randomness-reencrypt", "any scheme (forbidden-randomness game)", "1 for distinct m0, m1",
       "receives the randomness register, XORs Enc(m0; r) into the ciphertext with the type-1 operator and "
       "answers 0 iff the result measures to 0",
       AttackKind::Builtin},
  };
  return reg;
}

inline const AttackDescriptor& find_attack(const std::string& name) {
  for (const auto& d : attack_registry()) {
    if (d.name == name) return d;
  }
  fail(Errc::ConfigError, "unknown attack '" + name + "'");
}

struct AttackInstance {
  AttackDescriptor descriptor;
  std::optional<Adversary> quantum;
  std::optional<ClassicalAdversary> classical;
};

inline unsigned message_bits_of(const schemes::BuiltScheme& b) {
  return b.is_ske() ? b.ske->widths.m_bits : b.pke->widths.m_bits;
}

// Instantiates a registry attack against a built scheme. Accepts
// `embed:<classical attack>` for a classical attack lifted to the quantum game
// and `hybrid-lifting:<attack>` for a non-default inner attack.
inline AttackInstance make_attack(const std::string& name, const schemes::BuiltScheme& scheme) {
  const std::string embed_prefix = "embed:";
  if (name.rfind(embed_prefix, 0) == 0) {
    AttackInstance inner = make_attack(name.substr(embed_prefix.size()), scheme);
    if (!inner.classical) fail(Errc::ConfigError, "embed: needs a classical attack, '" + inner.descriptor.name + "' is not");
    AttackInstance out;
    out.descriptor = inner.descriptor;
    out.descriptor.name = name;
    out.descriptor.kind = AttackKind::Quantum;
    out.descriptor.rationale = "classical attack with basis-state challenges and a computational measurement: " +
                               inner.descriptor.rationale;
    out.quantum = games::embed_classical(*inner.classical);
    return out;
  }
  const std::string lifting_prefix = "hybrid-lifting:";
  std::string base = name;
  std::string inner_name = "ske-hadamard";
  if (name.rfind(lifting_prefix, 0) == 0) {
    base = "hybrid-lifting";
    inner_name = name.substr(lifting_prefix.size());
  }

  AttackInstance out;
  out.descriptor = find_attack(base);
  out.descriptor.name = name;
  const unsigned m_bits = message_bits_of(scheme);
  if (base == "lwe-hadamard") {
    out.quantum = lwe_hadamard_adversary(schemes::encode_params_of(scheme));
  } else if (base == "rollo-hadamard") {
    out.quantum = rollo_hadamard_adversary(m_bits);
  } else if (base == "ske-hadamard") {
    out.quantum = ske_hadamard_adversary(m_bits);
  } else if (base == "hybrid-lifting") {
    if (scheme.descriptor.value("name", "") != "hybrid") {
      fail(Errc::LayoutMismatch, "hybrid-lifting targets a hybrid scheme, got '" + scheme.descriptor.value("name", "") + "'");
    }
    const schemes::BuiltScheme ske = schemes::build_scheme(scheme.descriptor["params"]["ske"]);
    AttackInstance inner = make_attack(inner_name, ske);
    if (!inner.quantum) fail(Errc::ConfigError, "hybrid-lifting needs a quantum inner attack");
    out.quantum = hybrid_lifting_adversary(*inner.quantum, ske.symmetric().ciphertext_layout());
  } else if (base == "blind") {
    out.quantum = games::blind_adversary(0);
    out.classical = games::blind_classical(0);
  } else if (base == "c1-pad-guess") {
    out.classical = c1_pad_guess_adversary();
  } else if (base == "exhaustive-search") {
    out.classical = exhaustive_search_adversary();
  }
  return out;
}

}  // namespace qs2lab::attacks
