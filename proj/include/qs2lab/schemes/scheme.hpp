#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qs2lab/core/rng.hpp"
#include "qs2lab/qsim/layout.hpp"

namespace qs2lab::schemes {

// A ciphertext is split into named big-endian parts, e.g. (c1, c2). The parts
// become the registers an adversary sees after a type-2 oracle call.
struct Part {
  std::string name;
  unsigned width = 0;
};

struct Keypair {
  Word pk = 0;
  Word sk = 0;
};

struct PkeWidths {
  unsigned r_bits = 0;
  unsigned m_bits = 0;
  unsigned c_bits = 0;
  unsigned pk_bits = 0;
  unsigned sk_bits = 0;
};

struct ClassicalScheme;

// Message pre-processing by a deterministic trapdoor permutation: the scheme
// encrypts forward(pk, m) under `inner`. Only the transformed construction
// carries one.
struct TrapdoorLayer {
  std::shared_ptr<const ClassicalScheme> inner;
  std::function<Word(Word pk)> inner_pk;
  std::function<Word(Word pk, Word m)> forward;
  std::function<Word(Word sk, Word y)> inverse;
};

// A PKE given as bitstring functions over declared widths. Rec is optional;
// when present it must satisfy Rec(pk, r, Enc(pk, m; r)) = m for all (m, r).
struct ClassicalScheme {
  using KeyGen = std::function<Keypair(Word randomness)>;
  using Enc = std::function<Word(Word pk, Word m, Word r)>;
  using Dec = std::function<Word(Word sk, Word c)>;
  using Rec = std::function<Word(Word pk, Word r, Word c)>;

  std::string name;
  PkeWidths widths;
  std::vector<Part> parts;
  KeyGen kgen;
  Enc enc;
  Dec dec;
  Rec rec;
  std::shared_ptr<const TrapdoorLayer> trapdoor;

  bool has_rec() const noexcept { return static_cast<bool>(rec); }

  Keypair keygen(Rng& rng) const { return kgen(rng()); }

  qsim::RegisterLayout message_layout() const { return qsim::RegisterLayout{{"m", widths.m_bits}}; }

  qsim::RegisterLayout ciphertext_layout() const {
    std::vector<qsim::Register> regs;
    for (const auto& p : parts) regs.push_back({p.name, p.width});
    return qsim::RegisterLayout::compact(std::move(regs));
  }
};

struct SkeWidths {
  unsigned key_bits = 0;
  unsigned m_bits = 0;
  unsigned c_bits = 0;
  unsigned r_bits = 0;
};

struct SkeScheme {
  using KeyGen = std::function<Word(Word randomness)>;
  using Enc = std::function<Word(Word key, Word m, Word r)>;
  using Dec = std::function<Word(Word key, Word c)>;

  std::string name;
  SkeWidths widths;
  std::vector<Part> parts;
  KeyGen kgen;
  Enc enc;
  Dec dec;

  Word keygen(Rng& rng) const { return kgen(rng()); }

  qsim::RegisterLayout message_layout() const { return qsim::RegisterLayout{{"m", widths.m_bits}}; }

  qsim::RegisterLayout ciphertext_layout() const {
    std::vector<qsim::Register> regs;
    for (const auto& p : parts) regs.push_back({p.name, p.width});
    return qsim::RegisterLayout::compact(std::move(regs));
  }
};

inline void check_parts(const std::string& name, const std::vector<Part>& parts, unsigned c_bits) {
  unsigned total = 0;
  for (const auto& p : parts) total += p.width;
  if (total != c_bits) fail(Errc::WidthMismatch, name + ": ciphertext parts do not sum to c_bits");
}

}  // namespace qs2lab::schemes
