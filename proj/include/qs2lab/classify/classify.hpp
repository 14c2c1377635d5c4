#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::classify {

using nlohmann::json;
using schemes::ClassicalScheme;
using schemes::Keypair;

inline constexpr unsigned kAlphaExhaustiveBits = 20;
inline constexpr unsigned kIsometryScanBits = 24;

enum class CorrectnessKind { Perfect, Partial };
enum class Recoverability { Yes, NoRecDeclared };
enum class Type2Path { Fig2, Fig3, Fig8, None };

struct Correctness {
  CorrectnessKind kind = CorrectnessKind::Perfect;
  double alpha = 0.0;
};

// Enc(pk, m1; r) = Enc(pk, m2; r) = c with m1 != m2.
struct IsometryWitness {
  Word r = 0;
  Word m1 = 0;
  Word m2 = 0;
  Word c = 0;
};

struct Isometry {
  std::optional<IsometryWitness> witness;  // empty: injective for every r
  bool isometric() const noexcept { return !witness.has_value(); }
};

struct Classification {
  std::string scheme;
  schemes::PkeWidths widths;
  Correctness correctness;
  Recoverability recoverable = Recoverability::NoRecDeclared;
  Isometry isometry;
  Type2Path type2_path = Type2Path::None;
};

inline std::string to_string(Type2Path p) {
  switch (p) {
    case Type2Path::Fig2: return "fig2";
    case Type2Path::Fig3: return "fig3";
    case Type2Path::Fig8: return "fig8";
    case Type2Path::None: return "none";
  }
  return "?";
}

// Fraction of (m, r) with Dec(sk, Enc(pk, m; r)) != m, exact by enumeration.
inline double measure_alpha(const ClassicalScheme& s, const Keypair& kp) {
  const unsigned bits = s.widths.r_bits + s.widths.m_bits;
  if (bits > kAlphaExhaustiveBits) {
    fail(Errc::CapExceeded, s.name + ": exhaustive alpha needs 2^" + std::to_string(bits) + " pairs");
  }
  std::uint64_t failures = 0;
  for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
    for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
      failures += s.dec(kp.sk, s.enc(kp.pk, m, r)) != m;
    }
  }
  return static_cast<double>(failures) / static_cast<double>(dimension_of(bits));
}

// Monte-Carlo estimate of the same quantity from `samples` uniform (m, r).
inline double measure_alpha_sampled(const ClassicalScheme& s, const Keypair& kp, std::uint64_t samples, Rng& rng) {
  if (samples == 0) fail(Errc::InvalidArgument, "sampled alpha needs at least one sample");
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Word m = uniform_bits(rng, s.widths.m_bits);
    const Word r = uniform_bits(rng, s.widths.r_bits);
    failures += s.dec(kp.sk, s.enc(kp.pk, m, r)) != m;
  }
  return static_cast<double>(failures) / static_cast<double>(samples);
}

// Scans r ascending, then m ascending, and reports the first collision.
inline Isometry check_isometric(const ClassicalScheme& s, Word pk) {
  const unsigned bits = s.widths.r_bits + 2 * s.widths.m_bits;
  if (bits > kIsometryScanBits) {
    fail(Errc::CapExceeded, s.name + ": isometry scan over 2^" + std::to_string(bits) + " exceeds the cap");
  }
  std::unordered_map<Word, Word> first;
  for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
    first.clear();
    for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
      const Word c = s.enc(pk, m, r);
      auto [it, inserted] = first.emplace(c, m);
      if (!inserted) return Isometry{IsometryWitness{r, it->second, m, c}};
    }
  }
  return Isometry{};
}

// Yes only when a declared Rec passes the exhaustive check; a declared Rec
// that fails is a contract violation, reported with its witness.
inline Recoverability check_recoverable(const ClassicalScheme& s, Word pk) {
  if (!s.has_rec()) return Recoverability::NoRecDeclared;
  for (Word r = 0; r < dimension_of(s.widths.r_bits); ++r) {
    for (Word m = 0; m < dimension_of(s.widths.m_bits); ++m) {
      const Word got = s.rec(pk, r, s.enc(pk, m, r));
      if (got != m) {
        fail(Errc::RecContractViolated, s.name + ": Rec returned " + format_bits(got, s.widths.m_bits) +
                                            " for m=" + format_bits(m, s.widths.m_bits) +
                                            " r=" + format_bits(r, s.widths.r_bits));
      }
    }
  }
  return Recoverability::Yes;
}

inline Type2Path type2_path(const ClassicalScheme& s, const Isometry& iso, Recoverability rec,
                            const Correctness& corr) {
  if (!iso.isometric()) return Type2Path::None;
  if (s.trapdoor) return Type2Path::Fig8;
  if (rec == Recoverability::Yes) return Type2Path::Fig3;
  if (corr.kind == CorrectnessKind::Perfect) return Type2Path::Fig2;
  return Type2Path::None;
}

inline Classification classify_scheme(const ClassicalScheme& s, const Keypair& kp) {
  Classification c;
  c.scheme = s.name;
  c.widths = s.widths;
  const double alpha = measure_alpha(s, kp);
  c.correctness = {alpha == 0.0 ? CorrectnessKind::Perfect : CorrectnessKind::Partial, alpha};
  c.recoverable = check_recoverable(s, kp.pk);
  c.isometry = check_isometric(s, kp.pk);
  c.type2_path = type2_path(s, c.isometry, c.recoverable, c.correctness);
  return c;
}

inline json to_json(const Classification& c) {
  json out;
  out["schema_version"] = 1;
  out["scheme"] = c.scheme;
  out["correctness"] = {{"kind", c.correctness.kind == CorrectnessKind::Perfect ? "Perfect" : "Partial"},
                        {"alpha", c.correctness.alpha}};
  out["recoverable"] = c.recoverable == Recoverability::Yes ? "yes" : "no-rec-declared";
  if (c.isometry.isometric()) {
    out["isometry"] = {{"kind", "IsometricWitnessed"}};
  } else {
    const auto& w = *c.isometry.witness;
    out["isometry"] = {{"kind", "NonIsometricWitnessed"},
                       {"witness",
                        {{"r", format_bits(w.r, c.widths.r_bits)},
                         {"m1", format_bits(w.m1, c.widths.m_bits)},
                         {"m2", format_bits(w.m2, c.widths.m_bits)},
                         {"c", format_bits(w.c, c.widths.c_bits)}}}};
  }
  out["type2_path"] = to_string(c.type2_path);
  return out;
}

}  // namespace qs2lab::classify
