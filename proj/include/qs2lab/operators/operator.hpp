#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "qs2lab/qsim/permutation.hpp"
#include "qs2lab/schemes/scheme.hpp"

namespace qs2lab::operators {

enum class OperatorKind { Type1Enc, Type1Dec, Type1Rec, Type2Canonical, TypePi, Type2Transformed };
enum class KeyMaterial { PublicOnly, PublicAndSecret };
enum class Construction { None, Fig2, Fig3, Fig8 };
enum class Verification { Exhaustive, Trusted };

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Type1Enc: return "type1-enc";
    case OperatorKind::Type1Dec: return "type1-dec";
    case OperatorKind::Type1Rec: return "type1-rec";
    case OperatorKind::Type2Canonical: return "type2-canonical";
    case OperatorKind::TypePi: return "type-pi";
    case OperatorKind::Type2Transformed: return "type2-transformed";
  }
  return "?";
}

inline std::string to_string(Construction c) {
  switch (c) {
    case Construction::None: return "none";
    case Construction::Fig2: return "fig2";
    case Construction::Fig3: return "fig3";
    case Construction::Fig8: return "fig8";
  }
  return "?";
}

inline std::string to_string(KeyMaterial k) {
  return k == KeyMaterial::PublicOnly ? "public-only" : "public-and-secret";
}

// Counts every scheme function a builder wired into its operator, including
// calls made by the builder's own pre-checks. `sk_reads` counts builder entry
// points that were handed a secret key.
struct Audit {
  std::atomic<std::uint64_t> enc{0};
  std::atomic<std::uint64_t> dec{0};
  std::atomic<std::uint64_t> rec{0};
  std::atomic<std::uint64_t> tdf{0};
  std::atomic<std::uint64_t> tdf_inverse{0};
  std::atomic<std::uint64_t> sk_reads{0};
};

struct OracleOperator {
  OperatorKind kind;
  Construction construction = Construction::None;
  qsim::BasisPermutation perm;
  KeyMaterial key_material = KeyMaterial::PublicOnly;
  std::shared_ptr<Audit> audit;
  schemes::PkeWidths widths;
  std::vector<schemes::Part> parts;

  const qsim::RegisterLayout& layout() const noexcept { return perm.input_layout(); }
  bool is_type2() const noexcept {
    return kind == OperatorKind::Type2Canonical || kind == OperatorKind::Type2Transformed;
  }
};

}  // namespace qs2lab::operators
