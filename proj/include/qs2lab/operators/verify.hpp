#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qs2lab/operators/builders.hpp"

namespace qs2lab::operators {

struct ContractFailure {
  std::string contract;
  Word index = 0;  // offending basis index, or packed (m, r) for type-2 checks
  Word m = 0;
  Word r = 0;
  std::string detail;
};

inline constexpr unsigned kSpotCheckSamples = 4096;

// For every (r, m): op |r, m, 0...0> = |r, Enc(pk, m; r)> (x) |0...0>, as a
// single basis index. `enc` is the classical reference, usually scheme.enc.
inline std::optional<ContractFailure> verify_type2_contract(const OracleOperator& op,
                                                            const std::function<Word(Word m, Word r)>& enc) {
  const auto& w = op.widths;
  const unsigned tail = op.perm.output_layout().total_width() - w.r_bits - w.c_bits;
  const unsigned zeros_in = op.perm.input_layout().total_width() - w.r_bits - w.m_bits;
  for (Word r = 0; r < dimension_of(w.r_bits); ++r) {
    for (Word m = 0; m < dimension_of(w.m_bits); ++m) {
      const Word in = ((r << w.m_bits) | m) << zeros_in;
      const Word expected = ((r << w.c_bits) | enc(m, r)) << tail;
      const Word got = op.perm(in);
      if (got != expected) {
        return ContractFailure{"type2-canonical-action", in, m, r,
                               "got index " + std::to_string(got) + ", expected " + std::to_string(expected)};
      }
    }
  }
  return std::nullopt;
}

// Exhaustive when the operator fits the materialization cap, otherwise a spot
// check of forward/inverse consistency on seeded indices plus every index with
// zero ancilla (the inputs that matter for the type-2 contract).
inline std::optional<ContractFailure> verify_bijection(const OracleOperator& op, std::uint64_t seed = 0) {
  if (op.perm.width() <= qsim::kMaterializeCap) {
    if (auto bad = op.perm.find_bijection_violation()) return ContractFailure{"bijection", *bad, 0, 0, ""};
    return std::nullopt;
  }
  std::vector<Word> sample;
  Rng rng(seed);
  for (unsigned i = 0; i < kSpotCheckSamples; ++i) sample.push_back(uniform_bits(rng, op.perm.width()));
  if (auto bad = op.perm.find_inverse_violation(sample)) return ContractFailure{"bijection-spot", *bad, 0, 0, ""};
  return std::nullopt;
}

inline std::optional<ContractFailure> verify_involution(const OracleOperator& op, std::uint64_t seed = 0) {
  auto check = [&](Word i) -> std::optional<ContractFailure> {
    if (op.perm(op.perm(i)) != i) return ContractFailure{"involution", i, 0, 0, ""};
    return std::nullopt;
  };
  if (op.perm.width() <= qsim::kMaterializeCap) {
    for (Word i = 0; i < op.perm.input_layout().dimension(); ++i) {
      if (auto bad = check(i)) return bad;
    }
    return std::nullopt;
  }
  Rng rng(seed);
  for (unsigned k = 0; k < kSpotCheckSamples; ++k) {
    if (auto bad = check(uniform_bits(rng, op.perm.width()))) return bad;
  }
  return std::nullopt;
}

}  // namespace qs2lab::operators
