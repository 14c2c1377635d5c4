#pragma once

#include <string>
#include <vector>

#include "qs2lab/operators/builders.hpp"
#include "qs2lab/qsim/ops.hpp"

namespace qs2lab::operators {

// One type-2 oracle call with a fixed classical randomness value: the r register
// is factored out of the permutation (it is |r><r| throughout and traced out at
// the end), ancilla/work start at |0...0>, and the result is returned over the
// scheme's ciphertext parts.
inline qsim::QuantumState type2_oracle_call_with_r(const OracleOperator& op, const qsim::QuantumState& plaintext,
                                                   Word r) {
  if (!op.is_type2()) fail(Errc::InvalidArgument, "oracle call needs a type-2 operator, got " + to_string(op.kind));
  const qsim::RegisterLayout expected{{"m", op.widths.m_bits}};
  if (!(plaintext.layout() == expected)) {
    fail(Errc::LayoutMismatch, "plaintext layout " + plaintext.layout().to_string() + ", expected " +
                                   expected.to_string());
  }
  const BasisPermutation fixed = op.widths.r_bits > 0 ? op.perm.fix_register("r", r) : op.perm;
  const qsim::RegisterLayout zeros = fixed.input_layout().without({"m"});
  qsim::QuantumState input = zeros.empty() ? plaintext : plaintext.tensor(qsim::QuantumState::basis(zeros, 0));
  qsim::QuantumState out = qsim::apply_permutation(input, fixed);
  if (out.layout().size() > 1) out = qsim::partial_trace(out, {"c"});
  std::vector<qsim::Register> parts;
  for (const auto& p : op.parts) {
    if (p.width > 0) parts.push_back({p.name, p.width});
  }
  return out.relayout(qsim::RegisterLayout(std::move(parts)));
}

inline qsim::QuantumState type2_oracle_call(const OracleOperator& op, const qsim::QuantumState& plaintext, Rng& rng) {
  return type2_oracle_call_with_r(op, plaintext, uniform_bits(rng, op.widths.r_bits));
}

}  // namespace qs2lab::operators
