#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qs2lab/core/rng.hpp"
#include "qs2lab/qsim/permutation.hpp"
#include "qs2lab/qsim/state.hpp"

namespace qs2lab::qsim {

enum class Basis { Computational, Hadamard };

struct MeasurementOutcome {
  std::string register_name;
  Word value = 0;
  unsigned width = 0;
  double probability = 0.0;

  std::string bits() const { return format_bits(value, width); }
};

inline QuantumState make_basis_state(const RegisterLayout& layout, const std::map<std::string, std::string>& assignment) {
  std::map<std::string, Word> values;
  for (const auto& [name, text] : assignment) {
    values[name] = parse_bits(text, layout.width_of(name));
  }
  return QuantumState::basis(layout, layout.pack(values));
}

inline QuantumState apply_permutation(const QuantumState& state, const BasisPermutation& perm) {
  if (!(state.layout() == perm.input_layout())) {
    fail(Errc::LayoutMismatch, "state layout " + state.layout().to_string() + " vs permutation input " +
                                   perm.input_layout().to_string());
  }
  const Word dim = state.dimension();
  if (state.is_pure()) {
    const auto amps = state.amplitudes();
    std::vector<Complex> out(dim);
    for (Word i = 0; i < dim; ++i) {
      if (amps[i] == Complex{}) continue;
      out[perm(i)] = amps[i];
    }
    return QuantumState::pure(perm.output_layout(), std::move(out));
  }
  // rho -> P rho P^T by relabeling both indices.
  std::vector<Word> image(dim);
  for (Word i = 0; i < dim; ++i) image[i] = perm(i);
  const auto rho = state.density();
  std::vector<Complex> out(dim * dim);
  for (Word i = 0; i < dim; ++i) {
    for (Word j = 0; j < dim; ++j) out[image[i] * dim + image[j]] = rho[i * dim + j];
  }
  return QuantumState::mixed(perm.output_layout(), std::move(out));
}

namespace detail {

// In-place Walsh-Hadamard butterfly over the bits [shift, shift + width) of the
// index of `data`, where consecutive logical entries are `stride` apart and
// there are `count` logical entries starting at `offset`.
inline void butterfly(std::vector<Complex>& data, Word count, Word offset, Word stride, unsigned shift, unsigned width) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (unsigned b = shift; b < shift + width; ++b) {
    const Word bit = Word{1} << b;
    for (Word i = 0; i < count; ++i) {
      if (i & bit) continue;
      Complex& x = data[offset + i * stride];
      Complex& y = data[offset + (i | bit) * stride];
      const Complex a = x, c = y;
      x = (a + c) * inv_sqrt2;
      y = (a - c) * inv_sqrt2;
    }
  }
}

struct FieldSpec {
  unsigned shift;
  unsigned width;
};

inline std::vector<FieldSpec> fields_of(const RegisterLayout& layout, const std::vector<std::string>& names) {
  std::vector<FieldSpec> out;
  for (const auto& r : layout.registers()) {
    if (std::find(names.begin(), names.end(), r.name) != names.end()) {
      out.push_back({layout.shift_of(r.name), r.width});
    }
  }
  return out;
}

inline Word gather(Word index, const std::vector<FieldSpec>& fields) {
  Word out = 0;
  for (const auto& f : fields) out = (out << f.width) | ((index >> f.shift) & low_mask(f.width));
  return out;
}

inline Word scatter(Word packed, const std::vector<FieldSpec>& fields) {
  Word out = 0;
  for (auto it = fields.rbegin(); it != fields.rend(); ++it) {
    out |= (packed & low_mask(it->width)) << it->shift;
    packed >>= it->width;
  }
  return out;
}

}  // namespace detail

inline QuantumState hadamard_register(const QuantumState& state, const std::string& name) {
  const unsigned shift = state.layout().shift_of(name);
  const unsigned width = state.layout().width_of(name);
  const Word dim = state.dimension();
  if (state.is_pure()) {
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    detail::butterfly(amps, dim, 0, 1, shift, width);
    return QuantumState::pure(state.layout(), std::move(amps));
  }
  // H rho H with H real symmetric: transform every row, then every column.
  std::vector<Complex> rho(state.density().begin(), state.density().end());
  for (Word row = 0; row < dim; ++row) detail::butterfly(rho, dim, row * dim, 1, shift, width);
  for (Word col = 0; col < dim; ++col) detail::butterfly(rho, dim, col, dim, shift, width);
  return QuantumState::mixed(state.layout(), std::move(rho));
}

// Traces out every register not listed in `keep`. Kept registers stay in
// layout order. A pure input whose cut is unentangled yields a pure result;
// otherwise the result is a density matrix.
inline QuantumState partial_trace(const QuantumState& state, const std::vector<std::string>& keep) {
  if (keep.empty()) fail(Errc::EmptyKeepSet, "partial_trace needs at least one kept register");
  const RegisterLayout& layout = state.layout();
  RegisterLayout kept = layout.subset(keep);
  std::vector<std::string> kept_names, traced_names;
  for (const auto& r : layout.registers()) {
    (kept.contains(r.name) ? kept_names : traced_names).push_back(r.name);
  }
  if (traced_names.empty()) return state.relayout(kept);
  const auto keep_fields = detail::fields_of(layout, kept_names);
  const auto trace_fields = detail::fields_of(layout, traced_names);
  const Word kdim = kept.dimension();

  if (state.is_pure()) {
    const auto amps = state.amplitudes();
    std::map<Word, std::vector<std::pair<Word, Complex>>> columns;
    double total = 0.0;
    for (Word i = 0; i < state.dimension(); ++i) {
      if (amps[i] == Complex{}) continue;
      columns[detail::gather(i, trace_fields)].emplace_back(detail::gather(i, keep_fields), amps[i]);
      total += std::norm(amps[i]);
    }
    if (columns.empty()) fail(Errc::InvalidState, "partial_trace of the zero vector");

    // Product check: every column proportional to the heaviest one.
    const auto& ref = std::max_element(columns.begin(), columns.end(), [](const auto& a, const auto& b) {
                        double na = 0, nb = 0;
                        for (const auto& [_, x] : a.second) na += std::norm(x);
                        for (const auto& [_, x] : b.second) nb += std::norm(x);
                        return na < nb;
                      })->second;
    std::vector<Complex> ref_dense(kdim);
    double ref_norm = 0.0;
    for (const auto& [k, a] : ref) {
      ref_dense[k] = a;
      ref_norm += std::norm(a);
    }
    bool product = true;
    for (const auto& [t, col] : columns) {
      Complex overlap{};
      double col_norm = 0.0;
      for (const auto& [k, a] : col) {
        overlap += std::conj(ref_dense[k]) * a;
        col_norm += std::norm(a);
      }
      // Distance from col to its projection on ref:
      // ||col||^2 - |<ref|col>|^2 / ||ref||^2.
      if (col_norm - std::norm(overlap) / ref_norm > kTolerance * kTolerance) {
        product = false;
        break;
      }
    }
    if (product) {
      QuantumState::check_cap(kept, StateKind::Pure);
      const double scale = std::sqrt(total / ref_norm);
      for (auto& a : ref_dense) a *= scale;
      return QuantumState::pure(std::move(kept), std::move(ref_dense));
    }
    QuantumState::check_cap(kept, StateKind::Mixed);
    std::vector<Complex> rho(kdim * kdim);
    for (const auto& [t, col] : columns) {
      for (const auto& [k1, a1] : col) {
        for (const auto& [k2, a2] : col) rho[k1 * kdim + k2] += a1 * std::conj(a2);
      }
    }
    return QuantumState::mixed(std::move(kept), std::move(rho));
  }

  const Word dim = state.dimension();
  const auto rho = state.density();
  const Word tdim = dimension_of(layout.total_width() - kept.total_width());
  std::vector<Word> keep_scatter(kdim), trace_scatter(tdim);
  for (Word k = 0; k < kdim; ++k) keep_scatter[k] = detail::scatter(k, keep_fields);
  for (Word t = 0; t < tdim; ++t) trace_scatter[t] = detail::scatter(t, trace_fields);
  std::vector<Complex> out(kdim * kdim);
  for (Word k1 = 0; k1 < kdim; ++k1) {
    for (Word k2 = 0; k2 < kdim; ++k2) {
      Complex acc{};
      for (Word t = 0; t < tdim; ++t) {
        acc += rho[(keep_scatter[k1] | trace_scatter[t]) * dim + (keep_scatter[k2] | trace_scatter[t])];
      }
      out[k1 * kdim + k2] = acc;
    }
  }
  return QuantumState::mixed(std::move(kept), std::move(out));
}

// Born distribution of a register in the computational basis.
inline std::vector<double> register_distribution(const QuantumState& state, const std::string& name) {
  const auto& layout = state.layout();
  std::vector<double> probs(dimension_of(layout.width_of(name)), 0.0);
  for (Word i = 0; i < state.dimension(); ++i) probs[layout.extract(i, name)] += state.probability(i);
  return probs;
}

inline std::pair<MeasurementOutcome, QuantumState> measure_register(const QuantumState& state, const std::string& name,
                                                                     Basis basis, Rng& rng) {
  const auto& layout = state.layout();
  const unsigned width = layout.width_of(name);
  const QuantumState frame = basis == Basis::Hadamard ? hadamard_register(state, name) : state;
  const auto probs = register_distribution(frame, name);

  const double u = uniform_unit(rng);
  double cumulative = 0.0;
  Word outcome = probs.size();
  for (Word v = 0; v < probs.size(); ++v) {
    cumulative += probs[v];
    if (u < cumulative) {
      outcome = v;
      break;
    }
  }
  if (outcome == probs.size()) {
    // Rounding left u above the final partial sum; take the last supported value.
    for (Word v = probs.size(); v-- > 0;) {
      if (probs[v] > 0.0) {
        outcome = v;
        break;
      }
    }
  }
  const double p = std::clamp(probs[outcome], 0.0, 1.0);

  const Word dim = state.dimension();
  std::vector<Complex> data;
  if (frame.is_pure()) {
    data.assign(frame.amplitudes().begin(), frame.amplitudes().end());
    const double scale = 1.0 / std::sqrt(probs[outcome]);
    for (Word i = 0; i < dim; ++i) data[i] = layout.extract(i, name) == outcome ? data[i] * scale : Complex{};
  } else {
    data.assign(frame.density().begin(), frame.density().end());
    for (Word i = 0; i < dim; ++i) {
      for (Word j = 0; j < dim; ++j) {
        const bool keep = layout.extract(i, name) == outcome && layout.extract(j, name) == outcome;
        data[i * dim + j] = keep ? data[i * dim + j] / probs[outcome] : Complex{};
      }
    }
  }
  QuantumState post = frame.is_pure() ? QuantumState::pure(layout, std::move(data))
                                      : QuantumState::mixed(layout, std::move(data));
  if (basis == Basis::Hadamard) post = hadamard_register(post, name);
  return {MeasurementOutcome{name, outcome, width, p}, std::move(post)};
}

inline double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (!(a.layout() == b.layout())) {
    fail(Errc::LayoutMismatch, "trace_distance over " + a.layout().to_string() + " and " + b.layout().to_string());
  }
  if (a.is_pure() && b.is_pure()) {
    Complex overlap{};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (Word i = 0; i < a.dimension(); ++i) overlap += std::conj(x[i]) * y[i];
    // 1 - |<a|b>|^2 = (d^2 / 2)(1 + |<a|b>|) with d = || a - e^{-i arg<a|b>} b ||,
    // which keeps precision when the states are nearly equal.
    const double mag = std::abs(overlap);
    const Complex phase = mag > 0 ? std::conj(overlap) / mag : Complex(1.0);
    double d2 = 0.0;
    for (Word i = 0; i < a.dimension(); ++i) d2 += std::norm(x[i] - phase * y[i]);
    return std::clamp(std::sqrt(std::max(0.0, 0.5 * d2 * (1.0 + mag))), 0.0, 1.0);
  }
  const Eigen::MatrixXcd diff = QuantumState::as_matrix(a.to_mixed()) - QuantumState::as_matrix(b.to_mixed());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * solver.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

// Moves registers into the given order (a pure relabeling of bit positions).
inline QuantumState reorder_registers(const QuantumState& state, const std::vector<std::string>& order) {
  const auto& from = state.layout();
  if (order.size() != from.size()) fail(Errc::LayoutMismatch, "reorder must list every register once");
  std::vector<Register> regs;
  for (const auto& n : order) regs.push_back({n, from.width_of(n)});
  RegisterLayout to(std::move(regs));
  std::vector<std::string> names;
  for (const auto& r : from.registers()) names.push_back(r.name);
  auto move = [from, to, names](Word i) {
    Word out = 0;
    for (const auto& n : names) out = to.insert(out, n, from.extract(i, n));
    return out;
  };
  auto back = [from, to, names](Word i) {
    Word out = 0;
    for (const auto& n : names) out = from.insert(out, n, to.extract(i, n));
    return out;
  };
  return apply_permutation(state, BasisPermutation(from, to, move, back));
}

// Uniform superposition H^{⊗w}|0…0⟩ over a single register.
inline QuantumState plus_state(const std::string& name, unsigned width) {
  RegisterLayout layout{{name, width}};
  const Word dim = layout.dimension();
  std::vector<Complex> amps(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
  return QuantumState::pure(std::move(layout), std::move(amps));
}

}  // namespace qs2lab::qsim
