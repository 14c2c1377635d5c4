#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qs2lab/qsim/layout.hpp"

namespace qs2lab::qsim {

using Complex = std::complex<double>;

inline constexpr unsigned kPureCap = 20;
inline constexpr unsigned kMixedCap = 10;

inline constexpr double kTolerance = 1e-9;
inline constexpr double kPurityTolerance = 1e-6;
inline constexpr double kPsdTolerance = 1e-8;

enum class StateKind { Pure, Mixed };

// Pure: amplitude vector of length 2^w. Mixed: row-major 2^w x 2^w density
// matrix. Values are immutable after construction; every operation returns a
// new state.
class QuantumState {
 public:
  static QuantumState pure(RegisterLayout layout, std::vector<Complex> amplitudes) {
    check_cap(layout, StateKind::Pure);
    if (amplitudes.size() != layout.dimension()) {
      fail(Errc::WidthMismatch, "amplitude vector length does not match layout " + layout.to_string());
    }
    return QuantumState(std::move(layout), StateKind::Pure, std::move(amplitudes));
  }

  static QuantumState mixed(RegisterLayout layout, std::vector<Complex> density) {
    check_cap(layout, StateKind::Mixed);
    const Word dim = layout.dimension();
    if (density.size() != dim * dim) {
      fail(Errc::WidthMismatch, "density matrix size does not match layout " + layout.to_string());
    }
    return QuantumState(std::move(layout), StateKind::Mixed, std::move(density));
  }

  static QuantumState basis(RegisterLayout layout, Word index) {
    check_cap(layout, StateKind::Pure);
    if (index >= layout.dimension()) fail(Errc::WidthMismatch, "basis index out of range");
    std::vector<Complex> amps(layout.dimension());
    amps[index] = 1.0;
    return QuantumState(std::move(layout), StateKind::Pure, std::move(amps));
  }

  static QuantumState maximally_mixed(RegisterLayout layout) {
    check_cap(layout, StateKind::Mixed);
    const Word dim = layout.dimension();
    std::vector<Complex> rho(dim * dim);
    for (Word i = 0; i < dim; ++i) rho[i * dim + i] = 1.0 / static_cast<double>(dim);
    return QuantumState(std::move(layout), StateKind::Mixed, std::move(rho));
  }

  const RegisterLayout& layout() const noexcept { return layout_; }
  StateKind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == StateKind::Pure; }
  Word dimension() const noexcept { return layout_.dimension(); }

  std::span<const Complex> amplitudes() const {
    if (!is_pure()) fail(Errc::InvalidState, "amplitudes requested from a mixed state");
    return data_;
  }
  std::span<const Complex> density() const {
    if (is_pure()) fail(Errc::InvalidState, "density requested from a pure state; call to_mixed()");
    return data_;
  }

  Complex amplitude(Word i) const { return amplitudes()[i]; }

  Complex rho(Word i, Word j) const {
    if (is_pure()) return data_[i] * std::conj(data_[j]);
    return data_[i * dimension() + j];
  }

  // Squared norm for pure states, trace for mixed ones.
  double norm() const {
    double total = 0.0;
    if (is_pure()) {
      for (const auto& a : data_) total += std::norm(a);
    } else {
      const Word dim = dimension();
      for (Word i = 0; i < dim; ++i) total += data_[i * dim + i].real();
    }
    return total;
  }

  double purity() const {
    if (is_pure()) {
      const double n = norm();
      return n * n;
    }
    double total = 0.0;
    for (const auto& x : data_) total += std::norm(x);  // Tr(rho^2) for Hermitian rho
    return total;
  }

  // Born probability of basis index i.
  double probability(Word i) const {
    if (is_pure()) return std::norm(data_[i]);
    return data_[i * dimension() + i].real();
  }

  QuantumState to_mixed() const {
    if (!is_pure()) return *this;
    check_cap(layout_, StateKind::Mixed);
    const Word dim = dimension();
    std::vector<Complex> rho(dim * dim);
    for (Word i = 0; i < dim; ++i) {
      if (data_[i] == Complex{}) continue;
      for (Word j = 0; j < dim; ++j) rho[i * dim + j] = data_[i] * std::conj(data_[j]);
    }
    return QuantumState(layout_, StateKind::Mixed, std::move(rho));
  }

  // Reinterprets the same bits under another layout of equal total width, e.g.
  // splitting a ciphertext register into its parts.
  QuantumState relayout(RegisterLayout layout) const {
    if (layout.total_width() != layout_.total_width()) {
      fail(Errc::LayoutMismatch, "relayout " + layout_.to_string() + " -> " + layout.to_string());
    }
    return QuantumState(std::move(layout), kind_, data_);
  }

  // this ⊗ other, with other's registers appended (least significant).
  QuantumState tensor(const QuantumState& other) const {
    RegisterLayout joint = layout_.append(other.layout_);
    const Word db = other.dimension();
    if (is_pure() && other.is_pure()) {
      check_cap(joint, StateKind::Pure);
      std::vector<Complex> amps(joint.dimension());
      for (Word i = 0; i < dimension(); ++i) {
        if (data_[i] == Complex{}) continue;
        for (Word j = 0; j < db; ++j) amps[(i << other.layout_.total_width()) | j] = data_[i] * other.data_[j];
      }
      return QuantumState(std::move(joint), StateKind::Pure, std::move(amps));
    }
    check_cap(joint, StateKind::Mixed);
    const QuantumState a = to_mixed();
    const QuantumState b = other.to_mixed();
    const Word da = dimension();
    const Word dim = da * db;
    std::vector<Complex> rho(dim * dim);
    const unsigned wb = other.layout_.total_width();
    for (Word i1 = 0; i1 < da; ++i1) {
      for (Word j1 = 0; j1 < da; ++j1) {
        const Complex x = a.data_[i1 * da + j1];
        if (x == Complex{}) continue;
        for (Word i2 = 0; i2 < db; ++i2) {
          for (Word j2 = 0; j2 < db; ++j2) {
            rho[((i1 << wb) | i2) * dim + ((j1 << wb) | j2)] = x * b.data_[i2 * db + j2];
          }
        }
      }
    }
    return QuantumState(std::move(joint), StateKind::Mixed, std::move(rho));
  }

  // Throws InvalidState unless the state meets its representation invariants:
  // unit norm for pure; Hermitian, unit trace and PSD for mixed.
  void validate() const {
    if (std::abs(norm() - 1.0) > kTolerance) {
      fail(Errc::InvalidState, "norm/trace deviates from 1 by " + std::to_string(std::abs(norm() - 1.0)));
    }
    if (is_pure()) return;
    const Word dim = dimension();
    for (Word i = 0; i < dim; ++i) {
      for (Word j = i; j < dim; ++j) {
        if (std::abs(data_[i * dim + j] - std::conj(data_[j * dim + i])) > kTolerance) {
          fail(Errc::InvalidState, "density matrix is not Hermitian");
        }
      }
    }
    if (min_eigenvalue() < -kPsdTolerance) fail(Errc::InvalidState, "density matrix is not PSD");
  }

  double min_eigenvalue() const {
    const auto m = as_matrix(to_mixed());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  static Eigen::MatrixXcd as_matrix(const QuantumState& mixed_state) {
    const Word dim = mixed_state.dimension();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Word i = 0; i < dim; ++i) {
      for (Word j = 0; j < dim; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mixed_state.rho(i, j);
      }
    }
    return m;
  }

  static void check_cap(const RegisterLayout& layout, StateKind kind) {
    const unsigned cap = kind == StateKind::Pure ? kPureCap : kMixedCap;
    if (layout.total_width() > cap) {
      fail(Errc::CapExceeded, std::string(kind == StateKind::Pure ? "pure" : "mixed") + " state of width " +
                                  std::to_string(layout.total_width()) + " exceeds cap " + std::to_string(cap));
    }
    if (layout.empty()) fail(Errc::EmptyKeepSet, "state needs at least one register");
  }

 private:
  QuantumState(RegisterLayout layout, StateKind kind, std::vector<Complex> data)
      : layout_(std::move(layout)), kind_(kind), data_(std::move(data)) {}

  RegisterLayout layout_;
  StateKind kind_;
  std::vector<Complex> data_;
};

}  // namespace qs2lab::qsim
