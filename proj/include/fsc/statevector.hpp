// Copyright 2026 The fscvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/pauli.hpp"

namespace fsc {

/// Imaginary residue tolerated in <s|O|s> for Hermitian O.
inline constexpr double kExpectationImagTolerance = 1e-10;

/// Dense amplitude vector over 2^n basis states. Basis index bit (n-1-q) is qubit q.
class StateVector {
 public:
  StateVector() = default;

  static StateVector from_amplitudes(std::size_t qubits, std::vector<Complex> amps) {
    if (qubits > 30) throw std::invalid_argument("statevector limited to 30 qubits");
    if (amps.size() != (std::size_t{1} << qubits))
      throw std::invalid_argument("amplitude count " + std::to_string(amps.size()) +
                                  " does not equal 2^" + std::to_string(qubits));
    StateVector s;
    s.qubits_ = qubits;
    s.amps_ = std::move(amps);
    return s;
  }

  std::size_t qubits() const { return qubits_; }
  std::size_t dimension() const { return amps_.size(); }

  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    for (auto& a : amps_) a /= n;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t qubits_ = 0;
  std::vector<Complex> amps_;
};

inline StateVector basis_state(std::size_t qubits, std::uint64_t index) {
  if (qubits > 30) throw std::invalid_argument("statevector limited to 30 qubits");
  const std::uint64_t dim = std::uint64_t{1} << qubits;
  if (index >= dim)
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range for " +
                            std::to_string(qubits) + " qubits");
  std::vector<Complex> amps(dim, Complex(0.0, 0.0));
  amps[index] = 1.0;
  return StateVector::from_amplitudes(qubits, std::move(amps));
}

namespace detail {

inline double parity_sign(std::uint64_t b, std::uint64_t z_mask) {
  return (__builtin_popcountll(b & z_mask) & 1) ? -1.0 : 1.0;
}

inline void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": size mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + " qubits)");
}

}  // namespace detail

/// In-place exp(-i (theta/2) w) on raw amplitudes.
inline void rotate(std::span<Complex> amps, const MaskedWord& w, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex mis(0.0, -s);
  const std::uint64_t dim = amps.size();
  if (w.x_mask == 0) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const Complex ph = w.phase * detail::parity_sign(b, w.z_mask);
      amps[b] *= Complex(c, 0.0) + mis * ph;
    }
    return;
  }
  // Pair (b, b ^ x) once, with b holding the lower index.
  const std::uint64_t top = std::uint64_t{1} << (63 - __builtin_clzll(w.x_mask));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & top) continue;
    const std::uint64_t f = b ^ w.x_mask;
    const Complex ab = amps[b];
    const Complex af = amps[f];
    // (w psi)[f] = phase * sign(b) * psi[b]
    const Complex wb = w.phase * detail::parity_sign(b, w.z_mask);
    const Complex wf = w.phase * detail::parity_sign(f, w.z_mask);
    amps[b] = c * ab + mis * wf * af;
    amps[f] = c * af + mis * wb * ab;
  }
}

inline void rotate(StateVector& s, const PauliWord& w, double theta) {
  detail::check_sizes(s.qubits(), w.size(), "apply_pauli_rotation");
  rotate(s.amplitudes(), MaskedWord::from(w), theta);
}

/// exp(-i (theta/2) w)|s> = cos(theta/2)|s> - i sin(theta/2) w|s>.
inline StateVector apply_pauli_rotation(StateVector s, const PauliWord& w, double theta) {
  rotate(s, w, theta);
  return s;
}

/// w|s>.
inline StateVector apply_pauli_word(const StateVector& s, const PauliWord& w) {
  detail::check_sizes(s.qubits(), w.size(), "apply_pauli_word");
  const auto mw = MaskedWord::from(w);
  std::vector<Complex> out(s.dimension());
  for (std::uint64_t b = 0; b < s.dimension(); ++b)
    out[b ^ mw.x_mask] = mw.phase * detail::parity_sign(b, mw.z_mask) * s[b];
  return StateVector::from_amplitudes(s.qubits(), std::move(out));
}

/// O|s>, not normalized.
inline std::vector<Complex> apply_operator(const PauliSum& o, std::span<const Complex> amps) {
  std::vector<Complex> out(amps.size(), Complex(0.0, 0.0));
  for (const auto& t : o.masked_terms()) {
    const Complex k = t.coefficient * t.word.phase;
    for (std::uint64_t b = 0; b < amps.size(); ++b)
      out[b ^ t.word.x_mask] += k * detail::parity_sign(b, t.word.z_mask) * amps[b];
  }
  return out;
}

/// <a|b>.
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  detail::check_sizes(a.qubits(), b.qubits(), "inner_product");
  return inner_product(a.amplitudes(), b.amplitudes());
}

/// <bra|O|ket> for any (not necessarily Hermitian) O.
inline Complex matrix_element(std::span<const Complex> bra, const PauliSum& o,
                              std::span<const Complex> ket) {
  if (bra.size() != ket.size() || ket.size() != (std::size_t{1} << o.qubits()))
    throw std::invalid_argument("matrix_element: dimension mismatch");
  Complex s(0.0, 0.0);
  for (const auto& t : o.masked_terms()) {
    const Complex k = t.coefficient * t.word.phase;
    Complex acc(0.0, 0.0);
    for (std::uint64_t b = 0; b < ket.size(); ++b)
      acc += std::conj(bra[b ^ t.word.x_mask]) * detail::parity_sign(b, t.word.z_mask) * ket[b];
    s += k * acc;
  }
  return s;
}

inline Complex matrix_element(const StateVector& bra, const PauliSum& o, const StateVector& ket) {
  detail::check_sizes(bra.qubits(), ket.qubits(), "matrix_element");
  detail::check_sizes(o.qubits(), ket.qubits(), "matrix_element");
  return matrix_element(bra.amplitudes(), o, ket.amplitudes());
}

/// <s|O|s> on raw amplitudes; skips the Hermiticity check (hot path).
inline double expectation_unchecked(std::span<const Complex> amps, const PauliSum& o) {
  const Complex v = matrix_element(amps, o, amps);
  if (std::abs(v.imag()) > kExpectationImagTolerance * std::max(1.0, o.one_norm()))
    throw std::logic_error("expectation: imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

/// <s|O|s> for Hermitian O.
inline double expectation(const StateVector& s, const PauliSum& o) {
  detail::check_sizes(s.qubits(), o.qubits(), "expectation");
  if (!o.is_hermitian())
    throw std::invalid_argument("expectation: operator '" + o.label() + "' is not Hermitian");
  return expectation_unchecked(s.amplitudes(), o);
}

}  // namespace fsc
