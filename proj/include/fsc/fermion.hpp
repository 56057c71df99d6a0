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

// Second-quantized operators and the Jordan-Wigner map.
//
// Spin orbitals are interleaved: spatial orbital i carries alpha at index 2i
// and beta at 2i+1. Spin orbital p is qubit p, and an occupied orbital is |1>.

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/pauli.hpp"

namespace fsc {

struct LadderOp {
  std::size_t index = 0;
  bool dagger = false;
};

/// coefficient * product of ladder operators, leftmost factor applied last.
struct LadderProduct {
  std::vector<LadderOp> factors;
  Complex coefficient{1.0, 0.0};

  LadderProduct adjoint() const {
    LadderProduct out;
    out.coefficient = std::conj(coefficient);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.factors.push_back({it->index, !it->dagger});
    return out;
  }
};

/// Anti-Hermitian JW-mapped excitation generators T - T^dagger.
struct GeneratorSet {
  std::size_t qubits = 0;
  std::vector<PauliSum> generators;
  std::vector<std::string> labels;

  std::size_t size() const { return generators.size(); }
  std::size_t word_count() const {
    std::size_t n = 0;
    for (const auto& g : generators) n += g.terms().size();
    return n;
  }
};

namespace detail {

// a_p^dagger -> (X_p - iY_p)/2 and a_p -> (X_p + iY_p)/2, each behind Z on qubits < p.
inline PauliSum jw_ladder(const LadderOp& op, std::size_t n) {
  std::vector<Pauli> x(n, Pauli::I);
  for (std::size_t q = 0; q < op.index; ++q) x[q] = Pauli::Z;
  std::vector<Pauli> y = x;
  x[op.index] = Pauli::X;
  y[op.index] = Pauli::Y;
  const Complex y_coeff(0.0, op.dagger ? -0.5 : 0.5);
  return PauliSum(n, {{Complex(0.5, 0.0), PauliWord(std::move(x))}, {y_coeff, PauliWord(std::move(y))}});
}

inline bool is_alpha(std::size_t p) { return p % 2 == 0; }

}  // namespace detail

inline PauliSum jordan_wigner(const LadderProduct& p, std::size_t n_spin_orbitals) {
  PauliSum out = PauliSum::from_word(PauliWord::identity(n_spin_orbitals), p.coefficient);
  for (const auto& f : p.factors) {
    if (f.index >= n_spin_orbitals)
      throw std::out_of_range(fmt::format("ladder index {} out of range for {} spin orbitals", f.index,
                                          n_spin_orbitals));
    out = simplify(out * detail::jw_ladder(f, n_spin_orbitals));
  }
  return out;
}

inline PauliSum jordan_wigner(std::span<const LadderProduct> products, std::size_t n_spin_orbitals) {
  PauliSum out = PauliSum::zero(n_spin_orbitals);
  for (const auto& p : products) out = out + jordan_wigner(p, n_spin_orbitals);
  return simplify(out);
}

/// Basis index of a determinant (occupied spin orbitals set to |1>).
inline std::uint64_t occupation_index(std::size_t n_spin_orbitals, std::span<const std::size_t> occupied) {
  std::uint64_t idx = 0;
  for (auto p : occupied) {
    if (p >= n_spin_orbitals) throw std::out_of_range("occupied orbital out of range");
    idx |= std::uint64_t{1} << (n_spin_orbitals - 1 - p);
  }
  return idx;
}

/// Lowest-energy filling for a given electron count and Sz: the lowest
/// spatial orbitals of each spin are occupied.
inline std::vector<std::size_t> reference_occupation(std::size_t n_spin_orbitals, int n_electrons,
                                                     double sz) {
  const double n_alpha_f = 0.5 * n_electrons + sz;
  const double n_beta_f = 0.5 * n_electrons - sz;
  const long n_alpha = std::lround(n_alpha_f);
  const long n_beta = std::lround(n_beta_f);
  const long n_spatial = static_cast<long>(n_spin_orbitals / 2);
  if (std::abs(n_alpha_f - static_cast<double>(n_alpha)) > 1e-9 || n_alpha < 0 || n_beta < 0 ||
      n_alpha > n_spatial || n_beta > n_spatial)
    throw std::invalid_argument(
        fmt::format("no determinant with N={} and Sz={} in {} spin orbitals", n_electrons, sz, n_spin_orbitals));
  std::vector<std::size_t> occ;
  for (long i = 0; i < n_alpha; ++i) occ.push_back(static_cast<std::size_t>(2 * i));
  for (long i = 0; i < n_beta; ++i) occ.push_back(static_cast<std::size_t>(2 * i + 1));
  std::sort(occ.begin(), occ.end());
  return occ;
}

/// Spin-preserving singles and Sz-preserving doubles out of `occupied`.
inline GeneratorSet uccsd_generators(std::size_t n_spin_orbitals, std::span<const std::size_t> occupied) {
  if (occupied.empty() || occupied.size() >= n_spin_orbitals)
    throw std::invalid_argument(fmt::format("invalid electron count {} for {} spin orbitals", occupied.size(),
                                            n_spin_orbitals));
  std::vector<std::size_t> occ(occupied.begin(), occupied.end());
  std::sort(occ.begin(), occ.end());
  if (std::adjacent_find(occ.begin(), occ.end()) != occ.end())
    throw std::invalid_argument("duplicate occupied orbital");
  std::vector<std::size_t> vir;
  for (std::size_t p = 0; p < n_spin_orbitals; ++p)
    if (!std::binary_search(occ.begin(), occ.end(), p)) vir.push_back(p);
  if (occ.back() >= n_spin_orbitals) throw std::out_of_range("occupied orbital out of range");

  GeneratorSet set;
  set.qubits = n_spin_orbitals;
  auto add = [&](LadderProduct t, std::string label) {
    auto g = simplify(jordan_wigner(t, n_spin_orbitals) - jordan_wigner(t.adjoint(), n_spin_orbitals));
    if (g.empty()) return;
    set.generators.push_back(g.with_metadata(label, Units::dimensionless));
    set.labels.push_back(std::move(label));
  };

  for (auto i : occ)
    for (auto a : vir)
      if (detail::is_alpha(i) == detail::is_alpha(a))
        add({{{a, true}, {i, false}}}, fmt::format("{}^ {}", a, i));

  auto spin_count = [](std::size_t p, std::size_t q) { return int(detail::is_alpha(p)) + int(detail::is_alpha(q)); };
  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < vir.size(); ++u)
        for (std::size_t v = u + 1; v < vir.size(); ++v) {
          const auto i = occ[x], j = occ[y], a = vir[u], b = vir[v];
          if (spin_count(i, j) != spin_count(a, b)) continue;
          add({{{a, true}, {b, true}, {j, false}, {i, false}}}, fmt::format("{}^ {}^ {} {}", a, b, j, i));
        }
  return set;
}

/// Generators relative to the determinant with the lowest `n_electrons` spin orbitals filled.
inline GeneratorSet uccsd_generators(std::size_t n_spin_orbitals, std::size_t n_electrons) {
  if (n_electrons == 0 || n_electrons >= n_spin_orbitals)
    throw std::invalid_argument(
        fmt::format("invalid electron count {} for {} spin orbitals", n_electrons, n_spin_orbitals));
  std::vector<std::size_t> occ(n_electrons);
  for (std::size_t p = 0; p < n_electrons; ++p) occ[p] = p;
  return uccsd_generators(n_spin_orbitals, occ);
}

struct SymmetryOperators {
  PauliSum number;
  PauliSum sz;
  PauliSum s2;
};

/// Particle number, S_z and S^2 in JW form (hbar = 1).
inline SymmetryOperators symmetry_operators(std::size_t n_spin_orbitals) {
  if (n_spin_orbitals == 0 || n_spin_orbitals % 2 != 0)
    throw std::invalid_argument("symmetry_operators needs an even, nonzero spin-orbital count");
  const std::size_t n = n_spin_orbitals;
  auto num = [n](std::size_t p) { return jordan_wigner(LadderProduct{{{p, true}, {p, false}}}, n); };

  PauliSum number = PauliSum::zero(n);
  PauliSum sz = PauliSum::zero(n);
  PauliSum s_plus = PauliSum::zero(n);
  PauliSum s_minus = PauliSum::zero(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto na = num(2 * i), nb = num(2 * i + 1);
    number = number + na + nb;
    sz = sz + 0.5 * (na - nb);
    s_plus = s_plus + jordan_wigner(LadderProduct{{{2 * i, true}, {2 * i + 1, false}}}, n);
    s_minus = s_minus + jordan_wigner(LadderProduct{{{2 * i + 1, true}, {2 * i, false}}}, n);
  }
  number = simplify(number);
  sz = simplify(sz);
  // S^2 = S- S+ + Sz + Sz^2
  auto s2 = simplify(simplify(s_minus) * simplify(s_plus) + sz + sz * sz);
  return {number.with_metadata("number", Units::dimensionless), sz.with_metadata("sz", Units::dimensionless),
          s2.with_metadata("s2", Units::dimensionless)};
}

}  // namespace fsc
