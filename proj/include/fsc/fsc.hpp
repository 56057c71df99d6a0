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

// Frame superposition clusters: trained unitaries U with U^n|j> = |k>, whose
// half powers build |+> and |y+> for off-diagonal matrix elements.

#pragma once

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/ansatz.hpp"
#include "fsc/optimize.hpp"
#include "fsc/pauli.hpp"
#include "fsc/statevector.hpp"

namespace fsc {

struct FscConfig {
  int uccsd_depth = 4;
  int ham_depth = 1;
  int n = 2;
  ParameterSharing sharing = ParameterSharing::per_word;
  OptimizerConfig optimizer{};
  double init_scale = 0.1;
  double wide_scale = std::numbers::pi;
  double fidelity_threshold = 0.999;
  double h_const_threshold = 1e-4;
  double degeneracy_tolerance = 1e-6;
  double good_enough = 1e-12;

  void validate() const {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument(fmt::format("FSC power n={} must be even and >= 2", n));
    if (uccsd_depth < 0 || ham_depth < 0) throw std::invalid_argument("FSC depths must be >= 0");
    optimizer.validate();
  }
};

struct FscOperator {
  AnsatzCircuit circuit;
  int n = 2;
  std::size_t j = 0;
  std::size_t k = 0;
  double loss = 0.0;
  double fidelity = 1.0;  ///< |<k|U^n|j>|^2
  double h_const = 0.0;
  double objective = 0.0;  ///< a(H) + b(H) + H_const
  bool converged = false;
  std::vector<TraceEntry> trace;
};

struct SuperpositionPair {
  StateVector plus;
  StateVector yplus;
  std::size_t j = 0;
  std::size_t k = 0;
  bool converged = true;
};

struct OffDiagonalResult {
  std::string label;
  Units units = Units::dimensionless;
  double a = 0.0;
  double b = 0.0;
  double magnitude = 0.0;
  double h_const = 0.0;
};

/// U applied `times` times.
inline StateVector apply_power(const AnsatzCircuit& c, std::span<const double> theta, StateVector s, int times) {
  for (int t = 0; t < times; ++t) apply_circuit(c, theta, s.amplitudes());
  return s;
}

inline StateVector apply_power(const FscOperator& op, const StateVector& s, int times) {
  return apply_power(op.circuit, op.circuit.parameters, s, times);
}

namespace detail {

inline void check_pair(std::size_t j, std::size_t k, std::size_t m) {
  if (j >= m || k >= m) throw std::out_of_range(fmt::format("state pair ({}, {}) out of range for {} states", j, k, m));
}

inline void check_normalized(const StateVector& s, const char* what) {
  if (std::abs(s.norm() - 1.0) > 1e-10) throw std::invalid_argument(fmt::format("{} is not normalized", what));
}

/// (j + i e^{i phi} k)/sqrt2 with phi the relative phase of k against j in `plus`.
inline StateVector quarter_turn(const StateVector& plus, const StateVector& sj, const StateVector& sk) {
  const Complex cj = inner_product(sj, plus);
  const Complex ck = inner_product(sk, plus);
  Complex rel(1.0, 0.0);
  if (std::abs(cj) > 1e-12 && std::abs(ck) > 1e-12) {
    rel = ck / cj;
    rel /= std::abs(rel);
  }
  const Complex w = Complex(0.0, 1.0) * rel / std::sqrt(2.0);
  std::vector<Complex> amps(sj.dimension());
  for (std::size_t b = 0; b < amps.size(); ++b) amps[b] = sj[b] / std::sqrt(2.0) + w * sk[b];
  return StateVector::from_amplitudes(sj.qubits(), std::move(amps));
}

/// Normalized projection coefficients (<j|s>, <k|s>).
inline std::pair<Complex, Complex> projection(const StateVector& s, const StateVector& sj, const StateVector& sk) {
  Complex a = inner_product(sj, s);
  Complex b = inner_product(sk, s);
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  if (nrm < 1e-12) return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  return {a / nrm, b / nrm};
}

}  // namespace detail

/// a = <+|O|+> - avg, b = <y+|O|y+> - avg with avg = (O_jj + O_kk)/2.
inline OffDiagonalResult extract_offdiagonal(const SuperpositionPair& pair, const PauliSum& observable, double o_jj,
                                             double o_kk) {
  if (!observable.is_hermitian())
    throw std::invalid_argument(fmt::format("observable '{}' is not Hermitian", observable.label()));
  detail::check_normalized(pair.plus, "|+>");
  detail::check_normalized(pair.yplus, "|y+>");
  const double avg = 0.5 * (o_jj + o_kk);
  OffDiagonalResult r;
  r.label = observable.label();
  r.units = observable.units();
  r.a = expectation(pair.plus, observable) - avg;
  r.b = expectation(pair.yplus, observable) - avg;
  r.magnitude = std::hypot(r.a, r.b);
  return r;
}

/// a + ib = <j|O|k> by direct contraction.
inline OffDiagonalResult direct_offdiagonal(const StateVector& sj, const StateVector& sk, const PauliSum& observable) {
  const Complex v = matrix_element(sj, observable, sk);
  OffDiagonalResult r;
  r.label = observable.label();
  r.units = observable.units();
  r.a = v.real();
  r.b = v.imag();
  r.magnitude = std::hypot(r.a, r.b);
  return r;
}

/// plus = (j + k)/sqrt2, yplus = (j + ik)/sqrt2 straight from amplitudes.
inline SuperpositionPair analytic_superposition_pair(const StateVector& sj, const StateVector& sk, std::size_t j = 0,
                                                     std::size_t k = 1) {
  detail::check_sizes(sj.qubits(), sk.qubits(), "analytic_superposition_pair");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Complex> p(sj.dimension()), y(sj.dimension());
  for (std::size_t b = 0; b < p.size(); ++b) {
    p[b] = r * (sj[b] + sk[b]);
    y[b] = r * (sj[b] + Complex(0.0, 1.0) * sk[b]);
  }
  return {StateVector::from_amplitudes(sj.qubits(), std::move(p)),
          StateVector::from_amplitudes(sj.qubits(), std::move(y)), j, k, true};
}

struct FscTransferTerms {
  double a = 0.0;
  double b = 0.0;
  double h_const = 0.0;
  double fidelity = 0.0;
  double weight_j = 0.0;  ///< |<j|U^{n/2}|j>|^2
  double weight_k = 0.0;  ///< |<k|U^{n/2}|j>|^2
};

/// Evaluates the pieces of F at `theta`; b uses the provisional quarter-turn state.
inline FscTransferTerms fsc_transfer_terms(const AnsatzCircuit& c, std::span<const double> theta, int n,
                                           const StateVector& sj, const StateVector& sk, const PauliSum& h,
                                           double e_jj, double e_kk) {
  const auto plus = apply_power(c, theta, sj, n / 2);
  const auto full = apply_power(c, theta, plus, n / 2);
  FscTransferTerms t;
  const double avg = 0.5 * (e_jj + e_kk);
  t.a = expectation_unchecked(plus.amplitudes(), h) - avg;
  t.b = expectation_unchecked(detail::quarter_turn(plus, sj, sk).amplitudes(), h) - avg;
  t.h_const = std::abs(e_kk - expectation_unchecked(full.amplitudes(), h));
  t.fidelity = std::norm(inner_product(sk, full));
  t.weight_j = std::norm(inner_product(sj, plus));
  t.weight_k = std::norm(inner_product(sk, plus));
  return t;
}

/// F = a(H) + b(H) + H_const for an operator over `states`.
inline double fsc_transfer_objective(const FscOperator& op, std::span<const StateVector> states, const PauliSum& h) {
  if (op.n < 2 || op.n % 2 != 0) throw std::invalid_argument(fmt::format("FSC power n={} must be even", op.n));
  detail::check_pair(op.j, op.k, states.size());
  const auto& sj = states[op.j];
  const auto& sk = states[op.k];
  const auto t = fsc_transfer_terms(op.circuit, op.circuit.parameters, op.n, sj, sk, h, expectation(sj, h),
                                    expectation(sk, h));
  return t.a + t.b + t.h_const;
}

namespace detail {

inline MultiStartOptions fsc_starts(const FscConfig& cfg) {
  MultiStartOptions o;
  o.init_scale = cfg.init_scale;
  o.wide_scale = cfg.wide_scale;
  o.good_enough = cfg.good_enough;
  return o;
}

}  // namespace detail

/// Trains U_{j->k}. The minimized loss vanishes exactly at a correct FSC:
/// (1 - fidelity) + leakage + imbalance^2 + H_const^2 + a(H)^2 + b(H)^2.
inline FscOperator optimize_fsc(std::size_t j, std::size_t k, std::span<const StateVector> states, const PauliSum& h,
                                const AnsatzSpec& body, const FscConfig& cfg) {
  cfg.validate();
  detail::check_pair(j, k, states.size());
  FscOperator op;
  op.circuit = build(body);
  op.n = cfg.n;
  op.j = j;
  op.k = k;
  const auto& sj = states[j];
  const auto& sk = states[k];
  if (j == k) {
    op.converged = true;
    return op;
  }
  const double e_jj = expectation(sj, h);
  const double e_kk = expectation(sk, h);
  auto loss = [&](std::span<const double> theta) {
    const auto t = fsc_transfer_terms(op.circuit, theta, cfg.n, sj, sk, h, e_jj, e_kk);
    const double imbalance = t.weight_j - t.weight_k;
    return (1.0 - t.fidelity) + (1.0 - t.weight_j - t.weight_k) + imbalance * imbalance + t.h_const * t.h_const +
           t.a * t.a + t.b * t.b;
  };
  const auto best = multistart(loss, op.circuit.parameter_count(), cfg.optimizer, detail::fsc_starts(cfg));
  op.circuit.parameters = best.x;
  op.loss = best.value;
  op.trace = best.trace;
  const auto t = fsc_transfer_terms(op.circuit, best.x, cfg.n, sj, sk, h, e_jj, e_kk);
  op.fidelity = t.fidelity;
  op.h_const = t.h_const;
  op.objective = t.a + t.b + t.h_const;
  op.converged = op.fidelity >= cfg.fidelity_threshold && op.h_const <= cfg.h_const_threshold;
  return op;
}

/// The state orthogonal to `plus` inside span{j, k}.
inline StateVector orthogonal_partner(const StateVector& plus, const StateVector& sj, const StateVector& sk) {
  const auto [alpha, beta] = detail::projection(plus, sj, sk);
  std::vector<Complex> amps(sj.dimension());
  for (std::size_t b = 0; b < amps.size(); ++b) amps[b] = std::conj(beta) * sj[b] - std::conj(alpha) * sk[b];
  return StateVector::from_amplitudes(sj.qubits(), std::move(amps));
}

/// Trains V with V^n|+> = |->; V^{n/2}|+> is pinned half-way, |<+|V^{n/2}+>|^2 = 1/2.
inline FscOperator optimize_plus_minus(const StateVector& plus, const StateVector& sj, const StateVector& sk,
                                       const AnsatzSpec& body, const FscConfig& cfg, std::size_t j = 0,
                                       std::size_t k = 1) {
  cfg.validate();
  FscOperator op;
  op.circuit = build(body);
  op.n = cfg.n;
  op.j = j;
  op.k = k;
  const auto minus = orthogonal_partner(plus, sj, sk);
  auto eval = [&](std::span<const double> theta, double* fidelity) {
    const auto half = apply_power(op.circuit, theta, plus, cfg.n / 2);
    const auto full = apply_power(op.circuit, theta, half, cfg.n / 2);
    const double cj = std::norm(inner_product(sj, half));
    const double ck = std::norm(inner_product(sk, half));
    const double turn = std::norm(inner_product(plus, half)) - 0.5;
    const double fid = std::norm(inner_product(minus, full));
    if (fidelity) *fidelity = fid;
    return (1.0 - fid) + (1.0 - cj - ck) + (cj - ck) * (cj - ck) + turn * turn;
  };
  const auto best = multistart([&](std::span<const double> t) { return eval(t, nullptr); },
                               op.circuit.parameter_count(), cfg.optimizer, detail::fsc_starts(cfg));
  op.circuit.parameters = best.x;
  op.loss = best.value;
  op.trace = best.trace;
  eval(best.x, &op.fidelity);
  op.converged = op.fidelity >= cfg.fidelity_threshold;
  return op;
}

/// plus = U_{j->k}^{n/2}|j>, yplus = U_{+->-}^{n/2}|plus>.
inline SuperpositionPair make_superposition_pair(const FscOperator& op_jk, const FscOperator& op_pm,
                                                 std::span<const StateVector> states) {
  detail::check_pair(op_jk.j, op_jk.k, states.size());
  SuperpositionPair p;
  p.j = op_jk.j;
  p.k = op_jk.k;
  p.plus = apply_power(op_jk, states[op_jk.j], op_jk.n / 2);
  p.yplus = apply_power(op_pm, p.plus, op_pm.n / 2);
  p.converged = op_jk.converged && op_pm.converged;
  return p;
}

/// Both FSCs for one pair plus the resulting superposition pair.
struct FscPair {
  FscOperator transfer;
  FscOperator turn;
  SuperpositionPair pair;
};

inline FscPair train_fsc_pair(std::size_t j, std::size_t k, std::span<const StateVector> states, const PauliSum& h,
                              const AnsatzSpec& body, const FscConfig& cfg) {
  FscPair out;
  out.transfer = optimize_fsc(j, k, states, h, body, cfg);
  const auto plus = apply_power(out.transfer, states[j], cfg.n / 2);
  out.turn = optimize_plus_minus(plus, states[j], states[k], body, cfg, j, k);
  out.pair = make_superposition_pair(out.transfer, out.turn, states);
  return out;
}

/// True when a conserved quantity S (commuting with H and every observable)
/// takes different sharp values on the two states, so every <j|O|k> vanishes.
inline bool selection_rule_forbids(const StateVector& sj, const StateVector& sk, const PauliSum& h,
                                   std::span<const PauliSum> observables, std::span<const PauliSum> symmetries,
                                   double tol = 1e-6) {
  for (const auto& s : symmetries) {
    if (!commutator(s, h).empty()) continue;
    bool all = true;
    for (const auto& o : observables) all = all && commutator(s, o).empty();
    if (!all) continue;
    auto sharp = [&](const StateVector& v, double& mean) {
      mean = expectation(v, s);
      const double sq = expectation(v, simplify(s * s));
      return std::abs(sq - mean * mean) <= tol;
    };
    double mj = 0.0, mk = 0.0;
    if (sharp(sj, mj) && sharp(sk, mk) && std::abs(mj - mk) > 0.25) return true;
  }
  return false;
}

enum class CellMethod { fsc, direct, selection_rule, oracle };

inline std::string cell_method_name(CellMethod m) {
  switch (m) {
    case CellMethod::fsc: return "fsc";
    case CellMethod::direct: return "direct";
    case CellMethod::selection_rule: return "selection_rule";
    case CellMethod::oracle: return "oracle";
  }
  return "?";
}

struct TransitionCell {
  std::size_t j = 0;
  std::size_t k = 0;
  std::vector<OffDiagonalResult> components;
  double magnitude = 0.0;  ///< Euclidean norm of the component magnitudes
  double frobenius = 0.0;  ///< norm of the observable block on span{j, k}
  double h_const = 0.0;
  double fidelity = 1.0;
  bool converged = true;
  bool degenerate = false;
  CellMethod method = CellMethod::fsc;
};

/// Upper-triangular cells (j < k) for one (possibly vector) observable.
struct TransitionMatrix {
  std::string label;
  Units units = Units::dimensionless;
  std::size_t size = 0;
  std::vector<TransitionCell> cells;

  const TransitionCell& at(std::size_t j, std::size_t k) const {
    if (j > k) std::swap(j, k);
    for (const auto& c : cells)
      if (c.j == j && c.k == k) return c;
    throw std::out_of_range(fmt::format("no transition cell ({}, {})", j, k));
  }

  /// Magnitude with the diagonal defined as zero.
  double magnitude(std::size_t j, std::size_t k) const { return j == k ? 0.0 : at(j, k).magnitude; }

  bool all_converged() const {
    for (const auto& c : cells)
      if (!c.converged) return false;
    return true;
  }
};

inline double vector_norm(std::span<const OffDiagonalResult> parts) {
  double s = 0.0;
  for (const auto& p : parts) s += p.magnitude * p.magnitude;
  return std::sqrt(s);
}

/// sqrt(sum over components of O_jj^2 + O_kk^2 + 2 |O_jk|^2).
inline double pair_frobenius(const StateVector& sj, const StateVector& sk, std::span<const PauliSum> components,
                             std::span<const OffDiagonalResult> parts) {
  double s = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const double ojj = expectation(sj, components[c]);
    const double okk = expectation(sk, components[c]);
    s += ojj * ojj + okk * okk + 2.0 * parts[c].magnitude * parts[c].magnitude;
  }
  return std::sqrt(s);
}

namespace detail {

inline TransitionMatrix empty_matrix(std::string label, std::span<const PauliSum> components, std::size_t m) {
  if (m < 2) throw std::invalid_argument("a transition matrix needs at least two states");
  if (components.empty()) throw std::invalid_argument("a transition matrix needs at least one observable component");
  TransitionMatrix t;
  t.label = std::move(label);
  t.units = components.front().units();
  t.size = m;
  return t;
}

}  // namespace detail

/// Direct contraction of every pair.
inline TransitionMatrix transition_matrix_direct(std::span<const StateVector> states, const PauliSum& h,
                                                 std::span<const PauliSum> components, std::string label,
                                                 double degeneracy_tolerance = 1e-6) {
  auto t = detail::empty_matrix(std::move(label), components, states.size());
  std::vector<double> e;
  for (const auto& s : states) e.push_back(expectation(s, h));
  for (std::size_t j = 0; j < states.size(); ++j)
    for (std::size_t k = j + 1; k < states.size(); ++k) {
      TransitionCell c;
      c.j = j;
      c.k = k;
      c.method = CellMethod::direct;
      c.degenerate = std::abs(e[j] - e[k]) < degeneracy_tolerance;
      for (const auto& o : components) c.components.push_back(direct_offdiagonal(states[j], states[k], o));
      c.magnitude = vector_norm(c.components);
      c.frobenius = pair_frobenius(states[j], states[k], components, c.components);
      t.cells.push_back(std::move(c));
    }
  return t;
}

/// FSC results for every trained pair; pairs[p] must cover (j, k) in row-major
/// upper-triangular order, with std::nullopt for selection-rule cells.
inline TransitionMatrix transition_matrix_fsc(std::span<const StateVector> states, const PauliSum& h,
                                              std::span<const std::optional<FscPair>> pairs,
                                              std::span<const PauliSum> components, std::string label,
                                              double degeneracy_tolerance = 1e-6) {
  auto t = detail::empty_matrix(std::move(label), components, states.size());
  const std::size_t m = states.size();
  if (pairs.size() != m * (m - 1) / 2)
    throw std::invalid_argument(fmt::format("expected {} FSC pairs, got {}", m * (m - 1) / 2, pairs.size()));
  std::vector<double> e;
  for (const auto& s : states) e.push_back(expectation(s, h));
  std::size_t p = 0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k, ++p) {
      TransitionCell c;
      c.j = j;
      c.k = k;
      c.degenerate = std::abs(e[j] - e[k]) < degeneracy_tolerance;
      if (!pairs[p]) {
        c.method = CellMethod::selection_rule;
        for (const auto& o : components) c.components.push_back({o.label(), o.units(), 0.0, 0.0, 0.0, 0.0});
      } else {
        const auto& fp = *pairs[p];
        if (fp.pair.j != j || fp.pair.k != k)
          throw std::invalid_argument(fmt::format("FSC pair {} covers ({}, {}), expected ({}, {})", p, fp.pair.j,
                                                  fp.pair.k, j, k));
        c.method = CellMethod::fsc;
        c.h_const = fp.transfer.h_const;
        c.fidelity = fp.transfer.fidelity;
        c.converged = fp.pair.converged;
        for (const auto& o : components) {
          auto r = extract_offdiagonal(fp.pair, o, expectation(states[j], o), expectation(states[k], o));
          r.h_const = fp.transfer.h_const;
          c.components.push_back(std::move(r));
        }
      }
      c.magnitude = vector_norm(c.components);
      c.frobenius = pair_frobenius(states[j], states[k], components, c.components);
      t.cells.push_back(std::move(c));
    }
  return t;
}

}  // namespace fsc
