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

// Variational drivers: VQE, VQD-deflated excited states with symmetry
// penalties, and the SSVQE baseline.

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/ansatz.hpp"
#include "fsc/fermion.hpp"
#include "fsc/optimize.hpp"
#include "fsc/pauli.hpp"
#include "fsc/statevector.hpp"

namespace fsc {

/// w * (<O> - target)^2 added to the objective.
struct Penalty {
  PauliSum op;
  double target = 0.0;
  double weight = 1.0;
};

/// beta * |<state|psi>|^2 added to the objective.
struct Deflation {
  StateVector state;
  double beta = 1.0;
};

struct VqeProblem {
  PauliSum hamiltonian;
  std::vector<Deflation> deflation;
  std::vector<Penalty> penalties;
  StateVector reference;
  AnsatzSpec spec;

  void validate() const {
    const auto n = hamiltonian.qubits();
    if (!hamiltonian.is_hermitian()) throw std::invalid_argument("Hamiltonian is not Hermitian");
    if (reference.qubits() != n) throw std::invalid_argument("reference/Hamiltonian qubit mismatch");
    if (spec.qubits() != n) throw std::invalid_argument("ansatz/Hamiltonian qubit mismatch");
    for (const auto& d : deflation) {
      if (!(d.beta > 0)) throw std::invalid_argument("deflation weights must be > 0");
      if (d.state.qubits() != n) throw std::invalid_argument("deflation state size mismatch");
    }
    for (const auto& p : penalties) {
      if (!(p.weight >= 0)) throw std::invalid_argument("penalty weights must be >= 0");
      if (p.op.qubits() != n) throw std::invalid_argument("penalty operator size mismatch");
      if (!p.op.is_hermitian()) throw std::invalid_argument("penalty operator is not Hermitian");
    }
  }
};

/// Quantum numbers a state is steered toward.
struct SectorTarget {
  std::string label;
  double number = 0.0;
  double sz = 0.0;
  double s2 = 0.0;
};

struct VqeResult {
  std::string label;
  SectorTarget target;
  std::vector<double> parameters;
  double energy = 0.0;
  double objective = 0.0;
  std::vector<double> penalty_residuals;  ///< <O_k> - target_k
  std::vector<double> overlap_residuals;  ///< |<Phi_i|psi>|^2
  std::vector<TraceEntry> trace;
  bool converged = false;
  double gradient_norm = 0.0;
  StateVector state;
  std::vector<std::size_t> occupation;  ///< reference determinant
};

/// Objective with the circuit built once; safe to call concurrently.
class VqeEvaluator {
 public:
  explicit VqeEvaluator(const VqeProblem& problem) : problem_(&problem), circuit_(build(problem.spec)) {
    problem.validate();
  }

  const AnsatzCircuit& circuit() const { return circuit_; }

  StateVector state(std::span<const double> theta) const { return prepare(circuit_, theta, problem_->reference); }

  double operator()(std::span<const double> theta) const { return value_of(state(theta)); }

  double value_of(const StateVector& psi) const {
    double v = expectation_unchecked(psi.amplitudes(), problem_->hamiltonian);
    for (const auto& d : problem_->deflation) v += d.beta * std::norm(inner_product(d.state, psi));
    for (const auto& p : problem_->penalties) {
      if (p.weight == 0.0) continue;
      const double dev = expectation_unchecked(psi.amplitudes(), p.op) - p.target;
      v += p.weight * dev * dev;
    }
    return v;
  }

 private:
  const VqeProblem* problem_;
  AnsatzCircuit circuit_;
};

/// E(theta) + sum_i beta_i |<Phi_i|psi>|^2 + sum_k w_k (<O_k> - t_k)^2.
inline double objective(const VqeProblem& problem, std::span<const double> theta) {
  return VqeEvaluator(problem)(theta);
}

inline VqeResult summarize(const VqeProblem& problem, const VqeEvaluator& eval, const LocalResult& opt) {
  VqeResult r;
  r.parameters = opt.x;
  r.state = eval.state(opt.x);
  r.energy = expectation(r.state, problem.hamiltonian);
  r.objective = eval.value_of(r.state);
  for (const auto& p : problem.penalties) r.penalty_residuals.push_back(expectation(r.state, p.op) - p.target);
  for (const auto& d : problem.deflation) r.overlap_residuals.push_back(std::norm(inner_product(d.state, r.state)));
  r.trace = opt.trace;
  r.converged = opt.converged;
  r.gradient_norm = opt.gradient_norm;
  return r;
}

/// Multi-start BFGS: the zero vector plus cfg.restarts draws in [-0.1, 0.1].
inline VqeResult minimize(const VqeProblem& problem, const OptimizerConfig& cfg) {
  VqeEvaluator eval(problem);
  const auto opt =
      multistart([&eval](std::span<const double> t) { return eval(t); }, eval.circuit().parameter_count(), cfg);
  return summarize(problem, eval, opt);
}

struct PenaltyWeights {
  double number = 1.0;
  double sz = 1.0;
  double s2 = 1.0;
};

struct SpectrumProblem {
  PauliSum hamiltonian;
  SymmetryOperators symmetry;
  std::vector<SectorTarget> targets;
  PenaltyWeights weights;
  int uccsd_depth = 2;
  int ham_depth = 2;
  ParameterSharing sharing = ParameterSharing::per_word;
  /// Deflation weight; defaults to 2 * sum |h_alpha|.
  std::optional<double> beta;
};

inline double default_deflation_beta(const PauliSum& h) { return 2.0 * h.one_norm(); }

/// Reference determinant for a sector target.
inline std::vector<std::size_t> target_occupation(std::size_t qubits, const SectorTarget& t) {
  const long n = std::lround(t.number);
  if (std::abs(t.number - static_cast<double>(n)) > 1e-9)
    throw std::invalid_argument(fmt::format("target '{}' has non-integer N={}", t.label, t.number));
  return reference_occupation(qubits, static_cast<int>(n), t.sz);
}

inline std::vector<Penalty> sector_penalties(const SymmetryOperators& sym, const SectorTarget& t,
                                             const PenaltyWeights& w) {
  std::vector<Penalty> out;
  if (w.number > 0) out.push_back({sym.number, t.number, w.number});
  if (w.sz > 0) out.push_back({sym.sz, t.sz, w.sz});
  if (w.s2 > 0) out.push_back({sym.s2, t.s2, w.s2});
  return out;
}

/// Sorts by energy, keeping the solve order among states closer than `tol`.
inline void order_by_energy(std::vector<VqeResult>& results, double tol = 1e-6) {
  for (std::size_t i = 1; i < results.size(); ++i)
    for (std::size_t j = i; j > 0 && results[j - 1].energy > results[j].energy + tol; --j)
      std::swap(results[j - 1], results[j]);
}

/// Solves targets in order; state j is deflated against every earlier state.
inline std::vector<VqeResult> solve_spectrum(const SpectrumProblem& problem, const OptimizerConfig& cfg) {
  const auto n = problem.hamiltonian.qubits();
  if (problem.targets.empty()) throw std::invalid_argument("solve_spectrum needs at least one target");
  if (problem.targets.size() > (std::size_t{1} << n)) throw std::invalid_argument("more states than dimension");
  const double beta = problem.beta.value_or(default_deflation_beta(problem.hamiltonian));

  std::vector<VqeResult> found;
  for (const auto& t : problem.targets) {
    VqeProblem vp;
    vp.hamiltonian = problem.hamiltonian;
    const auto occ = target_occupation(n, t);
    vp.reference = basis_state(n, occupation_index(n, occ));
    vp.spec = make_spec(problem.hamiltonian, occ, problem.uccsd_depth, problem.ham_depth, problem.sharing);
    vp.penalties = sector_penalties(problem.symmetry, t, problem.weights);
    for (const auto& f : found) vp.deflation.push_back({f.state, beta});
    auto r = minimize(vp, cfg);
    r.label = t.label;
    r.target = t;
    r.occupation = occ;
    found.push_back(std::move(r));
  }
  order_by_energy(found);
  return found;
}

struct SsvqeProblem {
  PauliSum hamiltonian;
  std::vector<StateVector> references;
  std::vector<double> weights;  ///< strictly decreasing, positive
  AnsatzSpec spec;
  std::vector<std::string> labels;

  void validate() const {
    if (references.empty()) throw std::invalid_argument("ssvqe needs at least one reference");
    if (weights.size() != references.size()) throw std::invalid_argument("ssvqe weight/reference count mismatch");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0)) throw std::invalid_argument("ssvqe weights must be positive");
      if (i > 0 && !(weights[i] < weights[i - 1])) throw std::invalid_argument("ssvqe weights must strictly decrease");
    }
    for (std::size_t i = 0; i < references.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double expect = i == j ? 1.0 : 0.0;
        if (std::abs(inner_product(references[i], references[j]) - expect) > 1e-10)
          throw std::invalid_argument("ssvqe references must be orthonormal");
      }
  }
};

/// Default SSVQE weights m, m-1, ..., 1.
inline std::vector<double> ssvqe_default_weights(std::size_t m) {
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(m - i);
  return w;
}

/// One computational basis state per target, drawn from the target's (N, Sz)
/// sector in order of increasing diagonal energy <b|H|b>.
inline std::vector<StateVector> ssvqe_references(const PauliSum& h, std::span<const SectorTarget> targets) {
  const auto n = h.qubits();
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::uint64_t> used;
  std::vector<StateVector> refs;
  for (const auto& t : targets) {
    const auto occ = target_occupation(n, t);
    std::uint64_t alpha_mask = 0;
    for (std::size_t q = 0; q < n; q += 2) alpha_mask |= std::uint64_t{1} << (n - 1 - q);
    const auto ref_idx = occupation_index(n, occ);
    const int na = __builtin_popcountll(ref_idx & alpha_mask);
    const int nb = __builtin_popcountll(ref_idx & ~alpha_mask);
    std::vector<std::pair<double, std::uint64_t>> candidates;
    for (std::uint64_t b = 0; b < dim; ++b) {
      if (__builtin_popcountll(b & alpha_mask) != na || __builtin_popcountll(b & ~alpha_mask) != nb) continue;
      if (std::find(used.begin(), used.end(), b) != used.end()) continue;
      const auto s = basis_state(n, b);
      candidates.push_back({expectation(s, h), b});
    }
    if (candidates.empty()) throw std::invalid_argument("not enough orthogonal references for ssvqe");
    std::sort(candidates.begin(), candidates.end());
    used.push_back(candidates.front().second);
    refs.push_back(basis_state(n, candidates.front().second));
  }
  return refs;
}

/// Shared theta minimizing sum_k w_k <ref_k|U^dag H U|ref_k>; per-state
/// results in reference order.
inline std::vector<VqeResult> ssvqe(const SsvqeProblem& problem, const OptimizerConfig& cfg) {
  problem.validate();
  const auto circuit = build(problem.spec);
  for (const auto& r : problem.references)
    if (r.qubits() != circuit.qubits) throw std::invalid_argument("ssvqe reference size mismatch");
  auto f = [&](std::span<const double> theta) {
    double v = 0.0;
    for (std::size_t k = 0; k < problem.references.size(); ++k) {
      const auto psi = prepare(circuit, theta, problem.references[k]);
      v += problem.weights[k] * expectation_unchecked(psi.amplitudes(), problem.hamiltonian);
    }
    return v;
  };
  const auto opt = multistart(f, circuit.parameter_count(), cfg);
  std::vector<VqeResult> out;
  for (std::size_t k = 0; k < problem.references.size(); ++k) {
    VqeResult r;
    r.label = k < problem.labels.size() ? problem.labels[k] : fmt::format("state{}", k);
    r.parameters = opt.x;
    r.state = prepare(circuit, opt.x, problem.references[k]);
    r.energy = expectation(r.state, problem.hamiltonian);
    r.objective = opt.value;
    r.trace = opt.trace;
    r.converged = opt.converged;
    r.gradient_norm = opt.gradient_norm;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fsc
