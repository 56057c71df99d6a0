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

// Exact diagonalization reference.

#pragma once

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/fermion.hpp"
#include "fsc/pauli.hpp"
#include "fsc/statevector.hpp"
#include "fsc/vqe.hpp"

namespace fsc {

struct HermitianEigen {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXcd vectors; ///< columns
};

/// Cyclic complex Jacobi. Each step rephases column q so that a_pq is real,
/// then applies a real plane rotation.
inline HermitianEigen jacobi_eigen(Eigen::MatrixXcd a, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("jacobi_eigen: matrix is not Hermitian");
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        const Complex ph = std::conj(a(p, q)) / r;  // e^{-i phi}
        a.col(q) *= ph;
        a.row(q) *= std::conj(ph);
        v.col(q) *= ph;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Eigen::VectorXcd cp = a.col(p), cq = a.col(q);
        a.col(p) = c * cp - s * cq;
        a.col(q) = s * cp + c * cq;
        const Eigen::RowVectorXcd rp = a.row(p), rq = a.row(q);
        a.row(p) = c * rp - s * rq;
        a.row(q) = s * rp + c * rq;
        a(p, q) = a(q, p) = 0.0;
        const Eigen::VectorXcd vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp - s * vq;
        v.col(q) = s * vp + c * vq;
      }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

struct SectorLabel {
  double number = 0.0;
  double sz = 0.0;
  double s2 = 0.0;
};

struct SpectrumReference {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  std::vector<SectorLabel> labels;
  std::size_t qubits = 0;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }

  StateVector state(std::size_t i) const {
    const auto col = eigenvectors.col(static_cast<Eigen::Index>(i));
    return StateVector::from_amplitudes(qubits, std::vector<Complex>(col.data(), col.data() + col.size()));
  }
};

namespace detail {

inline double rayleigh(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v) { return (v.adjoint() * m * v)(0).real(); }

/// Rotates the columns of `block` to diagonalize ops[level] inside their span,
/// then recurses into each sharp sub-cluster with the next operator.
inline void refine_cluster(Eigen::MatrixXcd& block, std::span<const Eigen::MatrixXcd> ops, std::size_t level) {
  if (block.cols() < 2 || level >= ops.size()) return;
  const Eigen::MatrixXcd sub = block.adjoint() * ops[level] * block;
  const auto e = jacobi_eigen(0.5 * (sub + sub.adjoint()));
  block = block * e.vectors;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= block.cols(); ++i) {
    if (i == block.cols() || std::abs(e.values(i) - e.values(start)) > 1e-8) {
      Eigen::MatrixXcd part = block.middleCols(start, i - start);
      refine_cluster(part, ops, level + 1);
      block.middleCols(start, i - start) = part;
      start = i;
    }
  }
}

inline void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
  if (std::abs(v(best)) > 0) v *= std::conj(v(best)) / std::abs(v(best));
}

}  // namespace detail

/// Full spectrum with (N, Sz, S^2) labels. Degenerate clusters are resolved
/// into simultaneous eigenvectors of N, then Sz, then S^2; ties in energy are
/// ordered by ascending Sz, then S^2, then N. The largest component of every
/// eigenvector is real and positive.
inline SpectrumReference diagonalize(const PauliSum& h, const std::optional<SymmetryOperators>& symmetry,
                                     std::size_t qubit_cap = kDenseQubitCap) {
  if (!h.is_hermitian()) throw std::invalid_argument("diagonalize: Hamiltonian is not Hermitian");
  const Eigen::MatrixXcd hm = dense_matrix(h, qubit_cap);
  auto e = jacobi_eigen(hm);
  SpectrumReference out;
  out.qubits = h.qubits();
  const Eigen::Index dim = hm.rows();

  std::vector<Eigen::MatrixXcd> ops;
  if (symmetry) {
    for (const auto* o : {&symmetry->number, &symmetry->sz, &symmetry->s2}) {
      if (o->qubits() != h.qubits()) throw std::invalid_argument("diagonalize: symmetry operator size mismatch");
      ops.push_back(dense_matrix(*o, qubit_cap));
    }
  }
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= dim; ++i) {
    if (i == dim || std::abs(e.values(i) - e.values(start)) > 1e-8 * std::max(1.0, std::abs(e.values(start)))) {
      Eigen::MatrixXcd block = e.vectors.middleCols(start, i - start);
      detail::refine_cluster(block, ops, 0);
      e.vectors.middleCols(start, i - start) = block;
      start = i;
    }
  }

  std::vector<SectorLabel> labels(static_cast<std::size_t>(dim));
  if (symmetry)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::VectorXcd v = e.vectors.col(i);
      labels[static_cast<std::size_t>(i)] = {detail::rayleigh(ops[0], v), detail::rayleigh(ops[1], v),
                                             detail::rayleigh(ops[2], v)};
    }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](Eigen::Index i) {
    const auto& l = labels[static_cast<std::size_t>(i)];
    return std::array<double, 3>{std::round(l.sz * 1e6), std::round(l.s2 * 1e6), std::round(l.number * 1e6)};
  };
  // Clusters are contiguous and ascending already; sort inside each.
  start = 0;
  for (Eigen::Index i = 1; i <= dim; ++i) {
    if (i == dim || std::abs(e.values(i) - e.values(start)) > 1e-8 * std::max(1.0, std::abs(e.values(start)))) {
      std::stable_sort(order.begin() + start, order.begin() + i, [&](auto x, auto y) { return key(x) < key(y); });
      start = i;
    }
  }
  out.eigenvalues.resize(dim);
  out.eigenvectors.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.eigenvalues(i) = e.values(order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = e.vectors.col(order[static_cast<std::size_t>(i)]);
    detail::fix_phase(out.eigenvectors.col(i));
    out.labels.push_back(labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  }
  return out;
}

/// Uses the standard N/Sz/S^2 operators when the qubit count is even.
inline SpectrumReference diagonalize(const PauliSum& h) {
  std::optional<SymmetryOperators> sym;
  if (h.qubits() > 0 && h.qubits() % 2 == 0) sym = symmetry_operators(h.qubits());
  return diagonalize(h, sym);
}

inline bool label_matches(const SectorLabel& l, const SectorTarget& t, double tol = 1e-6) {
  return std::abs(l.number - t.number) <= tol && std::abs(l.sz - t.sz) <= tol && std::abs(l.s2 - t.s2) <= tol;
}

/// Eigenvector index per target: the i-th target naming a sector gets that
/// sector's i-th lowest eigenvector.
inline std::vector<std::size_t> match_targets(const SpectrumReference& ref, std::span<const SectorTarget> targets) {
  std::vector<std::size_t> out;
  std::vector<bool> used(ref.size(), false);
  for (const auto& t : targets) {
    std::size_t i = 0;
    while (i < ref.size() && (used[i] || !label_matches(ref.labels[i], t))) ++i;
    if (i == ref.size())
      throw std::invalid_argument(
          fmt::format("no eigenvector left in sector N={} Sz={} S2={} for '{}'", t.number, t.sz, t.s2, t.label));
    used[i] = true;
    out.push_back(i);
  }
  return out;
}

struct TransitionMoments {
  std::vector<std::size_t> indices;
  Eigen::MatrixXcd elements;   ///< <v_i|O|v_j>
  Eigen::MatrixXd magnitudes;  ///< |<v_i|O|v_j>|

  /// Frobenius norm of O restricted to span{v_j, v_k}; unchanged by any
  /// unitary mixing of the two vectors.
  double pair_frobenius(std::size_t j, std::size_t k) const {
    const auto a = static_cast<Eigen::Index>(j), b = static_cast<Eigen::Index>(k);
    return std::sqrt(std::norm(elements(a, a)) + std::norm(elements(b, b)) + 2.0 * std::norm(elements(a, b)));
  }
};

inline TransitionMoments exact_transition_moments(const SpectrumReference& ref, const PauliSum& observable,
                                                  std::span<const std::size_t> indices) {
  if (observable.qubits() != ref.qubits) throw std::invalid_argument("observable/spectrum qubit mismatch");
  for (auto i : indices)
    if (i >= ref.size()) throw std::out_of_range(fmt::format("eigenvector index {} out of range", i));
  const Eigen::MatrixXcd o = dense_matrix(observable);
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXcd vs(ref.eigenvectors.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) vs.col(i) = ref.eigenvectors.col(static_cast<Eigen::Index>(indices[i]));
  TransitionMoments out;
  out.indices.assign(indices.begin(), indices.end());
  const Eigen::MatrixXcd raw = vs.adjoint() * o * vs;
  out.elements = 0.5 * (raw + raw.adjoint());
  out.magnitudes = out.elements.cwiseAbs();
  return out;
}

/// Euclidean combination over vector components, per pair.
inline Eigen::MatrixXd combine_magnitudes(std::span<const TransitionMoments> parts) {
  if (parts.empty()) return {};
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(parts[0].magnitudes.rows(), parts[0].magnitudes.cols());
  for (const auto& p : parts) s += p.magnitudes.cwiseAbs2();
  return s.cwiseSqrt();
}

inline double combined_frobenius(std::span<const TransitionMoments> parts, std::size_t j, std::size_t k) {
  double s = 0.0;
  for (const auto& p : parts) s += std::pow(p.pair_frobenius(j, k), 2);
  return std::sqrt(s);
}

/// log10 |e - reference|; -infinity when the difference is below 1e-15.
inline double log_error(double e, double reference) {
  const double d = std::abs(e - reference);
  if (d < 1e-15) return -std::numeric_limits<double>::infinity();
  return std::log10(d);
}

inline std::string format_log_error(double v) {
  if (std::isinf(v) && v < 0) return "exact";
  return fmt::format("{:.17g}", v);
}

}  // namespace fsc
