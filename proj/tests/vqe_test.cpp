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

#include "fsc/vqe.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"

namespace fsc {
namespace {

using testing::load_fixture;
using testing::sector_eigenvalues;
using testing::to_eigen;

constexpr std::uint64_t kAlphaBits = 0b1010;
constexpr std::uint64_t kBetaBits = 0b0101;

auto sector(int na, int nb) {
  return [na, nb](std::uint64_t b) {
    return __builtin_popcountll(b & kAlphaBits) == na && __builtin_popcountll(b & kBetaBits) == nb;
  };
}

double dense_objective(const VqeProblem& p, const StateVector& psi) {
  const auto v = to_eigen(psi);
  double e = (v.adjoint() * dense_matrix(p.hamiltonian) * v)(0).real();
  for (const auto& d : p.deflation) e += d.beta * std::norm(to_eigen(d.state).dot(v));
  for (const auto& q : p.penalties) {
    const double o = (v.adjoint() * dense_matrix(q.op) * v)(0).real();
    e += q.weight * (o - q.target) * (o - q.target);
  }
  return e;
}

class H2Vqe : public ::testing::Test {
 protected:
  PauliSum h = load_fixture("h2", "hamiltonian.txt");
  SymmetryOperators sym = symmetry_operators(4);
  std::vector<std::size_t> occ = reference_occupation(4, 2, 0.0);

  VqeProblem ground_problem(int uccsd = 2, int ham = 2) const {
    VqeProblem p;
    p.hamiltonian = h;
    p.reference = basis_state(4, occupation_index(4, occ));
    p.spec = make_spec(h, occ, uccsd, ham);
    return p;
  }

  std::vector<SectorTarget> h2_targets() const {
    return {{"ground", 2, 0, 0}, {"triplet", 2, 0, 2}, {"singlet", 2, 0, 0}, {"doubly", 2, 0, 0}};
  }
};

TEST(Objective, SingleQubitRotationReachesMinusOne) {
  VqeProblem p;
  p.hamiltonian = PauliSum::from_word(PauliWord::parse("Z"));
  p.reference = basis_state(1, 0);
  p.spec.uccsd_depth = 0;
  p.spec.ham_depth = 1;
  p.spec.ham_words = {PauliWord::parse("X")};
  const std::vector<double> pi{std::numbers::pi};
  EXPECT_NEAR(objective(p, pi), -1.0, 1e-15);
  const std::vector<double> zero{0.0};
  EXPECT_NEAR(objective(p, zero), 1.0, 1e-15);
  const auto r = minimize(p, OptimizerConfig{});
  EXPECT_NEAR(r.energy, -1.0, 1e-10);
  EXPECT_TRUE(r.converged);
}

TEST_F(H2Vqe, ObjectiveMatchesDenseEvaluation) {
  std::mt19937_64 rng(31);
  auto p = ground_problem();
  p.deflation.push_back({testing::random_state(4, rng), 3.0});
  p.penalties.push_back({sym.s2, 2.0, 0.7});
  p.penalties.push_back({sym.number, 2.0, 1.0});
  VqeEvaluator eval(p);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> t(eval.circuit().parameter_count());
    for (auto& x : t) x = u(rng);
    EXPECT_NEAR(eval(t), dense_objective(p, eval.state(t)), 1e-12);
  }
}

TEST_F(H2Vqe, ValidationRejectsBadProblems) {
  auto p = ground_problem();
  p.deflation.push_back({p.reference, 0.0});
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = ground_problem();
  p.penalties.push_back({sym.sz, 0.0, -1.0});
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = ground_problem();
  p.reference = basis_state(2, 0);
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST_F(H2Vqe, GroundStateMatchesExactDiagonalization) {
  const auto exact = sector_eigenvalues(dense_matrix(h), sector(1, 1)).front();
  const auto r = minimize(ground_problem(), OptimizerConfig{});
  EXPECT_NEAR(r.energy, exact, 1e-6);
  EXPECT_GE(r.energy, exact - 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(HeHVqe, DoubletGroundStateMatchesExactDiagonalization) {
  const auto h = load_fixture("heh", "hamiltonian.txt");
  const auto exact = sector_eigenvalues(dense_matrix(h), sector(2, 1)).front();
  SpectrumProblem sp;
  sp.hamiltonian = h;
  sp.symmetry = symmetry_operators(4);
  sp.targets = {{"ground", 3, 0.5, 0.75}};
  const auto r = solve_spectrum(sp, OptimizerConfig{});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].energy, exact, 1e-6);
}

TEST_F(H2Vqe, FourStateSpectrumMatchesExactDiagonalization) {
  auto exact = sector_eigenvalues(dense_matrix(h), sector(1, 1));
  SpectrumProblem sp;
  sp.hamiltonian = h;
  sp.symmetry = sym;
  sp.targets = h2_targets();
  const auto r = solve_spectrum(sp, OptimizerConfig{});
  ASSERT_EQ(r.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(r[i].energy, exact[i], 1e-4) << r[i].label;
    EXPECT_TRUE(r[i].converged) << r[i].label;
    for (std::size_t j = 0; j < i; ++j) EXPECT_LE(std::norm(inner_product(r[i].state, r[j].state)), 1e-6);
  }
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(r[i - 1].energy, r[i].energy + 1e-6);
  for (const auto& x : r) EXPECT_NEAR(expectation(x.state, sym.s2), x.target.s2, 1e-4) << x.label;
}

TEST_F(H2Vqe, SpectrumWithOneTargetEqualsPlainMinimization) {
  SpectrumProblem sp;
  sp.hamiltonian = h;
  sp.symmetry = sym;
  sp.targets = {{"ground", 2, 0, 0}};
  sp.weights = {0.0, 0.0, 0.0};
  const auto a = solve_spectrum(sp, OptimizerConfig{});
  const auto b = minimize(ground_problem(), OptimizerConfig{});
  EXPECT_EQ(a[0].parameters, b.parameters);
  EXPECT_EQ(a[0].energy, b.energy);
}

TEST_F(H2Vqe, SpinPenaltySelectsTriplet) {
  // Exact eigenpairs of the N=2, Sz=0 block: ground singlet, then the triplet.
  const auto dense = dense_matrix(h);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index b = 0; b < 16; ++b)
    if (sector(1, 1)(static_cast<std::uint64_t>(b))) idx.push_back(b);
  Eigen::MatrixXcd block(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) block(i, j) = dense(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(16), second = Eigen::VectorXcd::Zero(16);
  for (int i = 0; i < 4; ++i) {
    ground(idx[i]) = es.eigenvectors()(i, 0);
    second(idx[i]) = es.eigenvectors()(i, 1);
  }
  ASSERT_NEAR(expectation(testing::from_eigen(4, second), sym.s2), 2.0, 1e-8);
  const double triplet = es.eigenvalues()(1);
  // The quadratic penalty alone trades S^2 against energy by mixing in the
  // ground state, so the ground state is deflated as in the spectrum solver.
  auto p = ground_problem();
  p.penalties = sector_penalties(sym, {"triplet", 2, 0, 2}, {});
  p.deflation.push_back({testing::from_eigen(4, ground), default_deflation_beta(h)});
  const auto r = minimize(p, OptimizerConfig{});
  EXPECT_NEAR(r.energy, triplet, 1e-6);
  for (double res : r.penalty_residuals) EXPECT_LE(std::abs(res), 1e-4);
}

TEST_F(H2Vqe, PenaltyAloneLeavesPredictableResidual) {
  auto p = ground_problem();
  p.penalties = sector_penalties(sym, {"triplet", 2, 0, 2}, {});
  const auto r = minimize(p, OptimizerConfig{});
  // S^2 misses its target, and the objective still bounds the triplet energy from below.
  EXPECT_GT(std::abs(r.penalty_residuals[2]), 1e-3);
  EXPECT_LT(r.objective, -0.4784);
}

TEST_F(H2Vqe, EnergiesAreVariationalForRandomAngles) {
  const auto lo = sector_eigenvalues(dense_matrix(h), [](std::uint64_t) { return true; }).front();
  auto p = ground_problem();
  VqeEvaluator eval(p);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> t(eval.circuit().parameter_count());
    for (auto& x : t) x = u(rng);
    EXPECT_GE(eval(t), lo - 1e-12);
  }
}

TEST_F(H2Vqe, OrderByEnergyKeepsNearTiesStable) {
  std::vector<VqeResult> r(3);
  r[0].label = "a";
  r[0].energy = 1.0;
  r[1].label = "b";
  r[1].energy = 0.5;
  r[2].label = "c";
  r[2].energy = 0.5 + 1e-8;
  order_by_energy(r);
  EXPECT_EQ(r[0].label, "b");
  EXPECT_EQ(r[1].label, "c");
  EXPECT_EQ(r[2].label, "a");
}

TEST_F(H2Vqe, TargetOccupationRejectsFractionalNumber) {
  EXPECT_THROW(target_occupation(4, {"bad", 2.5, 0, 0}), std::invalid_argument);
  const auto o = target_occupation(4, {"d", 3, -0.5, 0.75});
  EXPECT_EQ(o.size(), 3u);
}

TEST_F(H2Vqe, SsvqeWithOneReferenceEqualsVqe) {
  SsvqeProblem sp;
  sp.hamiltonian = h;
  sp.references = {basis_state(4, occupation_index(4, occ))};
  sp.weights = {1.0};
  sp.spec = make_spec(h, occ, 2, 2);
  const auto a = ssvqe(sp, OptimizerConfig{});
  const auto b = minimize(ground_problem(), OptimizerConfig{});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NEAR(a[0].energy, b.energy, 1e-12);
}

TEST_F(H2Vqe, SsvqeStatesStayOrthogonalAndBounded) {
  const auto targets = h2_targets();
  SsvqeProblem sp;
  sp.hamiltonian = h;
  sp.references = ssvqe_references(h, targets);
  sp.weights = ssvqe_default_weights(4);
  sp.spec = make_spec(h, occ, 2, 2);
  const auto r = ssvqe(sp, OptimizerConfig{});
  ASSERT_EQ(r.size(), 4u);
  const auto exact = sector_eigenvalues(dense_matrix(h), [](std::uint64_t) { return true; });
  double bound = 0.0, got = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    bound += sp.weights[i] * exact[i];
    got += sp.weights[i] * r[i].energy;
    for (std::size_t j = 0; j < i; ++j) EXPECT_LE(std::abs(inner_product(r[i].state, r[j].state)), 1e-12);
  }
  EXPECT_GE(got, bound - 1e-10);
  EXPECT_NEAR(r[0].objective, got, 1e-10);
}

TEST(Ssvqe, ValidationRejectsBadWeightsAndReferences) {
  SsvqeProblem sp;
  sp.references = {basis_state(2, 0), basis_state(2, 1)};
  sp.weights = {1.0, 1.0};
  EXPECT_THROW(sp.validate(), std::invalid_argument);
  sp.weights = {2.0, 1.0};
  EXPECT_NO_THROW(sp.validate());
  sp.references[1] = basis_state(2, 0);
  EXPECT_THROW(sp.validate(), std::invalid_argument);
  sp.weights = {1.0};
  EXPECT_THROW(sp.validate(), std::invalid_argument);
  EXPECT_EQ(ssvqe_default_weights(3), (std::vector<double>{3.0, 2.0, 1.0}));
}

TEST(Ssvqe, ReferencesAreDistinctSectorDeterminants) {
  const auto h = load_fixture("h2", "hamiltonian.txt");
  const std::vector<SectorTarget> t{{"a", 2, 0, 0}, {"b", 2, 0, 0}, {"c", 2, 0, 0}, {"d", 2, 0, 0}};
  const auto refs = ssvqe_references(h, t);
  ASSERT_EQ(refs.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(inner_product(refs[i], refs[j]), Complex(0.0, 0.0));
  const std::vector<SectorTarget> five(5, t[0]);
  EXPECT_THROW(ssvqe_references(h, five), std::invalid_argument);
}

}  // namespace
}  // namespace fsc
