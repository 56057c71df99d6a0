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

#include "fsc/pauli_io.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "fsc/fermion.hpp"
#include "test_util.hpp"

namespace fsc {
namespace {

TEST(PauliIo, ParsesHeaderTermsAndComments) {
  const auto s = parse_pauli_sum(
      "# leading comment\n"
      "units=hartree qubits=2 label=toy   # keys in any order\n"
      "\n"
      "0.5 0 ZI\n"
      "-0.25 1e-3 XY  # trailing comment\n");
  EXPECT_EQ(s.qubits(), 2u);
  EXPECT_EQ(s.label(), "toy");
  EXPECT_EQ(s.units(), Units::hartree);
  ASSERT_EQ(s.terms().size(), 2u);
  EXPECT_EQ(s.terms()[1].coefficient, Complex(-0.25, 1e-3));
  EXPECT_EQ(s.terms()[1].word.str(), "XY");
}

TEST(PauliIo, ErrorsCarryLineNumbers) {
  try {
    parse_pauli_sum("qubits=2 label=x units=debye\n0.5 0 ZI\n0.5 0 ZZZ\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(PauliIo, RejectsMalformedInput) {
  EXPECT_THROW(parse_pauli_sum(""), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=furlong\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=debye\n1,5 0 Z\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=debye\n1 0 Q\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=debye\n1 0\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=debye\nnan 0 Z\n"), ParseError);
  EXPECT_THROW(parse_pauli_sum("qubits=1 label=x units=debye colour=red\n"), ParseError);
}

TEST(PauliIo, DecimalPointOnly) {
  const auto s = parse_pauli_sum("qubits=1 label=x units=dimensionless\n1.5 -2.25e-1 Z\n");
  EXPECT_EQ(s.terms()[0].coefficient, Complex(1.5, -0.225));
}

TEST(PauliIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  auto h = testing::random_hermitian(5, 30, rng) + Complex(0.0, 1.0) * testing::random_hermitian(5, 5, rng);
  h = h.with_metadata("random sum", Units::debye);
  const auto back = parse_pauli_sum(format_pauli_sum(h));
  EXPECT_EQ(back.label(), "random_sum");
  EXPECT_EQ(back.units(), Units::debye);
  ASSERT_EQ(back.terms().size(), h.terms().size());
  for (std::size_t i = 0; i < h.terms().size(); ++i) {
    EXPECT_EQ(back.terms()[i].word, h.terms()[i].word);
    EXPECT_EQ(back.terms()[i].coefficient, h.terms()[i].coefficient);
  }
}

class FixtureFiles : public ::testing::TestWithParam<std::string> {};

TEST_P(FixtureFiles, ReparseExactlyAndAreHermitian) {
  for (const char* f : {"hamiltonian.txt", "dipole_x.txt", "dipole_y.txt", "dipole_z.txt", "number.txt", "sz.txt",
                        "s2.txt"}) {
    const auto s = testing::load_fixture(GetParam(), f);
    EXPECT_TRUE(s.is_hermitian()) << f;
    EXPECT_EQ(s.qubits(), 4u) << f;
    const auto back = parse_pauli_sum(format_pauli_sum(s));
    ASSERT_EQ(back.terms().size(), s.terms().size()) << f;
    for (std::size_t i = 0; i < s.terms().size(); ++i) EXPECT_EQ(back.terms()[i].coefficient, s.terms()[i].coefficient);
  }
  EXPECT_EQ(testing::load_fixture(GetParam(), "hamiltonian.txt").units(), Units::hartree);
  EXPECT_EQ(testing::load_fixture(GetParam(), "dipole_z.txt").units(), Units::debye);
}

TEST_P(FixtureFiles, SymmetryFilesMatchGeneratedOperators) {
  const auto sym = symmetry_operators(4);
  for (auto [file, op] : {std::pair{"number.txt", &sym.number}, {"sz.txt", &sym.sz}, {"s2.txt", &sym.s2}}) {
    const auto s = testing::load_fixture(GetParam(), file);
    EXPECT_LE(testing::max_abs(dense_matrix(s) - dense_matrix(*op)), 1e-12) << file;
  }
}

TEST_P(FixtureFiles, HamiltonianCommutesWithSymmetries) {
  const auto h = dense_matrix(testing::load_fixture(GetParam(), "hamiltonian.txt"));
  for (const char* f : {"number.txt", "sz.txt", "s2.txt"}) {
    const auto s = dense_matrix(testing::load_fixture(GetParam(), f));
    EXPECT_LE(testing::max_abs(h * s - s * h), 1e-10) << f;
  }
}

INSTANTIATE_TEST_SUITE_P(Molecules, FixtureFiles, ::testing::Values("h2", "heh", "heh_plus"));

}  // namespace
}  // namespace fsc
