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

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/fermion.hpp"
#include "fsc/pauli.hpp"
#include "fsc/statevector.hpp"

namespace fsc {

/// How Trotterized UCCSD words map onto parameters.
///   per_word:      every word rotation has its own angle.
///   per_generator: all words of one generator share an angle, so each block
///                  is exactly exp(theta * G) (the words of a JW excitation commute).
enum class ParameterSharing { per_word, per_generator };

inline std::string sharing_name(ParameterSharing s) {
  return s == ParameterSharing::per_word ? "per_word" : "per_generator";
}

inline ParameterSharing sharing_from_name(const std::string& s) {
  if (s == "per_word") return ParameterSharing::per_word;
  if (s == "per_generator") return ParameterSharing::per_generator;
  throw std::invalid_argument("unknown parameter_sharing '" + s + "'");
}

struct AnsatzSpec {
  int uccsd_depth = 2;
  int ham_depth = 2;
  GeneratorSet generators;
  std::vector<PauliWord> ham_words;
  ParameterSharing sharing = ParameterSharing::per_word;

  std::size_t qubits() const {
    if (!generators.generators.empty()) return generators.qubits;
    return ham_words.empty() ? generators.qubits : ham_words.front().size();
  }

  std::size_t parameters_per_uccsd_layer() const {
    return sharing == ParameterSharing::per_word ? generators.word_count() : generators.size();
  }

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(uccsd_depth) * parameters_per_uccsd_layer() +
           static_cast<std::size_t>(ham_depth) * ham_words.size();
  }
};

/// One Pauli rotation exp(-i (scale * theta[parameter] / 2) word).
struct Rotation {
  PauliWord word;
  MaskedWord masked;
  std::size_t parameter = 0;
  double scale = 1.0;
};

struct AnsatzCircuit {
  std::size_t qubits = 0;
  std::vector<Rotation> rotations;
  std::vector<double> parameters;

  std::size_t parameter_count() const { return parameters.size(); }
};

/// Layer order: uccsd_depth x [generator words in enumeration order], then
/// ham_depth x [Hamiltonian words]. Parameters start at zero.
inline AnsatzCircuit build(const AnsatzSpec& spec) {
  if (spec.uccsd_depth < 0 || spec.ham_depth < 0) throw std::invalid_argument("ansatz depths must be >= 0");
  if (spec.uccsd_depth > 0 && spec.generators.generators.empty())
    throw std::invalid_argument("empty generator set with nonzero UCCSD depth");
  AnsatzCircuit c;
  c.qubits = spec.qubits();
  std::size_t next = 0;
  for (int layer = 0; layer < spec.uccsd_depth; ++layer) {
    for (const auto& g : spec.generators.generators) {
      if (g.qubits() != c.qubits) throw std::invalid_argument("generator qubit count mismatch");
      const std::size_t shared = next;
      for (const auto& t : g.terms()) {
        // exp(theta * c_w * w) with c_w = i*Im(c_w) is a rotation by -2*Im(c_w)*theta.
        const std::size_t p = spec.sharing == ParameterSharing::per_word ? next++ : shared;
        c.rotations.push_back({t.word, MaskedWord::from(t.word), p, -2.0 * t.coefficient.imag()});
      }
      if (spec.sharing == ParameterSharing::per_generator) ++next;
    }
  }
  for (int layer = 0; layer < spec.ham_depth; ++layer) {
    for (const auto& w : spec.ham_words) {
      if (w.size() != c.qubits) throw std::invalid_argument("Hamiltonian word qubit count mismatch");
      if (w.is_identity()) throw std::invalid_argument("identity word in propagator layer");
      c.rotations.push_back({w, MaskedWord::from(w), next++, 1.0});
    }
  }
  c.parameters.assign(next, 0.0);
  return c;
}

/// Applies the circuit's rotations to `amps` in place with parameters `theta`.
inline void apply_circuit(const AnsatzCircuit& c, std::span<const double> theta, std::span<Complex> amps) {
  if (theta.size() != c.parameters.size())
    throw std::invalid_argument("parameter vector has " + std::to_string(theta.size()) + " entries, expected " +
                                std::to_string(c.parameters.size()));
  if (amps.size() != (std::size_t{1} << c.qubits)) throw std::invalid_argument("circuit/state size mismatch");
  for (const auto& r : c.rotations) rotate(amps, r.masked, r.scale * theta[r.parameter]);
}

inline StateVector prepare(const AnsatzCircuit& c, std::span<const double> theta, const StateVector& reference) {
  if (reference.qubits() != c.qubits) throw std::invalid_argument("prepare: circuit/state size mismatch");
  StateVector out = reference;
  apply_circuit(c, theta, out.amplitudes());
  return out;
}

/// U(theta)|reference> with the circuit's own parameters.
inline StateVector prepare(const AnsatzCircuit& c, const StateVector& reference) {
  return prepare(c, c.parameters, reference);
}

/// Convenience for the common case: UCCSD generators relative to `occupied`,
/// propagator words taken from `hamiltonian`.
inline AnsatzSpec make_spec(const PauliSum& hamiltonian, std::span<const std::size_t> occupied, int uccsd_depth,
                            int ham_depth, ParameterSharing sharing = ParameterSharing::per_word) {
  AnsatzSpec spec;
  spec.uccsd_depth = uccsd_depth;
  spec.ham_depth = ham_depth;
  spec.generators = uccsd_generators(hamiltonian.qubits(), occupied);
  spec.ham_words = non_identity_words(hamiltonian);
  spec.sharing = sharing;
  return spec;
}

}  // namespace fsc
