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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsc {

using Complex = std::complex<double>;

/// Terms whose coefficient magnitude falls below this are dropped by simplify().
inline constexpr double kDropThreshold = 1e-14;
/// Imaginary-part tolerance for treating a simplified sum as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;
/// Default qubit cap for dense_matrix().
inline constexpr std::size_t kDenseQubitCap = 12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli character '") + c + "'");
  }
}

/// Tensor product of single-qubit Paulis. Qubit 0 is the leftmost character of
/// the string form and the most significant bit of a basis-state index.
class PauliWord {
 public:
  PauliWord() = default;
  explicit PauliWord(std::vector<Pauli> axes) : axes_(std::move(axes)) {}

  static PauliWord identity(std::size_t qubits) {
    return PauliWord(std::vector<Pauli>(qubits, Pauli::I));
  }

  static PauliWord parse(std::string_view text) {
    std::vector<Pauli> axes;
    axes.reserve(text.size());
    for (char c : text) axes.push_back(pauli_from_char(c));
    return PauliWord(std::move(axes));
  }

  /// Single non-identity axis `p` at `qubit`.
  static PauliWord single(std::size_t qubits, std::size_t qubit, Pauli p) {
    if (qubit >= qubits) throw std::out_of_range("qubit index out of range");
    auto w = identity(qubits);
    w.axes_[qubit] = p;
    return w;
  }

  std::size_t size() const { return axes_.size(); }
  Pauli operator[](std::size_t q) const { return axes_[q]; }
  const std::vector<Pauli>& axes() const { return axes_; }

  bool is_identity() const {
    return std::all_of(axes_.begin(), axes_.end(), [](Pauli p) { return p == Pauli::I; });
  }

  std::string str() const {
    std::string s;
    s.reserve(axes_.size());
    for (Pauli p : axes_) s.push_back(pauli_char(p));
    return s;
  }

  /// Basis-index bit carrying qubit q.
  std::uint64_t bit(std::size_t q) const { return std::uint64_t{1} << (axes_.size() - 1 - q); }

  /// Bits flipped by the word (X or Y axes).
  std::uint64_t x_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < axes_.size(); ++q)
      if (axes_[q] == Pauli::X || axes_[q] == Pauli::Y) m |= bit(q);
    return m;
  }

  /// Bits contributing a sign (Z or Y axes).
  std::uint64_t z_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < axes_.size(); ++q)
      if (axes_[q] == Pauli::Z || axes_[q] == Pauli::Y) m |= bit(q);
    return m;
  }

  int y_count() const {
    return static_cast<int>(std::count(axes_.begin(), axes_.end(), Pauli::Y));
  }

  /// True when the two words commute (even number of anticommuting positions).
  bool commutes_with(const PauliWord& other) const {
    if (other.size() != size()) throw std::invalid_argument("Pauli word length mismatch");
    int anti = 0;
    for (std::size_t q = 0; q < axes_.size(); ++q)
      if (axes_[q] != Pauli::I && other.axes_[q] != Pauli::I && axes_[q] != other.axes_[q]) ++anti;
    return anti % 2 == 0;
  }

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
  // Enum order I < X < Y < Z matches character order, so this is lexicographic on str().
  friend auto operator<=>(const PauliWord&, const PauliWord&) = default;

 private:
  std::vector<Pauli> axes_;
};

struct WordProduct {
  Complex phase;
  PauliWord word;
};

namespace detail {

// Product table for single-qubit Paulis: phase exponent of i and resulting axis.
struct SingleProduct {
  int i_power;
  Pauli axis;
};

constexpr SingleProduct single_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {0, b};
  if (b == Pauli::I) return {0, a};
  if (a == b) return {0, Pauli::I};
  // Cyclic X->Y->Z gives +i, anticyclic gives -i.
  const int ai = static_cast<int>(a), bi = static_cast<int>(b);
  const bool cyclic = (bi - ai + 3) % 3 == 1;
  const int ci = 6 - ai - bi;
  return {cyclic ? 1 : 3, static_cast<Pauli>(ci)};
}

inline Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

/// a·b = phase·word, computed qubit-wise.
inline WordProduct word_multiply(const PauliWord& a, const PauliWord& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Pauli word length mismatch");
  std::vector<Pauli> out(a.size());
  int power = 0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    const auto p = detail::single_product(a[q], b[q]);
    power += p.i_power;
    out[q] = p.axis;
  }
  return {detail::i_power(power), PauliWord(std::move(out))};
}

enum class Units { hartree, debye, dimensionless };

inline std::string units_name(Units u) {
  switch (u) {
    case Units::hartree: return "hartree";
    case Units::debye: return "debye";
    default: return "dimensionless";
  }
}

inline Units units_from_name(std::string_view s) {
  if (s == "hartree") return Units::hartree;
  if (s == "debye") return Units::debye;
  if (s == "dimensionless") return Units::dimensionless;
  throw std::invalid_argument("unknown units '" + std::string(s) + "'");
}

struct PauliTerm {
  Complex coefficient;
  PauliWord word;
};

/// Word pre-decoded into bit masks for statevector kernels:
/// w|b> = phase * (-1)^{popcount(b & z_mask)} |b ^ x_mask>.
struct MaskedWord {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  Complex phase{1.0, 0.0};

  static MaskedWord from(const PauliWord& w) {
    return {w.x_mask(), w.z_mask(), detail::i_power(w.y_count())};
  }
};

struct MaskedTerm {
  MaskedWord word;
  Complex coefficient;
};

/// Weighted sum of Pauli words over a fixed qubit count. Immutable once built.
class PauliSum {
 public:
  PauliSum() = default;

  PauliSum(std::size_t qubits, std::vector<PauliTerm> terms, std::string label = {},
           Units units = Units::dimensionless)
      : qubits_(qubits), terms_(std::move(terms)), label_(std::move(label)), units_(units) {
    if (qubits_ > 62) throw std::invalid_argument("PauliSum supports at most 62 qubits");
    for (const auto& t : terms_) {
      if (t.word.size() != qubits_)
        throw std::invalid_argument("term word '" + t.word.str() + "' does not match qubit count " +
                                    std::to_string(qubits_));
      if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
        throw std::invalid_argument("non-finite coefficient on word " + t.word.str());
    }
    masked_.reserve(terms_.size());
    for (const auto& t : terms_) masked_.push_back({MaskedWord::from(t.word), t.coefficient});
    hermitian_ = compute_hermitian();
  }

  static PauliSum zero(std::size_t qubits, std::string label = {}, Units units = Units::dimensionless) {
    return PauliSum(qubits, {}, std::move(label), units);
  }

  static PauliSum from_word(const PauliWord& w, Complex c = 1.0) {
    return PauliSum(w.size(), {{c, w}});
  }

  std::size_t qubits() const { return qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  const std::vector<MaskedTerm>& masked_terms() const { return masked_; }
  const std::string& label() const { return label_; }
  Units units() const { return units_; }
  bool empty() const { return terms_.empty(); }

  /// All coefficients real to within kHermitianTolerance after merging like words.
  bool is_hermitian() const { return hermitian_; }

  PauliSum with_metadata(std::string label, Units units) const {
    return PauliSum(qubits_, terms_, std::move(label), units);
  }

  /// Sum of |coefficient| over all terms.
  double one_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
  }

  Complex coefficient_of(const PauliWord& w) const {
    Complex c = 0.0;
    for (const auto& t : terms_)
      if (t.word == w) c += t.coefficient;
    return c;
  }

  PauliSum adjoint() const {
    auto terms = terms_;
    for (auto& t : terms) t.coefficient = std::conj(t.coefficient);
    return PauliSum(qubits_, std::move(terms), label_, units_);
  }

  friend PauliSum operator+(const PauliSum& a, const PauliSum& b) {
    check_same_size(a, b);
    auto terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return PauliSum(a.qubits_, std::move(terms), a.label_, a.units_);
  }

  friend PauliSum operator-(const PauliSum& a, const PauliSum& b) { return a + (-1.0) * b; }

  friend PauliSum operator*(Complex s, const PauliSum& a) {
    auto terms = a.terms_;
    for (auto& t : terms) t.coefficient *= s;
    return PauliSum(a.qubits_, std::move(terms), a.label_, a.units_);
  }

  /// Operator product, expanded word by word (not simplified).
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    check_same_size(a, b);
    std::vector<PauliTerm> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        auto p = word_multiply(ta.word, tb.word);
        terms.push_back({p.phase * ta.coefficient * tb.coefficient, std::move(p.word)});
      }
    return PauliSum(a.qubits_, std::move(terms), a.label_, a.units_);
  }

 private:
  static void check_same_size(const PauliSum& a, const PauliSum& b) {
    if (a.qubits_ != b.qubits_) throw std::invalid_argument("PauliSum qubit count mismatch");
  }

  bool compute_hermitian() const {
    std::map<PauliWord, Complex> merged;
    for (const auto& t : terms_) merged[t.word] += t.coefficient;
    return std::all_of(merged.begin(), merged.end(), [](const auto& kv) {
      return std::abs(kv.second.imag()) <= kHermitianTolerance;
    });
  }

  std::size_t qubits_ = 0;
  std::vector<PauliTerm> terms_;
  std::vector<MaskedTerm> masked_;
  std::string label_;
  Units units_ = Units::dimensionless;
  bool hermitian_ = true;
};

/// Merge like words, drop |c| < kDropThreshold, order terms lexicographically by word.
inline PauliSum simplify(const PauliSum& s) {
  std::map<PauliWord, Complex> merged;
  for (const auto& t : s.terms()) merged[t.word] += t.coefficient;
  std::vector<PauliTerm> terms;
  terms.reserve(merged.size());
  for (auto& [w, c] : merged)
    if (std::abs(c) >= kDropThreshold) terms.push_back({c, w});
  return PauliSum(s.qubits(), std::move(terms), s.label(), s.units());
}

/// Simplified commutator [a, b].
inline PauliSum commutator(const PauliSum& a, const PauliSum& b) { return simplify(a * b - b * a); }

/// Non-identity words of a sum in canonical order.
inline std::vector<PauliWord> non_identity_words(const PauliSum& s) {
  std::vector<PauliWord> out;
  const auto merged = simplify(s);
  for (const auto& t : merged.terms())
    if (!t.word.is_identity()) out.push_back(t.word);
  return out;
}

/// Dense 2^n x 2^n matrix of the sum. Throws when n exceeds `qubit_cap`.
inline Eigen::MatrixXcd dense_matrix(const PauliSum& s, std::size_t qubit_cap = kDenseQubitCap) {
  if (s.qubits() > qubit_cap)
    throw std::length_error("dense_matrix: " + std::to_string(s.qubits()) +
                            " qubits exceeds the cap of " + std::to_string(qubit_cap));
  const std::size_t dim = std::size_t{1} << s.qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const auto& t : s.masked_terms()) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (__builtin_popcountll(b & t.word.z_mask) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ t.word.x_mask), static_cast<Eigen::Index>(b)) +=
          t.coefficient * t.word.phase * sign;
    }
  }
  return m;
}

inline Eigen::MatrixXcd dense_matrix(const PauliWord& w) {
  return dense_matrix(PauliSum::from_word(w));
}

}  // namespace fsc
