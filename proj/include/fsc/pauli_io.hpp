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

// Line-oriented text format for Pauli sums:
//
//   qubits=<n> label=<string> units=<hartree|debye|dimensionless>
//   <coeff_real> <coeff_imag> <word>
//   ...
//
// '#' starts a comment. Numbers are parsed with std::from_chars, so the
// process locale never affects the decimal separator.

#pragma once

#include <fmt/format.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fsc/pauli.hpp"

namespace fsc {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return v;
}

inline std::optional<std::size_t> parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parse a Pauli sum. `source` only decorates error messages.
inline PauliSum parse_pauli_sum(std::istream& in, const std::string& source = "<stream>") {
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  std::size_t qubits = 0;
  std::string label;
  Units units = Units::dimensionless;
  std::vector<PauliTerm> terms;

  auto fail = [&](const std::string& msg) {
    throw ParseError(fmt::format("{}:{}: {}", source, line_no, msg));
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    if (!have_header) {
      std::optional<std::size_t> q;
      std::optional<std::string> lab;
      std::optional<Units> u;
      for (auto tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) fail("header token without '=': " + std::string(tok));
        const auto key = tok.substr(0, eq);
        const auto value = tok.substr(eq + 1);
        if (key == "qubits") {
          q = detail::parse_size(value);
          if (!q) fail("bad qubit count '" + std::string(value) + "'");
        } else if (key == "label") {
          lab = std::string(value);
        } else if (key == "units") {
          try {
            u = units_from_name(value);
          } catch (const std::invalid_argument& e) {
            fail(e.what());
          }
        } else {
          fail("unknown header key '" + std::string(key) + "'");
        }
      }
      if (!q || !lab || !u) fail("header must define qubits=, label= and units=");
      qubits = *q;
      label = *lab;
      units = *u;
      have_header = true;
      continue;
    }
    if (tokens.size() != 3) fail("expected '<real> <imag> <word>'");
    const auto re = detail::parse_double(tokens[0]);
    const auto im = detail::parse_double(tokens[1]);
    if (!re || !im) fail("bad coefficient");
    if (tokens[2].size() != qubits)
      fail(fmt::format("word '{}' has length {}, expected {}", tokens[2], tokens[2].size(), qubits));
    try {
      terms.push_back({Complex(*re, *im), PauliWord::parse(tokens[2])});
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (!have_header) throw ParseError(source + ": missing header line");
  try {
    return PauliSum(qubits, std::move(terms), std::move(label), units);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline PauliSum parse_pauli_sum(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pauli_sum(in, "<string>");
}

inline PauliSum read_pauli_sum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Pauli sum file " + path.string());
  return parse_pauli_sum(in, path.string());
}

/// Terms are written in stored order with 17 significant digits.
inline void write_pauli_sum(std::ostream& out, const PauliSum& s) {
  std::string label = s.label().empty() ? "unnamed" : s.label();
  for (char& c : label)
    if (c == ' ' || c == '\t' || c == '#') c = '_';
  out << fmt::format("qubits={} label={} units={}\n", s.qubits(), label, units_name(s.units()));
  for (const auto& t : s.terms())
    out << fmt::format("{:.17g} {:.17g} {}\n", t.coefficient.real(), t.coefficient.imag(), t.word.str());
}

inline std::string format_pauli_sum(const PauliSum& s) {
  std::ostringstream out;
  write_pauli_sum(out, s);
  return out.str();
}

}  // namespace fsc
