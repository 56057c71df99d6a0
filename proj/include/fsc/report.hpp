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

// Run configuration, the VQD -> FSC pipeline and its table set.

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/ansatz.hpp"
#include "fsc/fermion.hpp"
#include "fsc/fsc.hpp"
#include "fsc/optimize.hpp"
#include "fsc/oracle.hpp"
#include "fsc/pauli.hpp"
#include "fsc/pauli_io.hpp"
#include "fsc/vqe.hpp"
#include "json.hpp"

namespace fsc {

inline constexpr double kDebyePerAtomicUnit = 2.5417464;

/// Atomic units of dipole to Debye.
inline double convert_units(double au) { return au * kDebyePerAtomicUnit; }
inline double debye_to_atomic(double debye) { return debye / kDebyePerAtomicUnit; }

/// Factor taking an observable's native units to Debye.
inline double debye_factor(Units u) {
  switch (u) {
    case Units::debye: return 1.0;
    case Units::dimensionless: return kDebyePerAtomicUnit;
    case Units::hartree: break;
  }
  throw std::invalid_argument("a dipole operator cannot carry hartree units");
}

enum class Method { vqd, ssvqe, fsc, direct, oracle };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::vqd: return "vqd";
    case Method::ssvqe: return "ssvqe";
    case Method::fsc: return "fsc";
    case Method::direct: return "direct";
    case Method::oracle: return "oracle";
  }
  return "?";
}

inline Method method_from_name(const std::string& s) {
  for (auto m : {Method::vqd, Method::ssvqe, Method::fsc, Method::direct, Method::oracle})
    if (method_name(m) == s) return m;
  throw std::invalid_argument("unknown method '" + s + "'");
}

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path source;  ///< config file; relative paths resolve against its directory
  std::string molecule;
  std::filesystem::path hamiltonian;
  std::array<std::optional<std::filesystem::path>, 3> dipole;
  std::filesystem::path number, sz, s2;
  std::vector<SectorTarget> states;
  int uccsd_depth = 2;
  int ham_depth = 2;
  ParameterSharing sharing = ParameterSharing::per_word;
  FscConfig fsc;
  OptimizerConfig optimizer;
  PenaltyWeights weights;
  std::optional<double> beta;
  std::set<Method> methods;
  std::filesystem::path out = "results";
  bool traces = false;

  bool has(Method m) const { return methods.count(m) > 0; }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      auto t = trim(s.substr(start, i - start));
      if (!t.empty()) out.push_back(std::move(t));
      start = i + 1;
    }
  return out;
}

template <class T>
T parse_number(const std::string& v, const std::string& where) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", where, v));
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", where, v));
}

}  // namespace detail

/// Line-oriented `key = value` under `[section]` headers; `#` starts a comment.
inline RunConfig parse_run_config(std::istream& in, const std::filesystem::path& source = {}) {
  RunConfig c;
  c.source = source;
  const auto base = source.has_parent_path() ? source.parent_path() : std::filesystem::path{};
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base / p;
  };
  std::string section;
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = fmt::format("{}:{}", source.empty() ? "<config>" : source.string(), line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      static const std::set<std::string> known{"molecule", "states", "ansatz", "optimizer", "penalty", "run"};
      if (!known.count(section)) throw ConfigError(fmt::format("{}: unknown section [{}]", where, section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(fmt::format("{}: duplicate key '{}' in [{}]", where, key, section));
    auto bad_key = [&] { return ConfigError(fmt::format("{}: unknown key '{}' in [{}]", where, key, section)); };
    auto num = [&] { return detail::parse_number<double>(value, where); };
    auto integer = [&] { return detail::parse_number<int>(value, where); };

    if (section == "molecule") {
      if (key == "name") c.molecule = value;
      else if (key == "hamiltonian") c.hamiltonian = resolve(value);
      else if (key == "dipole_x") c.dipole[0] = resolve(value);
      else if (key == "dipole_y") c.dipole[1] = resolve(value);
      else if (key == "dipole_z") c.dipole[2] = resolve(value);
      else if (key == "number") c.number = resolve(value);
      else if (key == "sz") c.sz = resolve(value);
      else if (key == "s2") c.s2 = resolve(value);
      else throw bad_key();
    } else if (section == "states") {
      const auto f = detail::split(value, ' ');
      if (f.size() != 3) throw ConfigError(fmt::format("{}: state '{}' needs three numbers: N Sz S2", where, key));
      c.states.push_back({key, detail::parse_number<double>(f[0], where), detail::parse_number<double>(f[1], where),
                          detail::parse_number<double>(f[2], where)});
    } else if (section == "ansatz") {
      if (key == "uccsd_depth") c.uccsd_depth = integer();
      else if (key == "ham_depth") c.ham_depth = integer();
      else if (key == "parameter_sharing") c.sharing = sharing_from_name(value);
      else if (key == "fsc_depth") c.fsc.uccsd_depth = integer();
      else if (key == "fsc_ham_depth") c.fsc.ham_depth = integer();
      else if (key == "fsc_n") c.fsc.n = integer();
      else throw bad_key();
    } else if (section == "optimizer") {
      if (key == "gradient_step") c.optimizer.gradient_step = num();
      else if (key == "gradient_tolerance") c.optimizer.gradient_tolerance = num();
      else if (key == "objective_tolerance") c.optimizer.objective_tolerance = num();
      else if (key == "max_iterations") c.optimizer.max_iterations = integer();
      else if (key == "restarts") c.optimizer.restarts = integer();
      else if (key == "seed") c.optimizer.seed = detail::parse_number<std::uint64_t>(value, where);
      else if (key == "threads") c.optimizer.threads = integer();
      else throw bad_key();
    } else if (section == "penalty") {
      if (key == "number") c.weights.number = num();
      else if (key == "sz") c.weights.sz = num();
      else if (key == "s2") c.weights.s2 = num();
      else if (key == "beta") c.beta = num();
      else throw bad_key();
    } else if (section == "run") {
      if (key == "methods") {
        for (const auto& m : detail::split(value, ',')) {
          try {
            c.methods.insert(method_from_name(m));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(fmt::format("{}: {}", where, e.what()));
          }
        }
      } else if (key == "out") {
        c.out = resolve(value);
      } else if (key == "traces") {
        c.traces = detail::parse_bool(value, where);
      } else {
        throw bad_key();
      }
    }
  }
  return c;
}

inline RunConfig read_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_run_config(in, path);
}

/// Operators loaded from a validated config.
struct RunInputs {
  PauliSum hamiltonian;
  std::vector<PauliSum> dipole;
  SymmetryOperators symmetry;
};

/// Every check that can fail before computation: files, qubit counts, state
/// targets, method dependencies and optimizer settings.
inline RunInputs validate(const RunConfig& c) {
  if (c.methods.empty()) throw ConfigError("method set is empty: list at least one of vqd, ssvqe, fsc, direct, oracle");
  if (c.has(Method::fsc) && !c.has(Method::vqd)) throw ConfigError("method fsc needs vqd states");
  if (c.has(Method::direct) && !c.has(Method::vqd) && !c.has(Method::ssvqe))
    throw ConfigError("method direct needs vqd or ssvqe states");
  if (c.states.empty()) throw ConfigError("[states] is empty");
  if (c.has(Method::fsc) && c.states.size() < 2) throw ConfigError("transition matrices need at least two states");
  std::set<std::string> labels;
  for (const auto& s : c.states)
    if (!labels.insert(s.label).second) throw ConfigError("duplicate state label '" + s.label + "'");
  if (c.uccsd_depth < 0 || c.ham_depth < 0) throw ConfigError("ansatz depths must be >= 0");
  try {
    c.fsc.validate();
    c.optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(c.weights.number >= 0 && c.weights.sz >= 0 && c.weights.s2 >= 0))
    throw ConfigError("penalty weights must be >= 0");
  if (c.beta && !(*c.beta > 0)) throw ConfigError("beta must be > 0");

  auto load = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw ConfigError(fmt::format("[molecule] {} is not set", what));
    if (!std::filesystem::exists(p)) throw ConfigError(fmt::format("{} file not found: {}", what, p.string()));
    try {
      return read_pauli_sum(p);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("{} file {}: {}", what, p.string(), e.what()));
    }
  };
  RunInputs in;
  in.hamiltonian = load(c.hamiltonian, "hamiltonian");
  in.symmetry = {load(c.number, "number"), load(c.sz, "sz"), load(c.s2, "s2")};
  const bool need_dipole = c.has(Method::fsc) || c.has(Method::direct);
  static const char* names[] = {"dipole_x", "dipole_y", "dipole_z"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (c.dipole[i]) in.dipole.push_back(load(*c.dipole[i], names[i]));
  }
  if (need_dipole && in.dipole.empty()) throw ConfigError("methods fsc/direct need at least one dipole component");

  const auto n = in.hamiltonian.qubits();
  auto same = [&](const PauliSum& o, const std::string& what) {
    if (o.qubits() != n)
      throw ConfigError(fmt::format("{} has {} qubits, hamiltonian has {}", what, o.qubits(), n));
    if (!o.is_hermitian()) throw ConfigError(what + " is not Hermitian");
  };
  same(in.hamiltonian, "hamiltonian");
  same(in.symmetry.number, "number");
  same(in.symmetry.sz, "sz");
  same(in.symmetry.s2, "s2");
  for (const auto& d : in.dipole) {
    same(d, "dipole " + d.label());
    try {
      (void)debye_factor(d.units());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("dipole {}: {}", d.label(), e.what()));
    }
  }
  if (n > kDenseQubitCap && c.has(Method::oracle))
    throw ConfigError(fmt::format("oracle is capped at {} qubits", kDenseQubitCap));
  for (const auto& s : c.states) {
    try {
      (void)target_occupation(n, s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("state '{}': {}", s.label, e.what()));
    }
  }
  if (c.states.size() > (std::size_t{1} << n)) throw ConfigError("more states than the Hilbert-space dimension");
  return in;
}

struct EnergyRow {
  std::string method;
  std::size_t index = 0;
  std::string label;
  double energy = 0.0;
  std::optional<double> exact;
  std::optional<double> log_error;
  bool converged = true;
};

struct FscRow {
  std::size_t j = 0, k = 0;
  std::string label_j, label_k;
  bool trained = false;  ///< false for selection-rule cells
  double h_const = 0.0;
  double fidelity = 1.0;
  double transfer_loss = 0.0;
  double turn_fidelity = 1.0;
  double turn_loss = 0.0;
  double objective = 0.0;
  bool converged = true;
};

/// Transition magnitudes in Debye for one method.
struct DipoleTable {
  std::string method;
  std::vector<std::string> labels;
  std::vector<TransitionCell> cells;
};

struct RunReport {
  std::string molecule;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::vector<EnergyRow> energies;
  std::vector<FscRow> fsc;
  std::vector<DipoleTable> dipoles;
  std::optional<SpectrumReference> oracle;
  std::vector<std::vector<TraceEntry>> vqd_traces;
  std::vector<std::string> vqd_labels;
  std::vector<std::string> unconverged;

  bool converged() const { return unconverged.empty(); }
};

namespace detail {

inline DipoleTable to_debye(std::string method, std::vector<std::string> labels, const TransitionMatrix& t,
                            std::span<const PauliSum> components) {
  DipoleTable out{std::move(method), std::move(labels), t.cells};
  for (auto& cell : out.cells) {
    double mag = 0.0, frob = 0.0;
    for (std::size_t c = 0; c < cell.components.size(); ++c) {
      const double f = debye_factor(components[c].units());
      auto& r = cell.components[c];
      r.a *= f;
      r.b *= f;
      r.magnitude *= f;
      r.units = Units::debye;
      mag += r.magnitude * r.magnitude;
    }
    const double f0 = debye_factor(components.front().units());
    frob = cell.frobenius * f0;
    cell.magnitude = std::sqrt(mag);
    cell.frobenius = frob;
  }
  return out;
}

inline std::vector<StateVector> states_of(const std::vector<VqeResult>& r) {
  std::vector<StateVector> s;
  for (const auto& x : r) s.push_back(x.state);
  return s;
}

inline std::vector<std::string> labels_of(const std::vector<VqeResult>& r) {
  std::vector<std::string> s;
  for (const auto& x : r) s.push_back(x.label);
  return s;
}

}  // namespace detail

/// Runs the configured methods. Throws ConfigError before any computation
/// when the configuration is inconsistent.
inline RunReport run(const RunConfig& c) {
  const auto in = validate(c);
  const auto& h = in.hamiltonian;
  const auto n = h.qubits();
  RunReport rep;
  rep.molecule = c.molecule;
  rep.seed = c.optimizer.seed;
  for (auto m : c.methods) rep.methods.push_back(method_name(m));

  std::vector<std::size_t> oracle_index;
  if (c.has(Method::oracle)) {
    rep.oracle = diagonalize(h, in.symmetry);
    oracle_index = match_targets(*rep.oracle, c.states);
  }
  auto target_position = [&](const std::string& label) {
    for (std::size_t i = 0; i < c.states.size(); ++i)
      if (c.states[i].label == label) return i;
    throw std::logic_error("unknown state label " + label);
  };
  auto exact_for = [&](const std::string& label) -> std::optional<double> {
    if (!rep.oracle) return std::nullopt;
    return rep.oracle->eigenvalues(static_cast<Eigen::Index>(oracle_index[target_position(label)]));
  };
  auto add_energy = [&](const std::string& method, std::size_t i, const VqeResult& r, bool converged) {
    EnergyRow row{method, i, r.label, r.energy, exact_for(r.label), std::nullopt, converged};
    if (row.exact) row.log_error = log_error(r.energy, *row.exact);
    rep.energies.push_back(std::move(row));
  };

  if (rep.oracle)
    for (std::size_t i = 0; i < c.states.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(oracle_index[i]);
      rep.energies.push_back({"oracle", i, c.states[i].label, rep.oracle->eigenvalues(idx),
                              rep.oracle->eigenvalues(idx), std::nullopt, true});
    }

  std::vector<VqeResult> vqd;
  if (c.has(Method::vqd)) {
    SpectrumProblem sp{h, in.symmetry, c.states, c.weights, c.uccsd_depth, c.ham_depth, c.sharing, c.beta};
    vqd = solve_spectrum(sp, c.optimizer);
    for (std::size_t i = 0; i < vqd.size(); ++i) {
      add_energy("vqd", i, vqd[i], vqd[i].converged);
      if (!vqd[i].converged) rep.unconverged.push_back("vqd:" + vqd[i].label);
      rep.vqd_traces.push_back(vqd[i].trace);
      rep.vqd_labels.push_back(vqd[i].label);
    }
  }

  std::vector<VqeResult> ss;
  if (c.has(Method::ssvqe)) {
    SsvqeProblem p;
    p.hamiltonian = h;
    p.references = ssvqe_references(h, c.states);
    p.weights = ssvqe_default_weights(c.states.size());
    p.spec = make_spec(h, target_occupation(n, c.states.front()), c.uccsd_depth, c.ham_depth, c.sharing);
    for (const auto& s : c.states) p.labels.push_back(s.label);
    ss = ssvqe(p, c.optimizer);
    for (std::size_t i = 0; i < ss.size(); ++i) add_energy("ssvqe", i, ss[i], ss[i].converged);
  }

  const std::vector<PauliSum>& comps = in.dipole;
  if (c.has(Method::fsc)) {
    const auto states = detail::states_of(vqd);
    const std::vector<PauliSum> conserved{in.symmetry.number, in.symmetry.sz};
    std::vector<std::optional<FscPair>> pairs;
    FscConfig fcfg = c.fsc;
    fcfg.optimizer = c.optimizer;
    fcfg.sharing = c.sharing;
    for (std::size_t j = 0; j < states.size(); ++j)
      for (std::size_t k = j + 1; k < states.size(); ++k) {
        FscRow row;
        row.j = j;
        row.k = k;
        row.label_j = vqd[j].label;
        row.label_k = vqd[k].label;
        if (selection_rule_forbids(states[j], states[k], h, comps, conserved)) {
          pairs.emplace_back(std::nullopt);
          rep.fsc.push_back(row);
          continue;
        }
        const auto body = make_spec(h, vqd[j].occupation, fcfg.uccsd_depth, fcfg.ham_depth, fcfg.sharing);
        auto fp = train_fsc_pair(j, k, states, h, body, fcfg);
        row.trained = true;
        row.h_const = fp.transfer.h_const;
        row.fidelity = fp.transfer.fidelity;
        row.transfer_loss = fp.transfer.loss;
        row.turn_fidelity = fp.turn.fidelity;
        row.turn_loss = fp.turn.loss;
        row.objective = fp.transfer.objective;
        row.converged = fp.pair.converged;
        if (!row.converged) rep.unconverged.push_back(fmt::format("fsc:{}-{}", row.label_j, row.label_k));
        rep.fsc.push_back(row);
        pairs.emplace_back(std::move(fp));
      }
    const auto t = transition_matrix_fsc(states, h, pairs, comps, "dipole", c.fsc.degeneracy_tolerance);
    rep.dipoles.push_back(detail::to_debye("fsc", detail::labels_of(vqd), t, comps));
  }

  if (c.has(Method::direct)) {
    if (!vqd.empty()) {
      const auto t = transition_matrix_direct(detail::states_of(vqd), h, comps, "dipole", c.fsc.degeneracy_tolerance);
      rep.dipoles.push_back(detail::to_debye("direct_vqd", detail::labels_of(vqd), t, comps));
    }
    if (!ss.empty()) {
      const auto t = transition_matrix_direct(detail::states_of(ss), h, comps, "dipole", c.fsc.degeneracy_tolerance);
      rep.dipoles.push_back(detail::to_debye("direct_ssvqe", detail::labels_of(ss), t, comps));
    }
  }

  if (rep.oracle && !comps.empty()) {
    // Oracle cells follow the VQD state order when it exists, else target order.
    std::vector<std::string> labels;
    std::vector<std::size_t> idx;
    if (!vqd.empty()) {
      for (const auto& r : vqd) {
        labels.push_back(r.label);
        idx.push_back(oracle_index[target_position(r.label)]);
      }
    } else {
      for (std::size_t i = 0; i < c.states.size(); ++i) {
        labels.push_back(c.states[i].label);
        idx.push_back(oracle_index[i]);
      }
    }
    std::vector<StateVector> exact_states;
    for (auto i : idx) exact_states.push_back(rep.oracle->state(i));
    if (exact_states.size() >= 2) {
      auto t = transition_matrix_direct(exact_states, h, comps, "dipole", c.fsc.degeneracy_tolerance);
      for (auto& cell : t.cells) cell.method = CellMethod::oracle;
      rep.dipoles.push_back(detail::to_debye("oracle", labels, t, comps));
    }
  }
  return rep;
}

namespace detail {

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

/// Right-aligned columns padded to the widest cell.
inline std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      line += fmt::format("{:>{}}", r[i], w[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

inline std::string cell_flags(const TransitionCell& c) {
  std::string f;
  if (!c.converged) f += "!";
  if (c.degenerate) f += "d";
  if (c.method == CellMethod::selection_rule) f += "s";
  return f;
}

inline nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return format_log_error(*v);
  return *v;
}

}  // namespace detail

inline std::string energies_csv(const RunReport& r) {
  std::string s = "method,index,label,energy_hartree,exact_hartree,log_error,converged\n";
  for (const auto& e : r.energies)
    s += fmt::format("{},{},{},{},{},{},{}\n", e.method, e.index, e.label, detail::num(e.energy),
                     e.exact ? detail::num(*e.exact) : "", e.log_error ? format_log_error(*e.log_error) : "",
                     e.converged ? "true" : "false");
  return s;
}

inline std::string energies_text(const RunReport& r) {
  std::vector<std::vector<std::string>> rows{{"method", "state", "energy (Ha)", "exact (Ha)", "log error", "conv"}};
  for (const auto& e : r.energies)
    rows.push_back({e.method, e.label, fmt::format("{:.10f}", e.energy),
                    e.exact ? fmt::format("{:.10f}", *e.exact) : "-",
                    e.log_error ? (std::isinf(*e.log_error) ? "exact" : fmt::format("{:.4f}", *e.log_error)) : "-",
                    e.converged ? "yes" : "no"});
  return detail::aligned(rows);
}

inline std::string dipole_csv(const DipoleTable& t) {
  std::string s = "j,k,label_j,label_k,magnitude_debye,frobenius_debye";
  if (!t.cells.empty())
    for (const auto& c : t.cells.front().components) s += fmt::format(",{0}_a,{0}_b", c.label);
  s += ",converged,degenerate,cell\n";
  for (const auto& c : t.cells) {
    s += fmt::format("{},{},{},{},{},{}", c.j, c.k, t.labels[c.j], t.labels[c.k], detail::num(c.magnitude),
                     detail::num(c.frobenius));
    for (const auto& p : c.components) s += "," + detail::num(p.a) + "," + detail::num(p.b);
    s += fmt::format(",{},{},{}\n", c.converged, c.degenerate, cell_method_name(c.method));
  }
  return s;
}

/// Upper-triangular matrix in Debye; flags: ! unconverged, d degenerate, s selection rule.
inline std::string dipole_text(const DipoleTable& t) {
  const auto m = t.labels.size();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{t.method + " (Debye)"};
  for (const auto& l : t.labels) head.push_back(l);
  rows.push_back(head);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::string> row{t.labels[j]};
    for (std::size_t k = 0; k < m; ++k) {
      if (k <= j) {
        row.push_back(k == j ? "0" : "");
        continue;
      }
      for (const auto& c : t.cells)
        if (c.j == j && c.k == k) row.push_back(fmt::format("{:.6f}{}", c.magnitude, detail::cell_flags(c)));
    }
    rows.push_back(row);
  }
  return detail::aligned(rows);
}

inline std::string hconst_csv(const RunReport& r) {
  std::string s =
      "j,k,label_j,label_k,trained,h_const_hartree,fidelity,transfer_loss,turn_fidelity,turn_loss,objective,"
      "converged\n";
  for (const auto& f : r.fsc)
    s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", f.j, f.k, f.label_j, f.label_k, f.trained,
                     detail::num(f.h_const), detail::num(f.fidelity), detail::num(f.transfer_loss),
                     detail::num(f.turn_fidelity), detail::num(f.turn_loss), detail::num(f.objective), f.converged);
  return s;
}

inline std::string hconst_text(const RunReport& r) {
  std::vector<std::vector<std::string>> rows{{"pair", "H_const (Ha)", "fidelity", "turn fidelity", "conv"}};
  for (const auto& f : r.fsc) {
    if (!f.trained) {
      rows.push_back({fmt::format("({},{})", f.label_j, f.label_k), "selection rule", "-", "-", "yes"});
      continue;
    }
    rows.push_back({fmt::format("({},{})", f.label_j, f.label_k), fmt::format("{:.3e}", f.h_const),
                    fmt::format("{:.10f}", f.fidelity), fmt::format("{:.10f}", f.turn_fidelity),
                    f.converged ? "yes" : "no"});
  }
  return detail::aligned(rows);
}

inline std::string spectrum_csv(const SpectrumReference& s) {
  std::string out = "index,energy_hartree,number,sz,s2\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& l = s.labels[i];
    out += fmt::format("{},{},{},{},{}\n", i, detail::num(s.eigenvalues(static_cast<Eigen::Index>(i))),
                       detail::num(l.number), detail::num(l.sz), detail::num(l.s2));
  }
  return out;
}

inline std::string spectrum_text(const SpectrumReference& s) {
  std::vector<std::vector<std::string>> rows{{"index", "energy (Ha)", "N", "Sz", "S2"}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& l = s.labels[i];
    auto r6 = [](double v) { return fmt::format("{:.6f}", std::abs(v) < 5e-7 ? 0.0 : v); };
    rows.push_back({std::to_string(i), fmt::format("{:.10f}", s.eigenvalues(static_cast<Eigen::Index>(i))),
                    r6(l.number), r6(l.sz), r6(l.s2)});
  }
  return detail::aligned(rows);
}

inline nlohmann::ordered_json summary_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["molecule"] = r.molecule;
  j["seed"] = r.seed;
  j["methods"] = r.methods;
  j["converged"] = r.converged();
  j["unconverged"] = r.unconverged;
  auto& en = j["energies"] = ordered_json::array();
  for (const auto& e : r.energies)
    en.push_back({{"method", e.method},
                  {"index", e.index},
                  {"label", e.label},
                  {"energy_hartree", e.energy},
                  {"exact_hartree", detail::optional_number(e.exact)},
                  {"log_error", detail::optional_number(e.log_error)},
                  {"converged", e.converged}});
  auto& fs = j["fsc"] = ordered_json::array();
  for (const auto& f : r.fsc)
    fs.push_back({{"j", f.j},
                  {"k", f.k},
                  {"trained", f.trained},
                  {"h_const_hartree", f.h_const},
                  {"fidelity", f.fidelity},
                  {"turn_fidelity", f.turn_fidelity},
                  {"objective", f.objective},
                  {"converged", f.converged}});
  auto& dp = j["transition_dipoles"] = ordered_json::object();
  for (const auto& t : r.dipoles) {
    auto& arr = dp[t.method] = ordered_json::array();
    for (const auto& c : t.cells)
      arr.push_back({{"j", c.j},
                     {"k", c.k},
                     {"label_j", t.labels[c.j]},
                     {"label_k", t.labels[c.k]},
                     {"magnitude_debye", c.magnitude},
                     {"frobenius_debye", c.frobenius},
                     {"converged", c.converged},
                     {"degenerate", c.degenerate},
                     {"cell", cell_method_name(c.method)}});
  }
  return j;
}

/// Writes energies, dipole and H_const tables (CSV + text) and summary.json.
inline void write_report(const RunReport& r, const std::filesystem::path& dir, bool traces = false) {
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "energies.csv", energies_csv(r));
  detail::write_file(dir / "energies.txt", energies_text(r));
  for (const auto& t : r.dipoles) {
    detail::write_file(dir / ("dipole_" + t.method + ".csv"), dipole_csv(t));
    detail::write_file(dir / ("dipole_" + t.method + ".txt"), dipole_text(t));
  }
  if (!r.fsc.empty()) {
    detail::write_file(dir / "hconst.csv", hconst_csv(r));
    detail::write_file(dir / "hconst.txt", hconst_text(r));
  }
  if (r.oracle) {
    detail::write_file(dir / "oracle_spectrum.csv", spectrum_csv(*r.oracle));
    detail::write_file(dir / "oracle_spectrum.txt", spectrum_text(*r.oracle));
  }
  if (traces)
    for (std::size_t i = 0; i < r.vqd_traces.size(); ++i)
      write_trace_csv(dir / "traces" / ("vqd_" + r.vqd_labels[i] + ".csv"), r.vqd_traces[i]);
  detail::write_file(dir / "summary.json", summary_json(r).dump(2) + "\n");
}

}  // namespace fsc
