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

#include <fmt/format.h>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fsc/oracle.hpp"
#include "fsc/pauli_io.hpp"
#include "fsc/report.hpp"

namespace {

fsc::RunConfig load(const std::string& path, const std::optional<std::string>& out,
                    const std::optional<std::uint64_t>& seed) {
  auto cfg = fsc::read_run_config(path);
  if (out) cfg.out = *out;
  if (seed) cfg.optimizer.seed = *seed;
  return cfg;
}

int cmd_run(const std::string& path, const std::optional<std::string>& out, const std::optional<std::uint64_t>& seed) {
  const auto cfg = load(path, out, seed);
  const auto report = fsc::run(cfg);
  fsc::write_report(report, cfg.out, cfg.traces);
  std::cout << fsc::energies_text(report) << "\n";
  for (const auto& t : report.dipoles) std::cout << fsc::dipole_text(t) << "\n";
  if (!report.fsc.empty()) std::cout << fsc::hconst_text(report) << "\n";
  std::cout << "wrote " << cfg.out.string() << "\n";
  if (!report.converged()) {
    for (const auto& u : report.unconverged) std::cerr << "unconverged: " << u << "\n";
    return 2;
  }
  return 0;
}

int cmd_validate(const std::string& path, const std::optional<std::string>& out,
                 const std::optional<std::uint64_t>& seed) {
  const auto cfg = load(path, out, seed);
  const auto in = fsc::validate(cfg);
  std::cout << fmt::format("ok: {} qubits, {} states, {} dipole components, methods:", in.hamiltonian.qubits(),
                           cfg.states.size(), in.dipole.size());
  for (auto m : cfg.methods) std::cout << " " << fsc::method_name(m);
  std::cout << "\n";
  return 0;
}

int cmd_oracle(const std::string& path, const std::optional<std::string>& out) {
  const auto h = fsc::read_pauli_sum(path);
  const auto spec = fsc::diagonalize(h);
  std::cout << fsc::spectrum_text(spec);
  if (out) {
    std::filesystem::create_directories(*out);
    std::ofstream(std::filesystem::path(*out) / "oracle_spectrum.csv") << fsc::spectrum_csv(spec);
    std::ofstream(std::filesystem::path(*out) / "oracle_spectrum.txt") << fsc::spectrum_text(spec);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational spectra and FSC transition moments on an exact statevector simulator"};
  app.require_subcommand(1);
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out, "Output directory (overrides [run] out)");
  app.add_option("--seed", seed, "Optimizer seed (overrides [optimizer] seed)");

  std::string config, ham;
  auto* run = app.add_subcommand("run", "Run the configured methods and write tables and summary.json");
  run->add_option("config", config, "Run configuration")->required();
  auto* validate = app.add_subcommand("validate", "Check a configuration and its fixtures without computing");
  validate->add_option("config", config, "Run configuration")->required();
  auto* oracle = app.add_subcommand("oracle", "Exact spectrum of a Hamiltonian file");
  oracle->add_option("hamiltonian", ham, "Pauli-sum file")->required();
  for (auto* sub : {run, validate, oracle}) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Optimizer seed");
  }

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, out, seed);
    if (*validate) return cmd_validate(config, out, seed);
    if (*oracle) return cmd_oracle(ham, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
