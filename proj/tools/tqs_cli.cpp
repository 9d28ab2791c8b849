// Copyright 2026 The TQS Authors
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

// Command-line front end: tqs run | sweep | inspect.
//
// Errors are reported as a single JSON line on stderr, e.g.
//   {"error":"config","line":7,"message":"..."}
// and a nonzero exit status.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqs/harness.hpp"

namespace {

using nlohmann::json;

json double_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const tqs::RunReport& r) {
  json j;
  j["n_qubits"] = r.n_qubits;
  j["basis_size"] = r.basis_size;
  j["circuit_count"] = r.circuit_count;
  j["n_steps"] = r.n_steps;
  j["step_consistency"] = double_or_null(r.step_consistency);
  j["overlap_error_std"] = double_or_null(r.overlap_error_std);
  j["methods"] = json::array();
  for (const auto& m : r.methods) {
    json mj{{"method", m.method},
            {"terminal_fidelity", double_or_null(m.terminal_fidelity)},
            {"min_fidelity", double_or_null(m.min_fidelity)}};
    for (const auto& [name, err] : m.max_observable_error) mj["max_observable_error"][name] = err;
    j["methods"].push_back(std::move(mj));
  }
  return j;
}

tqs::ExperimentConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  tqs::ExperimentConfig cfg = path.empty() ? tqs::ExperimentConfig{} : tqs::load_config(path);
  for (const auto& o : overrides) tqs::apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

int fail(const std::string& kind, const std::string& message, long line = -1) {
  json j{{"error", kind}, {"message", message}};
  if (line >= 0) j["line"] = line;
  std::cerr << j.dump() << '\n';
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Taylor quantum simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", phase = "all";
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("-c,--config", config_path, "Experiment config file");
  run->add_option("-o,--out", out_dir, "Output directory");
  run->add_option("--phase", phase, "all | quantum | classical")->check(CLI::IsMember({"all", "quantum", "classical"}));
  run->add_option("-s,--set", overrides, "Override, section.key=value (repeatable)");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sweep->add_option("-c,--config", config_path, "Experiment config file");
  sweep->add_option("-o,--out", out_dir, "Output directory");
  sweep->add_option("-p,--param", param, "dt | shots | k")->required();
  sweep->add_option("-v,--values", values, "Parameter values")->required()->delimiter(',');
  sweep->add_option("-s,--set", overrides, "Override, section.key=value (repeatable)");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Pretty-print an overlaps file or basis dump");
  inspect->add_option("file", inspect_path, "File to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*run) {
      const auto cfg = load(config_path, overrides);
      const auto report = tqs::run(cfg, out_dir, tqs::parse_phase(phase));
      std::cout << report_json(report).dump() << '\n';
    } else if (*sweep) {
      const auto cfg = load(config_path, overrides);
      const auto rep = tqs::sweep(cfg, param, values, out_dir);
      json j{{"parameter", rep.parameter}, {"values", rep.values}, {"slope", double_or_null(rep.slope)}};
      if (rep.parameter == "k") j["monotone"] = rep.monotone;
      j["runs"] = json::array();
      for (const auto& r : rep.runs) j["runs"].push_back(report_json(r));
      std::cout << j.dump() << '\n';
    } else if (*inspect) {
      tqs::inspect(inspect_path, std::cout);
    }
  } catch (const tqs::ConfigError& e) {
    return fail("config", e.what(), e.line() ? static_cast<long>(e.line()) : -1L);
  } catch (const std::exception& e) {
    return fail("runtime", e.what());
  }
  return 0;
}
