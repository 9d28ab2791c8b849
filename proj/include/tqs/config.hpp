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

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tqs/models.hpp"
#include "tqs/overlaps.hpp"
#include "tqs/qas.hpp"
#include "tqs/statevec.hpp"
#include "tqs/stepper.hpp"

namespace tqs {

/// Configuration error carrying the 1-based line it refers to (0 if none).
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& msg)
      : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Flat key/value text with sections:
//
//   # comment
//   [section]
//   key = value     # trailing comments allowed
//
// Sections may repeat; order is preserved.

struct IniEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct IniSection {
  std::string name;
  std::size_t line = 0;
  std::vector<IniEntry> entries;
};

inline std::vector<IniSection> parse_ini(std::istream& in) {
  std::vector<IniSection> out{{"", 0, {}}};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ConfigError(lineno, "malformed section header");
      out.push_back({std::string(trim(s.substr(1, s.size() - 2))), lineno, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(lineno, "expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    out.back().entries.push_back({key, std::string(trim(s.substr(eq + 1))), lineno});
  }
  if (out.front().entries.empty()) out.erase(out.begin());
  return out;
}

namespace detail {

inline double config_double(const IniEntry& e) {
  double v = 0;
  if (!parse_double(e.value, v) || !std::isfinite(v)) {
    throw ConfigError(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
  }
  return v;
}

template <class Int>
Int config_int(const IniEntry& e) {
  Int v = 0;
  if (!parse_int(e.value, v)) {
    throw ConfigError(e.line, "'" + e.key + "' expects a non-negative integer, got '" + e.value + "'");
  }
  return v;
}

inline bool config_bool(const IniEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "off") return false;
  throw ConfigError(e.line, "'" + e.key + "' expects true/false");
}

/// Splits on commas and semicolons, dropping empty items.
inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ';') {
      if (!trim(cur).empty()) out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.emplace_back(trim(cur));
  return out;
}

template <class F>
auto rethrow_at(std::size_t line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(line, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Circuit files:
//
//   [circuit]
//   n_qubits = 2
//   seed = 7                         # informational
//   [layer]                          # repeat per layer
//   rotations = tx ty tz ; tx ty tz  # one triple per qubit, radians
//   entanglers = 0-1, 1-2            # control-target pairs
//   entangler = cz                   # cz | cnot

inline CircuitSpec parse_circuit(std::istream& in) {
  CircuitSpec spec;
  bool have_header = false;
  for (const auto& sec : parse_ini(in)) {
    if (sec.name == "circuit") {
      have_header = true;
      for (const auto& e : sec.entries) {
        if (e.key == "n_qubits") spec.n_qubits = detail::config_int<std::size_t>(e);
        else if (e.key == "seed") spec.seed = detail::config_int<std::uint64_t>(e);
        else throw ConfigError(e.line, "unknown circuit key '" + e.key + "'");
      }
    } else if (sec.name == "layer") {
      if (!have_header) throw ConfigError(sec.line, "[layer] before [circuit]");
      CircuitLayer layer;
      for (const auto& e : sec.entries) {
        if (e.key == "rotations") {
          for (const auto& triple : detail::split_list(std::string_view(e.value))) {
            std::istringstream ts(triple);
            std::array<double, 3> th{};
            std::string tok;
            for (double& a : th) {
              if (!(ts >> tok) || !parse_double(tok, a)) throw ConfigError(e.line, "rotation triple needs 3 numbers");
            }
            if (ts >> tok) throw ConfigError(e.line, "rotation triple has more than 3 numbers");
            layer.rotations.push_back(th);
          }
        } else if (e.key == "entanglers") {
          for (const auto& pair : detail::split_list(std::string_view(e.value))) {
            const auto dash = pair.find('-');
            std::size_t c = 0, t = 0;
            if (dash == std::string::npos || !parse_int(trim(std::string_view(pair).substr(0, dash)), c) ||
                !parse_int(trim(std::string_view(pair).substr(dash + 1)), t)) {
              throw ConfigError(e.line, "entangler pairs look like '0-1'");
            }
            layer.entanglers.emplace_back(c, t);
          }
        } else if (e.key == "entangler") {
          layer.kind = detail::rethrow_at(e.line, [&] { return parse_entangler(e.value); });
        } else {
          throw ConfigError(e.line, "unknown layer key '" + e.key + "'");
        }
      }
      spec.layers.push_back(std::move(layer));
    } else {
      throw ConfigError(sec.line, "unknown circuit section '" + sec.name + "'");
    }
  }
  if (!have_header) throw ConfigError(0, "circuit file lacks a [circuit] section");
  detail::rethrow_at(0, [&] { spec.validate(); });
  return spec;
}

inline void write_circuit(std::ostream& out, const CircuitSpec& spec) {
  out << "[circuit]\nn_qubits = " << spec.n_qubits << "\nseed = " << spec.seed << "\n";
  for (const auto& l : spec.layers) {
    out << "\n[layer]\nentangler = " << to_string(l.kind) << "\nrotations =";
    for (std::size_t q = 0; q < l.rotations.size(); ++q) {
      out << (q ? " ;" : "") << ' ' << format_double(l.rotations[q][0]) << ' '
          << format_double(l.rotations[q][1]) << ' ' << format_double(l.rotations[q][2]);
    }
    out << "\nentanglers =";
    for (std::size_t i = 0; i < l.entanglers.size(); ++i) {
      out << (i ? "," : "") << ' ' << l.entanglers[i].first << '-' << l.entanglers[i].second;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

enum class StateKind { random_layers, basis, circuit };

/// Shot budget per distinct Pauli string when sampled mode names none.
inline constexpr std::size_t kDefaultShots = 8192;

struct ExperimentConfig {
  // [hamiltonian]
  std::string hamiltonian = "heisenberg2";  ///< built-in name or file path
  // [state]
  StateKind state_kind = StateKind::random_layers;
  std::size_t layers = 5;
  std::uint64_t state_seed = 1;
  Entangler entangler = Entangler::cz;
  std::string bits;          ///< kind = basis
  std::string circuit_file;  ///< kind = circuit
  // [ansatz]
  std::size_t k = 1;
  // [evolution]
  double dt = 1e-3;
  double t_max = 3.0;
  Order order = Order::first;
  Solver solver = Solver::closed_form;
  std::optional<double> pinv_cutoff;
  Integrator integrator = Integrator::rk4;
  // [measurement]
  MeasurementMode mode = MeasurementMode::exact();
  // [output]
  std::vector<std::string> observables{"Z0"};
  bool run_tqs = true;
  bool run_qas = false;
  bool run_exact = true;

  /// Directory relative paths are resolved against.
  std::filesystem::path base_dir = ".";

  std::size_t n_steps() const {
    if (!(dt > 0.0)) throw ConfigError(0, "dt must be positive");
    const double ratio = t_max / dt;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-6 * std::max(1.0, ratio)) {
      throw ConfigError(0, "t_max / dt = " + format_double(ratio) + " is not an integer step count");
    }
    return static_cast<std::size_t>(steps);
  }

  double effective_pinv_cutoff() const {
    return pinv_cutoff.value_or(mode.is_exact() ? kExactPinvCutoff : kSampledPinvCutoff);
  }

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }

  Hamiltonian load_hamiltonian() const {
    if (models::is_builtin(hamiltonian)) return models::builtin(hamiltonian);
    std::ifstream in(resolve(hamiltonian));
    if (!in) throw Error("cannot open Hamiltonian file '" + resolve(hamiltonian).string() + "'");
    return Hamiltonian::parse(in);
  }

  StateVector initial_state(std::size_t n_qubits) const {
    switch (state_kind) {
      case StateKind::basis: {
        StateVector s = StateVector::basis_state(bits);
        if (s.n_qubits() != n_qubits) throw Error("basis string width does not match the Hamiltonian");
        return s;
      }
      case StateKind::circuit: {
        std::ifstream in(resolve(circuit_file));
        if (!in) throw Error("cannot open circuit file '" + resolve(circuit_file).string() + "'");
        const CircuitSpec spec = parse_circuit(in);
        if (spec.n_qubits != n_qubits) throw Error("circuit width does not match the Hamiltonian");
        return prepare(spec);
      }
      default:
        return prepare(random_layers(n_qubits, layers, state_seed, entangler));
    }
  }

  /// Applies one "section.key = value" assignment.
  void set(const std::string& section, const IniEntry& e) {
    auto bad = [&]() { throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + section + "]"); };
    auto guarded = [&](auto&& f) { detail::rethrow_at(e.line, f); };
    if (section == "hamiltonian") {
      if (e.key == "name" || e.key == "file") hamiltonian = e.value;
      else bad();
    } else if (section == "state") {
      if (e.key == "kind") {
        if (e.value == "random-layers" || e.value == "random_layers") state_kind = StateKind::random_layers;
        else if (e.value == "basis") state_kind = StateKind::basis;
        else if (e.value == "circuit") state_kind = StateKind::circuit;
        else throw ConfigError(e.line, "unknown state kind '" + e.value + "'");
      } else if (e.key == "layers") {
        layers = detail::config_int<std::size_t>(e);
      } else if (e.key == "seed") {
        state_seed = detail::config_int<std::uint64_t>(e);
      } else if (e.key == "entangler") {
        guarded([&] { entangler = parse_entangler(e.value); });
      } else if (e.key == "bits") {
        bits = e.value;
      } else if (e.key == "circuit") {
        circuit_file = e.value;
      } else {
        bad();
      }
    } else if (section == "ansatz") {
      if (e.key == "k") k = detail::config_int<std::size_t>(e);
      else bad();
    } else if (section == "evolution") {
      if (e.key == "dt") dt = detail::config_double(e);
      else if (e.key == "t_max") t_max = detail::config_double(e);
      else if (e.key == "order") guarded([&] { order = parse_order(e.value); });
      else if (e.key == "solver") guarded([&] { solver = parse_solver(e.value); });
      else if (e.key == "pinv_cutoff") pinv_cutoff = detail::config_double(e);
      else if (e.key == "integrator") guarded([&] { integrator = parse_integrator(e.value); });
      else bad();
    } else if (section == "measurement") {
      if (e.key == "mode") {
        if (e.value == "exact") mode.kind = MeasurementMode::Kind::exact;
        else if (e.value == "sampled") {
          mode.kind = MeasurementMode::Kind::sampled;
          if (mode.shots == 0) mode.shots = kDefaultShots;
        }
        else throw ConfigError(e.line, "mode must be exact or sampled");
      } else if (e.key == "shots") {
        mode.shots = detail::config_int<std::size_t>(e);
      } else if (e.key == "seed") {
        mode.seed = detail::config_int<std::uint64_t>(e);
      } else {
        bad();
      }
    } else if (section == "output") {
      if (e.key == "observables") {
        observables = detail::split_list(std::string_view(e.value));
      } else if (e.key == "methods") {
        run_tqs = run_qas = run_exact = false;
        for (const auto& m : detail::split_list(std::string_view(e.value))) {
          if (m == "tqs") run_tqs = true;
          else if (m == "qas") run_qas = true;
          else if (m == "exact") run_exact = true;
          else throw ConfigError(e.line, "unknown method '" + m + "'");
        }
      } else {
        bad();
      }
    } else {
      throw ConfigError(e.line, "unknown section [" + section + "]");
    }
  }

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError(0, "dt must be positive");
    if (!(t_max >= 0.0)) throw ConfigError(0, "t_max must be non-negative");
    (void)n_steps();
    if (!mode.is_exact() && mode.shots == 0) throw ConfigError(0, "sampled mode needs shots > 0");
    if (state_kind == StateKind::basis && bits.empty()) throw ConfigError(0, "basis state needs 'bits'");
    if (state_kind == StateKind::circuit && circuit_file.empty()) {
      throw ConfigError(0, "circuit state needs 'circuit'");
    }
    if (pinv_cutoff && !(*pinv_cutoff >= 0.0 && *pinv_cutoff < 1.0)) {
      throw ConfigError(0, "pinv_cutoff must lie in [0, 1)");
    }
  }

  std::string methods_text() const {
    std::string s;
    for (auto [on, name] : {std::pair{run_tqs, "tqs"}, {run_qas, "qas"}, {run_exact, "exact"}}) {
      if (on) s += (s.empty() ? "" : ", ") + std::string(name);
    }
    return s;
  }

  /// Canonical config text; parsing it back yields the same configuration.
  std::string to_text() const {
    std::ostringstream o;
    o << "[hamiltonian]\nname = " << hamiltonian << "\n\n[state]\n";
    switch (state_kind) {
      case StateKind::random_layers:
        o << "kind = random-layers\nlayers = " << layers << "\nseed = " << state_seed
          << "\nentangler = " << to_string(entangler) << "\n";
        break;
      case StateKind::basis: o << "kind = basis\nbits = " << bits << "\n"; break;
      case StateKind::circuit: o << "kind = circuit\ncircuit = " << circuit_file << "\n"; break;
    }
    o << "\n[ansatz]\nk = " << k << "\n\n[evolution]\ndt = " << format_double(dt)
      << "\nt_max = " << format_double(t_max) << "\norder = " << to_string(order)
      << "\nsolver = " << to_string(solver) << "\n";
    if (pinv_cutoff) o << "pinv_cutoff = " << format_double(*pinv_cutoff) << "\n";
    o << "integrator = " << to_string(integrator) << "\n\n[measurement]\n";
    if (mode.is_exact()) o << "mode = exact\n";
    else o << "mode = sampled\nshots = " << mode.shots << "\nseed = " << mode.seed << "\n";
    o << "\n[output]\nobservables = ";
    for (std::size_t i = 0; i < observables.size(); ++i) o << (i ? "; " : "") << observables[i];
    o << "\nmethods = " << methods_text() << "\n";
    return o.str();
  }
};

inline ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".") {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& sec : parse_ini(in)) {
    if (sec.name.empty()) {
      throw ConfigError(sec.entries.front().line, "key outside of any section");
    }
    for (const auto& e : sec.entries) cfg.set(sec.name, e);
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path().empty() ? "." : path.parent_path());
}

/// Applies an override of the form "section.key=value".
inline void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.substr(0, eq).find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos) {
    throw ConfigError(0, "override must look like section.key=value, got '" + std::string(assignment) + "'");
  }
  cfg.set(std::string(trim(assignment.substr(0, dot))),
          IniEntry{std::string(trim(assignment.substr(dot + 1, eq - dot - 1))),
                   std::string(trim(assignment.substr(eq + 1))), 0});
}

}  // namespace tqs
