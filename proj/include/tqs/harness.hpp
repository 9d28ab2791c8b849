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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tqs/config.hpp"
#include "tqs/moments.hpp"
#include "tqs/oracle.hpp"
#include "tqs/overlaps.hpp"
#include "tqs/qas.hpp"
#include "tqs/stepper.hpp"

namespace tqs {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kOverlapFormatVersion = 1;

/// Which part of the pipeline to execute. `quantum` measures and serializes
/// the overlaps; `classical` evolves from the serialized overlaps only;
/// `all` does both and then compares against the dense oracle.
enum class Phase { all, quantum, classical };

inline Phase parse_phase(std::string_view s) {
  if (s == "all") return Phase::all;
  if (s == "quantum") return Phase::quantum;
  if (s == "classical") return Phase::classical;
  throw Error("unknown phase '" + std::string(s) + "'");
}

struct MethodSummary {
  std::string method;
  double terminal_fidelity = std::numeric_limits<double>::quiet_NaN();
  double min_fidelity = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> max_observable_error;
};

struct RunReport {
  std::size_t n_qubits = 0;
  std::size_t basis_size = 0;
  bool basis_closed = false;
  std::size_t circuit_count = 0;
  std::size_t n_steps = 0;
  /// || step(dt) - two steps(dt/2) || from alpha0; NaN for exact-unitary runs.
  double step_consistency = std::numeric_limits<double>::quiet_NaN();
  /// Pooled standard deviation of sampled-minus-exact overlap entries.
  double overlap_error_std = std::numeric_limits<double>::quiet_NaN();
  std::vector<MethodSummary> methods;

  const MethodSummary* find(std::string_view name) const {
    for (const auto& m : methods) {
      if (m.method == name) return &m;
    }
    return nullptr;
  }
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw Error("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Standard deviation of the real and imaginary parts of the entries of
/// (sampled - exact), pooled over E (off-diagonal) and D.
inline double overlap_error_std(const OverlapSet& sampled, const OverlapSet& exact) {
  std::vector<double> errs;
  for (Eigen::Index r = 0; r < exact.E.rows(); ++r) {
    for (Eigen::Index c = 0; c < exact.E.cols(); ++c) {
      if (r != c) {
        const cplx e = sampled.E(r, c) - exact.E(r, c);
        errs.push_back(e.real());
        errs.push_back(e.imag());
      }
      const cplx d = sampled.D(r, c) - exact.D(r, c);
      errs.push_back(d.real());
      errs.push_back(d.imag());
    }
  }
  if (errs.size() < 2) return 0.0;
  double mean = 0;
  for (double e : errs) mean += e;
  mean /= static_cast<double>(errs.size());
  double var = 0;
  for (double e : errs) var += (e - mean) * (e - mean);
  return std::sqrt(var / static_cast<double>(errs.size() - 1));
}

namespace detail {

/// Ordered key/value manifest, merged across phases.
class Manifest {
 public:
  void load(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) set(line.substr(0, eq), line.substr(eq + 3));
    }
  }
  void set(const std::string& key, const std::string& value) {
    for (auto& kv : items_) {
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    }
    items_.emplace_back(key, value);
  }
  void set(const std::string& key, double v) { set(key, format_double(v)); }
  void set(const std::string& key, std::size_t v) { set(key, std::to_string(v)); }
  void save(const std::filesystem::path& p) const {
    std::ofstream out(p);
    for (const auto& [k, v] : items_) out << k << " = " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

inline std::string column_suffix(const std::string& obs) {
  std::string s;
  for (char c : obs) s += (c == ' ') ? '_' : c;
  return s;
}

inline std::vector<NamedOperator> observable_operators(const ExperimentConfig& cfg, std::size_t n) {
  std::vector<NamedOperator> out;
  for (const auto& o : cfg.observables) {
    PauliString p;
    try {
      p = PauliString::from_sparse(n, o);
    } catch (const Error& e) {
      throw Error("observable '" + o + "': " + e.what());
    }
    out.push_back({o, Hamiltonian(n, {{1.0, p}}, true)});
  }
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::function<void(std::ostream&)>& f) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  f(out);
  if (!out) throw Error("write failed for '" + p.string() + "'");
}

inline std::vector<double> observable_series(const Trajectory& traj, const Eigen::MatrixXcd& M) {
  std::vector<double> v;
  v.reserve(traj.size());
  for (const auto& a : traj.alphas) v.push_back(observable(a, M));
  return v;
}

}  // namespace detail

/// Runs the pipeline for one configuration, writing into `out`:
///   basis.txt, overlaps.txt, state.csv, circuit.txt (random-layers states),
///   trajectory_<method>.csv, summary.csv, manifest.txt.
inline RunReport run(const ExperimentConfig& cfg, const std::filesystem::path& out, Phase phase = Phase::all) {
  namespace fs = std::filesystem;
  cfg.validate();
  fs::create_directories(out);
  RunReport report;
  report.n_steps = cfg.n_steps();
  detail::Manifest manifest;
  manifest.load(out / "manifest.txt");
  manifest.set("tool_version", std::string(kToolVersion));
  manifest.set("csv_schema_version", std::size_t(kCsvSchemaVersion));
  manifest.set("overlaps_format_version", std::size_t(kOverlapFormatVersion));

  const Hamiltonian h = cfg.load_hamiltonian();
  report.n_qubits = h.n_qubits();
  if (phase == Phase::all && cfg.run_exact && h.n_qubits() > kOracleQubitLimit) {
    throw Error("exact method requested for " + std::to_string(h.n_qubits()) + " qubits; the dense oracle is limited to " +
                std::to_string(kOracleQubitLimit));
  }
  const auto observables = detail::observable_operators(cfg, h.n_qubits());

  if (phase != Phase::classical) {
    const MomentBasis basis = build_cumulative_moments(h, cfg.k);
    const StateVector psi = cfg.initial_state(h.n_qubits());
    OverlapSet ov = compute_overlaps(basis, h, psi, cfg.mode, cfg.order == Order::second, observables);
    if (cfg.order == Order::exact_unitary) {
      ov.R = compute_R(basis, h, psi, cfg.dt);
      ov.R_dt = cfg.dt;
    }
    if (!cfg.mode.is_exact()) {
      const OverlapSet exact = compute_overlaps(basis, h, psi, MeasurementMode::exact(), false);
      report.overlap_error_std = overlap_error_std(ov, exact);
      manifest.set("overlap_error_std", report.overlap_error_std);
    }
    detail::write_file(out / "basis.txt", [&](std::ostream& o) { write_basis(o, basis); });
    detail::write_file(out / "overlaps.txt", [&](std::ostream& o) { write_overlaps(o, ov); });
    detail::write_file(out / "state.csv", [&](std::ostream& o) { psi.write_csv(o); });
    if (cfg.state_kind == StateKind::random_layers) {
      detail::write_file(out / "circuit.txt", [&](std::ostream& o) {
        write_circuit(o, random_layers(h.n_qubits(), cfg.layers, cfg.state_seed, cfg.entangler));
      });
    }
    detail::write_file(out / "config.txt", [&](std::ostream& o) { o << cfg.to_text(); });

    report.basis_size = basis.size();
    report.basis_closed = closure_reached(basis, h);
    report.circuit_count = ov.circuits;
    manifest.set("hamiltonian", cfg.hamiltonian);
    if (models::is_builtin(cfg.hamiltonian)) manifest.set("hamiltonian_reading", models::builtin_note(cfg.hamiltonian));
    manifest.set("n_qubits", h.n_qubits());
    manifest.set("n_terms", h.size());
    manifest.set("k", cfg.k);
    manifest.set("basis_id", basis.id());
    manifest.set("basis_size", basis.size());
    manifest.set("basis_closed", std::string(report.basis_closed ? "true" : "false"));
    manifest.set("circuit_count", ov.circuits);
    {
      ExpectationTable all;
      require_operator(all, basis, detail::identity_term(h.n_qubits()));
      require_operator(all, basis, as_complex_terms(h));
      if (cfg.order == Order::second) require_operator(all, basis, hamiltonian_square_terms(h));
      for (const auto& o : observables) require_operator(all, basis, as_complex_terms(o.op));
      manifest.set("circuit_count_with_observables", all.circuit_count());
    }
    switch (cfg.state_kind) {
      case StateKind::random_layers:
        manifest.set("state", "random-layers layers=" + std::to_string(cfg.layers) +
                                  " entangler=" + to_string(cfg.entangler));
        manifest.set("state_seed", std::to_string(cfg.state_seed));
        break;
      case StateKind::basis: manifest.set("state", "basis " + cfg.bits); break;
      case StateKind::circuit: manifest.set("state", "circuit " + cfg.circuit_file); break;
    }
    manifest.set("mode", std::string(cfg.mode.is_exact() ? "exact" : "sampled"));
    if (!cfg.mode.is_exact()) {
      manifest.set("shots", cfg.mode.shots);
      manifest.set("measurement_seed", std::to_string(cfg.mode.seed));
    }
  }

  if (phase == Phase::quantum) {
    manifest.save(out / "manifest.txt");
    return report;
  }

  // Classical phase: reads only the serialized overlaps.
  OverlapSet ov;
  {
    std::ifstream in(out / "overlaps.txt");
    if (!in) throw Error("classical phase needs '" + (out / "overlaps.txt").string() + "'");
    ov = read_overlaps(in);
  }
  if (phase == Phase::classical) {
    report.basis_size = static_cast<std::size_t>(ov.dimension());
    report.circuit_count = ov.circuits;
  }
  const Coefficients alpha0 = initial_coefficients(ov.dimension());
  const double cutoff = cfg.effective_pinv_cutoff();

  std::vector<Trajectory> trajectories;
  if (cfg.run_tqs) {
    StepConfig sc{cfg.dt, cfg.order, cfg.solver, cutoff, report.n_steps};
    trajectories.push_back(evolve(alpha0, ov, sc));
    if (cfg.order != Order::exact_unitary) {
      report.step_consistency = step_consistency(alpha0, ov, sc);
      manifest.set("step_consistency", report.step_consistency);
    }
  }
  if (cfg.run_qas) {
    QasConfig qc{cfg.dt, report.n_steps, cfg.integrator, cutoff, true};
    trajectories.push_back(integrate(alpha0, ov, qc));
  }

  std::vector<std::vector<Column>> columns(trajectories.size());
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    for (const auto& o : ov.observables) {
      columns[t].push_back({"obs_" + detail::column_suffix(o.name),
                            detail::observable_series(trajectories[t], o.matrix)});
    }
    report.methods.push_back({trajectories[t].method, {}, {}, {}});
  }

  // Oracle comparison, only when the state may be touched again.
  if (phase == Phase::all && cfg.run_exact) {
    const MomentBasis basis = build_cumulative_moments(h, cfg.k);
    const StateVector psi = cfg.initial_state(h.n_qubits());
    const Propagator prop(h);
    std::vector<StateVector> exact_states;
    exact_states.reserve(report.n_steps + 1);
    for (std::size_t i = 0; i <= report.n_steps; ++i) {
      exact_states.push_back(prop.evolve(psi, static_cast<double>(i) * cfg.dt));
    }
    std::vector<Column> exact_obs;
    for (const auto& o : observables) {
      Column c{"exact_" + detail::column_suffix(o.name), {}};
      for (const auto& s : exact_states) c.values.push_back(expectation(o.op.terms()[0].pauli, s));
      exact_obs.push_back(std::move(c));
    }
    detail::write_file(out / "trajectory_exact.csv", [&](std::ostream& os) {
      os << "method,t";
      for (const auto& c : exact_obs) os << ",obs_" << c.name.substr(6);
      os << '\n';
      for (std::size_t i = 0; i <= report.n_steps; ++i) {
        os << "exact," << format_double(static_cast<double>(i) * cfg.dt);
        for (const auto& c : exact_obs) os << ',' << format_double(c.values[i]);
        os << '\n';
      }
    });
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
      Column fid{"fidelity", {}};
      for (std::size_t i = 0; i < trajectories[t].size(); ++i) {
        fid.values.push_back(fidelity(reconstruct_state(trajectories[t].alphas[i], basis, psi), exact_states[i]));
      }
      MethodSummary& ms = report.methods[t];
      ms.terminal_fidelity = fid.values.back();
      ms.min_fidelity = *std::min_element(fid.values.begin(), fid.values.end());
      for (std::size_t o = 0; o < exact_obs.size(); ++o) {
        const auto& approx = columns[t][o].values;
        double worst = 0;
        for (std::size_t i = 0; i < approx.size(); ++i) {
          worst = std::max(worst, std::abs(approx[i] - exact_obs[o].values[i]));
        }
        ms.max_observable_error.emplace_back(observables[o].name, worst);
      }
      columns[t].push_back(std::move(fid));
      for (const auto& c : exact_obs) columns[t].push_back(c);
    }
  }

  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    detail::write_file(out / ("trajectory_" + trajectories[t].method + ".csv"),
                       [&](std::ostream& os) { write_trajectory_csv(os, trajectories[t], columns[t]); });
  }
  detail::write_file(out / "summary.csv", [&](std::ostream& os) {
    os << "method,terminal_fidelity,min_fidelity";
    for (const auto& o : cfg.observables) os << ",max_err_" << detail::column_suffix(o);
    os << '\n';
    for (const auto& m : report.methods) {
      os << m.method << ',' << format_double(m.terminal_fidelity) << ',' << format_double(m.min_fidelity);
      for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
        os << ','
           << format_double(o < m.max_observable_error.size() ? m.max_observable_error[o].second
                                                             : std::numeric_limits<double>::quiet_NaN());
      }
      os << '\n';
    }
  });

  manifest.set("dt", cfg.dt);
  manifest.set("t_max", cfg.t_max);
  manifest.set("n_steps", report.n_steps);
  manifest.set("order", std::string(to_string(cfg.order)));
  manifest.set("solver", std::string(to_string(cfg.solver)));
  manifest.set("pinv_cutoff", cutoff);
  manifest.set("integrator", std::string(to_string(cfg.integrator)));
  manifest.set("methods", cfg.methods_text());
  for (const auto& m : report.methods) {
    if (!std::isnan(m.terminal_fidelity)) manifest.set(m.method + "_terminal_fidelity", m.terminal_fidelity);
  }
  manifest.save(out / "manifest.txt");
  return report;
}

struct SweepReport {
  std::string parameter;
  std::vector<double> values;
  std::vector<RunReport> runs;
  /// Fitted log-log slope of the parameter's natural metric: step
  /// consistency for dt, overlap error std for shots. NaN for k.
  double slope = std::numeric_limits<double>::quiet_NaN();
  /// For k sweeps: whether the minimum TQS fidelity never decreases.
  bool monotone = true;
};

/// One run per value under out/<parameter>_<index>, plus sweep.csv and
/// sweep_summary.txt. Runs execute concurrently.
inline SweepReport sweep(const ExperimentConfig& base, const std::string& parameter,
                         const std::vector<double>& values, const std::filesystem::path& out) {
  if (parameter != "dt" && parameter != "shots" && parameter != "k") {
    throw Error("sweep parameter must be dt, shots or k, got '" + parameter + "'");
  }
  if (values.empty()) throw Error("sweep needs at least one value");
  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    ExperimentConfig c = base;
    if (parameter == "dt") {
      c.dt = v;
    } else if (parameter == "shots") {
      if (!(v >= 1) || v != std::floor(v)) throw Error("shot counts must be positive integers");
      c.mode = MeasurementMode::sampled(static_cast<std::size_t>(v), base.mode.seed);
    } else {
      if (!(v >= 0) || v != std::floor(v)) throw Error("k values must be non-negative integers");
      c.k = static_cast<std::size_t>(v);
    }
    c.validate();
    configs.push_back(std::move(c));
  }
  std::filesystem::create_directories(out);
  std::vector<std::future<RunReport>> futures;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      return run(configs[i], out / (parameter + "_" + std::to_string(i)));
    }));
  }
  SweepReport rep;
  rep.parameter = parameter;
  rep.values = values;
  for (auto& f : futures) rep.runs.push_back(f.get());

  auto tqs_min = [](const RunReport& r) {
    const MethodSummary* m = r.find("tqs");
    return m ? m->min_fidelity : std::numeric_limits<double>::quiet_NaN();
  };
  auto tqs_terminal = [](const RunReport& r) {
    const MethodSummary* m = r.find("tqs");
    return m ? m->terminal_fidelity : std::numeric_limits<double>::quiet_NaN();
  };
  if (values.size() >= 2) {
    std::vector<double> metric;
    for (const auto& r : rep.runs) metric.push_back(parameter == "dt" ? r.step_consistency : r.overlap_error_std);
    if (parameter != "k" && std::all_of(metric.begin(), metric.end(), [](double m) { return m > 0; })) {
      rep.slope = loglog_slope(values, metric);
    }
  }
  if (parameter == "k") {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (tqs_min(rep.runs[order[i]]) < tqs_min(rep.runs[order[i - 1]]) - 1e-12) rep.monotone = false;
    }
  }

  detail::write_file(out / "sweep.csv", [&](std::ostream& os) {
    os << parameter
       << ",basis_size,circuit_count,tqs_terminal_fidelity,tqs_min_fidelity,step_consistency,overlap_error_std\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const RunReport& r = rep.runs[i];
      os << format_double(values[i]) << ',' << r.basis_size << ',' << r.circuit_count << ','
         << format_double(tqs_terminal(r)) << ',' << format_double(tqs_min(r)) << ','
         << format_double(r.step_consistency) << ',' << format_double(r.overlap_error_std) << '\n';
    }
  });
  detail::write_file(out / "sweep_summary.txt", [&](std::ostream& os) {
    os << "parameter = " << parameter << '\n';
    if (parameter == "dt") os << "slope_step_consistency = " << format_double(rep.slope) << '\n';
    if (parameter == "shots") os << "slope_overlap_error_std = " << format_double(rep.slope) << '\n';
    if (parameter == "k") os << "min_fidelity_monotone = " << (rep.monotone ? "true" : "false") << '\n';
  });
  return rep;
}

/// Human-readable dump of an overlaps file or a basis dump.
inline void inspect(const std::filesystem::path& path, std::ostream& os) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  in.seekg(0);
  if (trim(first) == "tqs-overlaps 1") {
    const OverlapSet ov = read_overlaps(in);
    os << "overlaps: dimension " << ov.dimension() << ", basis " << ov.basis_id << ", mode "
       << (ov.mode.is_exact() ? "exact" : "sampled shots=" + std::to_string(ov.mode.shots) +
                                              " seed=" + std::to_string(ov.mode.seed))
       << ", circuits " << ov.circuits << '\n';
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ov.E, Eigen::EigenvaluesOnly);
    os << "E eigenvalues: min " << es.eigenvalues().minCoeff() << ", max " << es.eigenvalues().maxCoeff()
       << '\n';
    auto show = [&](const std::string& name, const Eigen::MatrixXcd& M) {
      os << name << " (hermiticity error " << (M - M.adjoint()).cwiseAbs().maxCoeff() << "):\n";
      const Eigen::IOFormat fmt(6, 0, "  ", "\n", "  ", "");
      os << M.format(fmt) << '\n';
    };
    show("E", ov.E);
    show("D", ov.D);
    if (ov.J) show("J", *ov.J);
    if (ov.R) show("R (dt " + format_double(ov.R_dt) + ")", *ov.R);
    for (const auto& o : ov.observables) show("observable " + o.name, o.matrix);
  } else if (first.rfind("# basis", 0) == 0) {
    const MomentBasis b = read_basis(in);
    os << "basis: " << b.size() << " states on " << b.n_qubits << " qubits, order " << b.order << '\n';
    std::size_t max_level = 0;
    for (auto l : b.levels) max_level = std::max(max_level, l);
    for (std::size_t l = 0; l <= max_level; ++l) {
      os << "  level " << l << ": " << std::count(b.levels.begin(), b.levels.end(), l) << " new\n";
    }
    for (std::size_t i = 0; i < b.size(); ++i) os << "  [" << i << "] " << b.reps[i].to_sparse() << '\n';
  } else {
    throw Error("'" + path.string() + "' is neither an overlaps file nor a basis dump");
  }
}

}  // namespace tqs
