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

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tqs/moments.hpp"
#include "tqs/oracle.hpp"
#include "tqs/rng.hpp"
#include "tqs/statevec.hpp"

namespace tqs {

/// How Pauli expectations in the reference state are obtained.
struct MeasurementMode {
  enum class Kind { exact, sampled };
  Kind kind = Kind::exact;
  std::size_t shots = 0;
  std::uint64_t seed = 0;

  static MeasurementMode exact() { return {}; }
  static MeasurementMode sampled(std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw Error("sampled mode needs a positive shot count");
    return {Kind::sampled, shots, seed};
  }
  bool is_exact() const { return kind == Kind::exact; }

  friend bool operator==(const MeasurementMode&, const MeasurementMode&) = default;
};

/**
 * Expectation values of distinct canonical Pauli strings in |psi>: one
 * entry per "circuit". Strings are registered first, then measured in one
 * deterministic pass. In sampled mode every string draws from its own
 * generator seeded by (mode seed, string), so a value never depends on which
 * other strings were requested. The identity is never measured.
 */
class ExpectationTable {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  void require(const PauliString& p) {
    if (measured_) throw Error("ExpectationTable: already measured");
    const PauliString c = p.canonical();
    if (!c.is_identity()) values_.try_emplace(c.key(), RequiredEntry{c, 0.0});
  }

  void measure(const StateVector& psi, const MeasurementMode& mode) {
    for (auto& [key, entry] : values_) {
      if (mode.is_exact()) {
        entry.value = expectation(entry.pauli, psi);
      } else {
        Rng rng(string_seed(mode.seed, entry.pauli));
        entry.value = sample_expectation(entry.pauli, psi, mode.shots, rng);
      }
    }
    measured_ = true;
  }

  double at(const PauliString& p) const {
    if (p.is_identity()) return 1.0;
    const auto it = values_.find(p.key());
    if (it == values_.end()) throw Error("ExpectationTable: " + p.to_sparse() + " was not measured");
    return it->second.value;
  }

  /// Distinct non-identity strings, i.e. measurement circuits.
  std::size_t circuit_count() const { return values_.size(); }

  std::vector<PauliString> strings() const {
    std::vector<PauliString> out;
    for (const auto& [k, e] : values_) out.push_back(e.pauli);
    return out;
  }

  static std::uint64_t string_seed(std::uint64_t seed, const PauliString& p) {
    return mix_seed(seed ^ mix_seed(p.z_mask() ^ mix_seed(p.x_mask())));
  }

 private:
  struct RequiredEntry {
    PauliString pauli;
    double value;
  };
  std::map<Key, RequiredEntry> values_;
  bool measured_ = false;
};

namespace detail {

template <class F>
void for_each_element(const MomentBasis& basis, const std::vector<ComplexPauliTerm>& terms, F&& f) {
  for (std::size_t m = 0; m < basis.size(); ++m) {
    for (std::size_t n = 0; n < basis.size(); ++n) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        // R_m is Hermitian, so R_m^dagger Q_j R_n = R_m Q_j R_n.
        f(m, n, terms[j].coefficient, basis.reps[m] * terms[j].pauli * basis.reps[n]);
      }
    }
  }
}

inline std::vector<ComplexPauliTerm> identity_term(std::size_t n) {
  return {{1.0, PauliString::identity(n)}};
}

}  // namespace detail

/// Registers every string that operator_matrix(basis, terms, .) will read.
inline void require_operator(ExpectationTable& table, const MomentBasis& basis,
                             const std::vector<ComplexPauliTerm>& terms) {
  detail::for_each_element(basis, terms, [&](std::size_t, std::size_t, cplx, const PauliString& p) {
    table.require(p);
  });
}

/// M_mn = sum_j c_j <chi_m| Q_j |chi_n>, with each matrix element reduced to
/// phase * <psi| rep |psi> and the phase applied classically.
inline Eigen::MatrixXcd operator_matrix(const MomentBasis& basis,
                                        const std::vector<ComplexPauliTerm>& terms,
                                        const ExpectationTable& table) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  detail::for_each_element(basis, terms,
                           [&](std::size_t r, std::size_t c, cplx coef, const PauliString& p) {
                             const CanonicalForm cf = canonicalize(p);
                             M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                                 coef * cf.phase * table.at(cf.rep);
                           });
  return M;
}

struct NamedMatrix {
  std::string name;
  Eigen::MatrixXcd matrix;
};

/// An observable to be measured alongside the overlaps.
struct NamedOperator {
  std::string name;
  Hamiltonian op;
};

/// Everything the classical evolution phase needs.
struct OverlapSet {
  Eigen::MatrixXcd E;
  Eigen::MatrixXcd D;
  std::optional<Eigen::MatrixXcd> J;
  /// <chi_m| exp(-iH R_dt) |chi_n>, present only for exact-unitary runs.
  std::optional<Eigen::MatrixXcd> R;
  double R_dt = 0.0;
  std::vector<NamedMatrix> observables;
  std::string basis_id;
  MeasurementMode mode;
  /// sum_j |beta_j|, an upper bound on ||H||.
  double coefficient_l1 = 0.0;
  std::size_t circuits = 0;

  Eigen::Index dimension() const { return E.rows(); }

  const Eigen::MatrixXcd& observable(const std::string& name) const {
    for (const auto& o : observables) {
      if (o.name == name) return o.matrix;
    }
    throw Error("OverlapSet: no observable named '" + name + "'");
  }
};

/// Measures E, D (and J, and each observable) on |psi>.
inline OverlapSet compute_overlaps(const MomentBasis& basis, const Hamiltonian& h,
                                   const StateVector& psi, const MeasurementMode& mode,
                                   bool include_J, const std::vector<NamedOperator>& observables = {}) {
  if (basis.n_qubits != psi.n_qubits() || h.n_qubits() != psi.n_qubits()) {
    throw Error("compute_overlaps: qubit count mismatch between basis, Hamiltonian and state");
  }
  const auto id = detail::identity_term(psi.n_qubits());
  const auto hterms = as_complex_terms(h);
  const auto h2terms = include_J ? hamiltonian_square_terms(h) : std::vector<ComplexPauliTerm>{};

  ExpectationTable table;
  require_operator(table, basis, id);
  require_operator(table, basis, hterms);
  if (include_J) require_operator(table, basis, h2terms);
  const std::size_t core_circuits = table.circuit_count();
  for (const auto& o : observables) {
    if (o.op.n_qubits() != psi.n_qubits()) throw Error("compute_overlaps: observable qubit count mismatch");
    require_operator(table, basis, as_complex_terms(o.op));
  }
  table.measure(psi, mode);

  auto finish = [&](Eigen::MatrixXcd M) {
    if (!mode.is_exact()) M = ((M + M.adjoint()) * 0.5).eval();
    return M;
  };

  OverlapSet ov;
  ov.E = finish(operator_matrix(basis, id, table));
  ov.D = finish(operator_matrix(basis, hterms, table));
  if (include_J) ov.J = finish(operator_matrix(basis, h2terms, table));
  for (const auto& o : observables) {
    ov.observables.push_back({o.name, finish(operator_matrix(basis, as_complex_terms(o.op), table))});
  }
  ov.basis_id = basis.id();
  ov.mode = mode;
  ov.coefficient_l1 = h.coefficient_l1();
  ov.circuits = core_circuits;
  return ov;
}

/// Number of distinct non-identity Pauli expectations needed for E and D
/// (and J when include_J).
inline std::size_t circuit_count(const MomentBasis& basis, const Hamiltonian& h, bool include_J) {
  ExpectationTable table;
  require_operator(table, basis, detail::identity_term(h.n_qubits()));
  require_operator(table, basis, as_complex_terms(h));
  if (include_J) require_operator(table, basis, hamiltonian_square_terms(h));
  return table.circuit_count();
}

/// R_mn = <chi_m| exp(-iH dt) |chi_n>, computed with the dense propagator.
inline Eigen::MatrixXcd compute_R(const MomentBasis& basis, const Propagator& prop,
                                  const StateVector& psi, double dt) {
  if (basis.n_qubits != psi.n_qubits() || prop.n_qubits() != psi.n_qubits()) {
    throw Error("compute_R: qubit count mismatch");
  }
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd chi(psi.dimension(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    chi.col(i) = apply_pauli(basis.reps[static_cast<std::size_t>(i)], psi.amplitudes());
  }
  Eigen::MatrixXcd evolved(psi.dimension(), m);
  for (Eigen::Index i = 0; i < m; ++i) evolved.col(i) = prop.apply(chi.col(i), dt);
  return chi.adjoint() * evolved;
}

inline Eigen::MatrixXcd compute_R(const MomentBasis& basis, const Hamiltonian& h,
                                  const StateVector& psi, double dt) {
  return compute_R(basis, Propagator(h), psi, dt);
}

// ---------------------------------------------------------------------------
// Text serialization. Layout:
//
//   tqs-overlaps 1
//   dimension <m>
//   basis <id>
//   mode exact | mode sampled <shots> <seed>
//   coefficient_l1 <x>
//   circuits <count>
//   matrix E             followed by m rows of 2m numbers (re im re im ...)
//   matrix D
//   [matrix J]
//   [matrix R <dt>]
//   [observable <name>]  (any number)
//   end
//
// Numbers use the shortest round-trip decimal form, so reading back gives
// bit-identical matrices.

namespace detail {

inline void write_matrix(std::ostream& out, const Eigen::MatrixXcd& M) {
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      out << (c ? " " : "") << format_double(M(r, c).real()) << ' ' << format_double(M(r, c).imag());
    }
    out << '\n';
  }
}

}  // namespace detail

inline void write_overlaps(std::ostream& out, const OverlapSet& ov) {
  out << "tqs-overlaps 1\n";
  out << "dimension " << ov.dimension() << '\n';
  out << "basis " << (ov.basis_id.empty() ? "-" : ov.basis_id) << '\n';
  if (ov.mode.is_exact()) out << "mode exact\n";
  else out << "mode sampled " << ov.mode.shots << ' ' << ov.mode.seed << '\n';
  out << "coefficient_l1 " << format_double(ov.coefficient_l1) << '\n';
  out << "circuits " << ov.circuits << '\n';
  out << "matrix E\n";
  detail::write_matrix(out, ov.E);
  out << "matrix D\n";
  detail::write_matrix(out, ov.D);
  if (ov.J) {
    out << "matrix J\n";
    detail::write_matrix(out, *ov.J);
  }
  if (ov.R) {
    out << "matrix R " << format_double(ov.R_dt) << '\n';
    detail::write_matrix(out, *ov.R);
  }
  for (const auto& o : ov.observables) {
    out << "observable " << o.name << '\n';
    detail::write_matrix(out, o.matrix);
  }
  out << "end\n";
}

inline OverlapSet read_overlaps(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error("overlaps line " + std::to_string(lineno) + ": " + msg);
  };
  auto next = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view s = trim(line);
      if (!s.empty() && s.front() != '#') return std::string(s);
    }
    fail("unexpected end of input");
    return {};
  };
  auto expect_key = [&](const std::string& key) -> std::string {
    const std::string s = next();
    if (s.rfind(key + " ", 0) != 0) fail("expected '" + key + "'");
    return std::string(trim(std::string_view(s).substr(key.size())));
  };

  if (next() != "tqs-overlaps 1") fail("not a tqs-overlaps v1 file");
  OverlapSet ov;
  Eigen::Index m = 0;
  if (!parse_int(expect_key("dimension"), m) || m <= 0) fail("bad dimension");
  ov.basis_id = expect_key("basis");
  {
    std::istringstream s(expect_key("mode"));
    std::string kind;
    s >> kind;
    if (kind == "exact") {
      ov.mode = MeasurementMode::exact();
    } else if (kind == "sampled") {
      std::size_t shots = 0;
      std::uint64_t seed = 0;
      if (!(s >> shots >> seed) || shots == 0) fail("bad sampled mode");
      ov.mode = MeasurementMode::sampled(shots, seed);
    } else {
      fail("unknown mode '" + kind + "'");
    }
  }
  if (!parse_double(expect_key("coefficient_l1"), ov.coefficient_l1)) fail("bad coefficient_l1");
  if (!parse_int(expect_key("circuits"), ov.circuits)) fail("bad circuits");

  auto read_matrix = [&]() {
    Eigen::MatrixXcd M(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      std::istringstream row(next());
      for (Eigen::Index c = 0; c < m; ++c) {
        std::string re, im;
        double a = 0, b = 0;
        if (!(row >> re >> im) || !parse_double(re, a) || !parse_double(im, b)) {
          fail("matrix row " + std::to_string(r) + " is short or malformed");
        }
        M(r, c) = cplx(a, b);
      }
      std::string extra;
      if (row >> extra) fail("matrix row " + std::to_string(r) + " has extra entries");
    }
    return M;
  };

  bool have_E = false, have_D = false;
  for (;;) {
    const std::string header = next();
    if (header == "end") break;
    std::istringstream h(header);
    std::string kind, name;
    h >> kind >> name;
    if (kind == "matrix" && name == "E") {
      ov.E = read_matrix();
      have_E = true;
    } else if (kind == "matrix" && name == "D") {
      ov.D = read_matrix();
      have_D = true;
    } else if (kind == "matrix" && name == "J") {
      ov.J = read_matrix();
    } else if (kind == "matrix" && name == "R") {
      std::string dt;
      if (!(h >> dt) || !parse_double(dt, ov.R_dt)) fail("matrix R needs its time step");
      ov.R = read_matrix();
    } else if (kind == "observable" && !name.empty()) {
      ov.observables.push_back({std::string(trim(std::string_view(header).substr(kind.size()))),
                                read_matrix()});
    } else {
      fail("unknown section '" + header + "'");
    }
  }
  if (!have_E || !have_D) throw Error("overlaps: E and D are required");
  return ov;
}

}  // namespace tqs
