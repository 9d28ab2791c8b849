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
#include <limits>
#include <string>

#include "tqs/linalg.hpp"
#include "tqs/overlaps.hpp"
#include "tqs/trajectory.hpp"

namespace tqs {

/// Propagator approximation used inside one step.
enum class Order {
  first,          ///< I - i dt H
  second,         ///< I - i dt H - dt^2/2 H^2 (needs J)
  exact_unitary,  ///< exp(-i dt H) through the R matrix
};

enum class Solver {
  closed_form,  ///< alpha' = E^+ G alpha, E-normalized (the form is rank one)
  pencil,       ///< top generalized eigenvector of (W_alpha, E)
};

inline const char* to_string(Order o) {
  switch (o) {
    case Order::first: return "1";
    case Order::second: return "2";
    default: return "exact_unitary";
  }
}

inline Order parse_order(std::string_view s) {
  if (s == "1" || s == "first") return Order::first;
  if (s == "2" || s == "second") return Order::second;
  if (s == "exact_unitary" || s == "exact-unitary" || s == "unitary") return Order::exact_unitary;
  throw Error("unknown order '" + std::string(s) + "'");
}

inline const char* to_string(Solver s) { return s == Solver::closed_form ? "closed_form" : "pencil"; }

inline Solver parse_solver(std::string_view s) {
  if (s == "closed_form" || s == "closed-form") return Solver::closed_form;
  if (s == "pencil") return Solver::pencil;
  throw Error("unknown solver '" + std::string(s) + "'");
}

/// Default relative eigenvalue cutoffs for the regularized inverse of E.
inline constexpr double kExactPinvCutoff = 1e-10;
inline constexpr double kSampledPinvCutoff = 1e-3;

struct StepConfig {
  double dt = 1e-3;
  Order order = Order::first;
  Solver solver = Solver::closed_form;
  double pinv_cutoff = kExactPinvCutoff;
  std::size_t n_steps = 1;

  void validate() const {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw Error("StepConfig: dt must be finite and >= 0");
    if (!(pinv_cutoff >= 0.0 && pinv_cutoff < 1.0)) throw Error("StepConfig: pinv_cutoff must lie in [0, 1)");
  }
};

/// G = E - i dt D (first order), E - i dt D - dt^2/2 J (second order), or R.
inline Eigen::MatrixXcd build_G(const OverlapSet& ov, double dt, Order order) {
  const cplx I(0.0, 1.0);
  switch (order) {
    case Order::first:
      return ov.E - I * dt * ov.D;
    case Order::second:
      if (!ov.J) throw Error("build_G: second order needs the J overlap matrix");
      return ov.E - I * dt * ov.D - (0.5 * dt * dt) * *ov.J;
    case Order::exact_unitary:
      if (!ov.R) throw Error("build_G: exact-unitary mode needs the R matrix");
      if (std::abs(ov.R_dt - dt) > 1e-14 * std::max(1.0, std::abs(dt))) {
        throw Error("build_G: R was computed for dt = " + format_double(ov.R_dt) + ", not " +
                    format_double(dt));
      }
      return *ov.R;
  }
  throw Error("build_G: unknown order");
}

/// Multiplies alpha by a unit phase so its largest-magnitude entry (first
/// one on ties) is real and positive.
inline void fix_global_phase(Coefficients& alpha) {
  if (alpha.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < alpha.size(); ++i) {
    if (std::abs(alpha(i)) > std::abs(alpha(best))) best = i;
  }
  const double mag = std::abs(alpha(best));
  if (mag > 0.0) alpha *= std::conj(alpha(best)) / mag;
}

/// Upper bound on the exact-mode objective. The objective is
/// |P phi|^2 / (alpha^dagger E alpha) for phi = V psi(alpha) and P the
/// projector onto the basis span, so it is at most ||V||^2, and ||H|| is at
/// most sum_j |beta_j|.
inline double objective_bound(Order order, double dt, double coefficient_l1) {
  const double x = dt * coefficient_l1;
  switch (order) {
    case Order::first: return 1.0 + x * x;
    case Order::second: return 1.0 + 0.25 * x * x * x * x;
    default: return 1.0;
  }
}

struct StepResult {
  Coefficients alpha;
  /// alpha'^dagger W_alpha alpha' at the maximizer.
  double objective;
};

/**
 * One TQS update: maximize alpha'^dagger W alpha' subject to
 * alpha'^dagger E alpha' = 1, with W = G alpha alpha^dagger G^dagger /
 * (alpha^dagger E alpha). E is decomposed once per Stepper.
 */
class Stepper {
 public:
  static constexpr double kConstraintTolerance = 1e-6;
  static constexpr double kObjectiveSlack = 1e-6;

  Stepper(const OverlapSet& ov, const StepConfig& cfg)
      : cfg_(validated(cfg)), E_(ov.E), gram_(ov.E, cfg_.pinv_cutoff), exact_(ov.mode.is_exact()),
        bound_(objective_bound(cfg.order, cfg.dt, ov.coefficient_l1)) {
    G_ = build_G(ov, cfg.dt, cfg.order);
    transfer_ = gram_.pseudo_inverse() * G_;
  }

  const RegularizedGram& gram() const { return gram_; }
  const Eigen::MatrixXcd& G() const { return G_; }
  const StepConfig& config() const { return cfg_; }

  StepResult step(const Coefficients& alpha) const {
    if (alpha.size() != E_.rows()) throw Error("step: coefficient count does not match the overlaps");
    const double norm = e_norm(alpha, E_);
    if (std::abs(norm - 1.0) > kConstraintTolerance) {
      throw Error("step: alpha^dagger E alpha = " + format_double(norm) + ", expected 1");
    }
    StepResult r = cfg_.solver == Solver::closed_form ? closed_form(alpha, norm) : pencil(alpha, norm);
    if (exact_ && r.objective > bound_ + kObjectiveSlack) {
      throw Error("step: objective " + format_double(r.objective) + " exceeds its bound " +
                  format_double(bound_) + " in exact mode");
    }
    fix_global_phase(r.alpha);
    return r;
  }

 private:
  static const StepConfig& validated(const StepConfig& cfg) {
    cfg.validate();
    return cfg;
  }

  StepResult closed_form(const Coefficients& alpha, double norm) const {
    const Eigen::VectorXcd v = G_ * alpha;
    Coefficients next = transfer_ * alpha;  // E^+ G alpha
    const double value = v.dot(next).real();  // v^dagger E^+ v
    if (!(value > 0.0)) throw Error("step: G alpha has no component in the row space of E");
    next /= std::sqrt(value);
    return {std::move(next), value / norm};
  }

  StepResult pencil(const Coefficients& alpha, double norm) const {
    const Eigen::VectorXcd v = G_ * alpha;
    const Eigen::MatrixXcd W = v * v.adjoint() / norm;
    const Eigen::MatrixXcd& T = gram_.whitening();
    const Eigen::MatrixXcd reduced = T.adjoint() * W * T;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced);
    if (es.info() != Eigen::Success) throw Error("step: pencil eigensolver failed");
    const Eigen::Index top = reduced.rows() - 1;
    return {T * es.eigenvectors().col(top), es.eigenvalues()(top)};
  }

  StepConfig cfg_;
  Eigen::MatrixXcd E_;
  RegularizedGram gram_;
  bool exact_;
  double bound_;
  Eigen::MatrixXcd G_;
  Eigen::MatrixXcd transfer_;
};

inline StepResult step(const Coefficients& alpha, const OverlapSet& ov, const StepConfig& cfg) {
  return Stepper(ov, cfg).step(alpha);
}

/// cfg.n_steps updates from alpha0; purely classical.
inline Trajectory evolve(const Coefficients& alpha0, const OverlapSet& ov, const StepConfig& cfg) {
  const Stepper stepper(ov, cfg);
  Trajectory traj;
  traj.method = "tqs";
  traj.dt = cfg.dt;
  traj.alphas.reserve(cfg.n_steps + 1);
  traj.alphas.push_back(alpha0);
  traj.objectives.push_back(1.0);
  for (std::size_t s = 0; s < cfg.n_steps; ++s) {
    StepResult r = stepper.step(traj.alphas.back());
    traj.alphas.push_back(std::move(r.alpha));
    traj.objectives.push_back(r.objective);
  }
  return traj;
}

/// a times the unit phase that brings it closest to ref.
inline Coefficients align_phase(const Coefficients& a, const Coefficients& ref) {
  const cplx overlap = a.dot(ref);
  const double mag = std::abs(overlap);
  return mag > 0.0 ? Coefficients(a * (overlap / mag)) : a;
}

/// || step(alpha, dt) - step(step(alpha, dt/2), dt/2) || after phase alignment.
/// Scales as dt^2 for first order and dt^3 for second order.
inline double step_consistency(const Coefficients& alpha, const OverlapSet& ov, const StepConfig& cfg) {
  if (cfg.order == Order::exact_unitary) throw Error("step_consistency: not defined for exact-unitary mode");
  StepConfig half = cfg;
  half.dt = 0.5 * cfg.dt;
  const Stepper full_step(ov, cfg), half_step(ov, half);
  const Coefficients one = full_step.step(alpha).alpha;
  const Coefficients two = half_step.step(half_step.step(alpha).alpha).alpha;
  return (align_phase(two, one) - one).norm();
}

/// The unit vector on the identity basis state, i.e. the ansatz equal to |psi>.
inline Coefficients initial_coefficients(Eigen::Index m) {
  Coefficients a = Coefficients::Zero(m);
  a(0) = 1.0;
  return a;
}

/// alpha^dagger M alpha for an observable matrix M over the basis.
inline double observable(const Coefficients& alpha, const Eigen::MatrixXcd& M) {
  if (alpha.size() != M.rows()) throw Error("observable: dimension mismatch");
  return alpha.dot(M * alpha).real();
}

/// alpha^dagger M alpha with M_mn = <chi_m| h_obs |chi_n> from exact expectations.
inline double observable(const Coefficients& alpha, const MomentBasis& basis, const Hamiltonian& h_obs,
                         const StateVector& psi) {
  if (h_obs.n_qubits() != psi.n_qubits() || basis.n_qubits != psi.n_qubits()) {
    throw Error("observable: qubit count mismatch");
  }
  const auto terms = as_complex_terms(h_obs);
  ExpectationTable table;
  require_operator(table, basis, terms);
  table.measure(psi, MeasurementMode::exact());
  return observable(alpha, operator_matrix(basis, terms, table));
}

}  // namespace tqs
