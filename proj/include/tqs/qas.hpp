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

#include <limits>

#include "tqs/linalg.hpp"
#include "tqs/overlaps.hpp"
#include "tqs/stepper.hpp"
#include "tqs/trajectory.hpp"

// Linear-ODE evolution E alpha' = -i D alpha over the same overlaps, i.e. the
// small-step limit of the TQS update.

namespace tqs {

enum class Integrator { euler, rk4 };

inline const char* to_string(Integrator m) { return m == Integrator::euler ? "euler" : "rk4"; }

inline Integrator parse_integrator(std::string_view s) {
  if (s == "euler") return Integrator::euler;
  if (s == "rk4") return Integrator::rk4;
  throw Error("unknown integrator '" + std::string(s) + "'");
}

struct QasConfig {
  double dt = 1e-3;
  std::size_t n_steps = 1;
  Integrator method = Integrator::rk4;
  double pinv_cutoff = kExactPinvCutoff;
  bool renormalize = true;
};

/// The constant generator A = -i E^+ D, so that alpha' = A alpha.
inline Eigen::MatrixXcd qas_generator(const OverlapSet& ov, double pinv_cutoff) {
  const RegularizedGram gram(ov.E, pinv_cutoff);
  return cplx(0.0, -1.0) * (gram.pseudo_inverse() * ov.D);
}

inline Eigen::VectorXcd qas_rhs(const Coefficients& alpha, const OverlapSet& ov, double pinv_cutoff) {
  if (alpha.size() != ov.dimension()) throw Error("qas_rhs: dimension mismatch");
  return qas_generator(ov, pinv_cutoff) * alpha;
}

inline Trajectory integrate(const Coefficients& alpha0, const OverlapSet& ov, const QasConfig& cfg) {
  if (alpha0.size() != ov.dimension()) throw Error("integrate: dimension mismatch");
  if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw Error("integrate: dt must be finite and >= 0");
  if (std::abs(e_norm(alpha0, ov.E) - 1.0) > Stepper::kConstraintTolerance) {
    throw Error("integrate: alpha0 is not E-normalized");
  }
  const Eigen::MatrixXcd A = qas_generator(ov, cfg.pinv_cutoff);
  const double h = cfg.dt;
  Trajectory traj;
  traj.method = "qas";
  traj.dt = h;
  traj.alphas.reserve(cfg.n_steps + 1);
  traj.alphas.push_back(alpha0);
  traj.objectives.push_back(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < cfg.n_steps; ++s) {
    const Coefficients& a = traj.alphas.back();
    Coefficients next;
    if (cfg.method == Integrator::euler) {
      next = a + h * (A * a);
    } else {
      const Eigen::VectorXcd k1 = A * a;
      const Eigen::VectorXcd k2 = A * (a + 0.5 * h * k1);
      const Eigen::VectorXcd k3 = A * (a + 0.5 * h * k2);
      const Eigen::VectorXcd k4 = A * (a + h * k3);
      next = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (cfg.renormalize) {
      const double n = e_norm(next, ov.E);
      if (!(n > 0.0)) throw Error("integrate: state collapsed to zero E-norm");
      next /= std::sqrt(n);
    }
    traj.alphas.push_back(std::move(next));
    traj.objectives.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return traj;
}

}  // namespace tqs
