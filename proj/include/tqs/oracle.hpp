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

#include <vector>

#include <Eigen/Eigenvalues>

#include "tqs/moments.hpp"
#include "tqs/statevec.hpp"
#include "tqs/trajectory.hpp"

namespace tqs {

/// exp(-iHt) through one Hermitian eigendecomposition of dense(H), reused
/// for every t.
class Propagator {
 public:
  explicit Propagator(const Hamiltonian& h) : n_(h.n_qubits()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h));
    if (es.info() != Eigen::Success) throw Error("Propagator: eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  std::size_t n_qubits() const { return n_; }
  const Eigen::VectorXd& energies() const { return energies_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v, double t) const {
    Eigen::VectorXcd c = vectors_.adjoint() * v;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -energies_(i) * t);
    return vectors_ * c;
  }

  StateVector evolve(const StateVector& psi, double t) const {
    if (psi.n_qubits() != n_) throw Error("Propagator: qubit count mismatch");
    return StateVector::normalized(n_, apply(psi.amplitudes(), t));
  }

  Eigen::MatrixXcd unitary(double t) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -energies_(i) * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

 private:
  std::size_t n_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

inline StateVector exact_evolve(const StateVector& psi, const Hamiltonian& h, double t) {
  return Propagator(h).evolve(psi, t);
}

/// sum_i alpha_i R_i |psi>, not normalized. Its squared norm is alpha^dagger E alpha.
inline Eigen::VectorXcd superpose(const Coefficients& alpha, const MomentBasis& basis,
                                  const StateVector& psi) {
  if (alpha.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error("superpose: coefficient count does not match basis size");
  }
  if (basis.n_qubits != psi.n_qubits()) throw Error("superpose: qubit count mismatch");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(psi.dimension());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (alpha(static_cast<Eigen::Index>(i)) == cplx(0.0)) continue;
    v += alpha(static_cast<Eigen::Index>(i)) * apply_pauli(basis.reps[i], psi.amplitudes());
  }
  return v;
}

/// The normalized ansatz state sum_i alpha_i R_i |psi>.
inline StateVector reconstruct_state(const Coefficients& alpha, const MomentBasis& basis,
                                     const StateVector& psi) {
  Eigen::VectorXcd v = superpose(alpha, basis, psi);
  if (!(v.norm() > 0)) throw Error("reconstruct_state: coefficients give the zero vector");
  return StateVector::normalized(psi.n_qubits(), std::move(v));
}

/// As above, additionally requiring the pre-normalization norm^2 to equal
/// alpha^dagger E alpha within tol.
inline StateVector reconstruct_state(const Coefficients& alpha, const MomentBasis& basis,
                                     const StateVector& psi, const Eigen::MatrixXcd& E,
                                     double tol = 1e-8) {
  Eigen::VectorXcd v = superpose(alpha, basis, psi);
  const double lhs = v.squaredNorm(), rhs = e_norm(alpha, E);
  if (std::abs(lhs - rhs) > tol) {
    throw Error("reconstruct_state: |state|^2 = " + format_double(lhs) +
                " disagrees with alpha^dagger E alpha = " + format_double(rhs));
  }
  if (!(v.norm() > 0)) throw Error("reconstruct_state: coefficients give the zero vector");
  return StateVector::normalized(psi.n_qubits(), std::move(v));
}

/// Fidelity of each reconstructed trajectory point with exp(-iHt)|psi0>.
inline std::vector<double> trajectory_fidelity(const Trajectory& traj, const MomentBasis& basis,
                                               const StateVector& psi0, const Hamiltonian& h) {
  const Propagator prop(h);
  std::vector<double> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const StateVector approx = reconstruct_state(traj.alphas[i], basis, psi0);
    out.push_back(fidelity(approx, prop.evolve(psi0, traj.time(i))));
  }
  return out;
}

}  // namespace tqs
