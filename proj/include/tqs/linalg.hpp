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

#include <Eigen/Eigenvalues>

#include "tqs/common.hpp"

namespace tqs {

/**
 * Eigendecomposition of a Hermitian Gram matrix E with the eigenvalues
 * below relative_cutoff * lambda_max discarded.
 *
 * With U_k, L_k the kept eigenpairs:
 *   pseudo_inverse() = U_k L_k^-1 U_k^dagger
 *   whitening()      = U_k L_k^-1/2, so whitening()^dagger E whitening() = I_k
 *   projector()      = U_k U_k^dagger = E^+ E
 */
class RegularizedGram {
 public:
  RegularizedGram(const Eigen::MatrixXcd& E, double relative_cutoff) {
    if (E.rows() != E.cols() || E.rows() == 0) throw Error("RegularizedGram: E must be square");
    if (!(relative_cutoff >= 0.0 && relative_cutoff < 1.0)) {
      throw Error("RegularizedGram: cutoff must lie in [0, 1)");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(E);
    if (es.info() != Eigen::Success) throw Error("RegularizedGram: eigendecomposition failed");
    eigenvalues_ = es.eigenvalues();
    lambda_max_ = eigenvalues_.maxCoeff();
    if (!(lambda_max_ > 0.0)) throw Error("RegularizedGram: E has no positive eigenvalue");
    const double threshold = relative_cutoff * lambda_max_;
    Eigen::Index first = 0;
    while (first < eigenvalues_.size() && !(eigenvalues_(first) > threshold)) ++first;
    rank_ = eigenvalues_.size() - first;
    if (rank_ == 0) throw Error("RegularizedGram: every eigenvalue of E is below the cutoff");
    const Eigen::MatrixXcd Uk = es.eigenvectors().rightCols(rank_);
    const Eigen::VectorXd lk = eigenvalues_.tail(rank_);
    whitening_ = Uk * lk.cwiseSqrt().cwiseInverse().asDiagonal();
    pinv_ = whitening_ * whitening_.adjoint();
    projector_ = Uk * Uk.adjoint();
  }

  Eigen::Index rank() const { return rank_; }
  Eigen::Index dimension() const { return eigenvalues_.size(); }
  double lambda_max() const { return lambda_max_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  /// Smallest eigenvalue of E divided by the largest (may be negative).
  double min_relative_eigenvalue() const { return eigenvalues_.minCoeff() / lambda_max_; }

  const Eigen::MatrixXcd& pseudo_inverse() const { return pinv_; }
  const Eigen::MatrixXcd& whitening() const { return whitening_; }
  const Eigen::MatrixXcd& projector() const { return projector_; }

 private:
  Eigen::VectorXd eigenvalues_;
  double lambda_max_ = 0.0;
  Eigen::Index rank_ = 0;
  Eigen::MatrixXcd whitening_;
  Eigen::MatrixXcd pinv_;
  Eigen::MatrixXcd projector_;
};

}  // namespace tqs
