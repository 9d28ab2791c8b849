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

#include <ostream>
#include <string>
#include <vector>

#include "tqs/common.hpp"

namespace tqs {

/// Ansatz coefficients alpha over a moment basis.
using Coefficients = Eigen::VectorXcd;

/// alpha^dagger E alpha.
inline double e_norm(const Coefficients& alpha, const Eigen::MatrixXcd& E) {
  return alpha.dot(E * alpha).real();
}

/// Coefficient time series on the uniform grid t_i = i * dt.
struct Trajectory {
  std::string method;
  double dt = 0.0;
  std::vector<Coefficients> alphas;
  /// Per-point optimizer objective; 1 at t = 0, NaN where not applicable.
  std::vector<double> objectives;

  std::size_t size() const { return alphas.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

struct Column {
  std::string name;
  std::vector<double> values;
};

/// CSV schema (version 1): method, t, objective, re_a<i>, im_a<i> for each
/// coefficient, then every extra column in order.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 const std::vector<Column>& extra = {}) {
  const Eigen::Index m = traj.alphas.empty() ? 0 : traj.alphas.front().size();
  out << "method,t,objective";
  for (Eigen::Index i = 0; i < m; ++i) out << ",re_a" << i << ",im_a" << i;
  for (const auto& c : extra) out << ',' << c.name;
  out << '\n';
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out << traj.method << ',' << format_double(traj.time(r)) << ','
        << format_double(traj.objectives.at(r));
    for (Eigen::Index i = 0; i < m; ++i) {
      out << ',' << format_double(traj.alphas[r](i).real()) << ','
          << format_double(traj.alphas[r](i).imag());
    }
    for (const auto& c : extra) out << ',' << format_double(c.values.at(r));
    out << '\n';
  }
}

}  // namespace tqs
