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

#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "tqs/moments.hpp"
#include "tqs/overlaps.hpp"

namespace testing_cases {

/// H = Z on one qubit, basis {I, Z}, psi = |+>.
struct Qubit {
  tqs::Hamiltonian h = tqs::Hamiltonian::parse("1.0 Z0\n");
  tqs::MomentBasis basis = tqs::build_cumulative_moments(h, 1);
  tqs::StateVector psi{1, Eigen::Vector2cd(1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2)};
  tqs::OverlapSet ov = tqs::compute_overlaps(basis, h, psi, tqs::MeasurementMode::exact(), true);
};

struct Random {
  tqs::Hamiltonian h;
  tqs::MomentBasis basis;
  tqs::StateVector psi;
  tqs::OverlapSet ov;

  Random(std::mt19937_64& rng, std::size_t n, std::size_t terms, std::size_t k)
      : h(oracle::random_hamiltonian(n, terms, rng)),
        basis(tqs::build_cumulative_moments(h, k)),
        psi(n, oracle::random_state(n, rng)),
        ov(tqs::compute_overlaps(basis, h, psi, tqs::MeasurementMode::exact(), true)) {}
};

}  // namespace testing_cases
