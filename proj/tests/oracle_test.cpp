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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "test_cases.hpp"
#include "tqs/models.hpp"
#include "tqs/oracle.hpp"
#include "tqs/stepper.hpp"

namespace {

TEST(ExactEvolve, ZeroTime) {
  std::mt19937_64 rng(1);
  const auto h = oracle::random_hamiltonian(3, 4, rng);
  const tqs::StateVector psi(3, oracle::random_state(3, rng));
  EXPECT_LT((tqs::exact_evolve(psi, h, 0.0).amplitudes() - psi.amplitudes()).norm(), 1e-12);
}

TEST(ExactEvolve, SingleQubitPrecession) {
  const testing_cases::Qubit q;
  const auto out = tqs::exact_evolve(q.psi, q.h, std::numbers::pi / 2);
  EXPECT_NEAR(tqs::expectation(tqs::PauliString::from_dense("X"), out), -1.0, 1e-10);
}

TEST(Propagator, MatchesMatrixExponential) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    const auto h = oracle::random_hamiltonian(1 + rng() % 4, 1 + rng() % 6, rng);
    const double t = 0.1 + i * 0.7;
    EXPECT_LT((tqs::Propagator(h).unitary(t) - oracle::expm_minus_i(oracle::dense(h), t)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Reconstruct, IdentityCoefficientsGiveReference) {
  std::mt19937_64 rng(3);
  const testing_cases::Random c(rng, 3, 3, 2);
  const auto s = tqs::reconstruct_state(tqs::initial_coefficients(c.ov.dimension()), c.basis, c.psi);
  EXPECT_LT((s.amplitudes() - c.psi.amplitudes()).norm(), 1e-14);
}

TEST(Reconstruct, NormMatchesGramForm) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int i = 0; i < 10; ++i) {
    const testing_cases::Random c(rng, 1 + rng() % 3, 1 + rng() % 4, rng() % 4);
    tqs::Coefficients a(c.ov.dimension());
    for (auto& e : a) e = tqs::cplx(g(rng), g(rng));
    EXPECT_NEAR(tqs::superpose(a, c.basis, c.psi).squaredNorm(), tqs::e_norm(a, c.ov.E), 1e-10);
    EXPECT_NO_THROW(tqs::reconstruct_state(a, c.basis, c.psi, c.ov.E));
    EXPECT_THROW(tqs::reconstruct_state(a, c.basis, c.psi, 2.0 * c.ov.E + oracle::Mat::Identity(a.size(), a.size())),
                 tqs::Error);
  }
}

TEST(TrajectoryFidelity, StartsAtOne) {
  const testing_cases::Qubit q;
  tqs::StepConfig cfg;
  cfg.dt = 0.01;
  cfg.n_steps = 5;
  const auto traj = tqs::evolve(tqs::initial_coefficients(2), q.ov, cfg);
  const auto f = tqs::trajectory_fidelity(traj, q.basis, q.psi, q.h);
  EXPECT_NEAR(f[0], 1.0, 1e-14);
}

TEST(TrajectoryFidelity, SmallBasisDegrades) {
  const auto h = tqs::models::xx_chain4();
  const auto basis = tqs::build_cumulative_moments(h, 1);
  const tqs::StateVector psi = tqs::prepare(tqs::random_layers(4, 5, 1));
  const auto ov = tqs::compute_overlaps(basis, h, psi, tqs::MeasurementMode::exact(), false);
  tqs::StepConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_steps = 3000;
  const auto f = tqs::trajectory_fidelity(tqs::evolve(tqs::initial_coefficients(ov.dimension()), ov, cfg), basis, psi, h);
  EXPECT_LT(*std::min_element(f.begin(), f.end()), 0.99);
}

}  // namespace
