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

#include <random>

#include "test_cases.hpp"
#include "tqs/models.hpp"
#include "tqs/oracle.hpp"
#include "tqs/qas.hpp"

namespace {

TEST(QasRhs, ZeroHamiltonianMatrix) {
  testing_cases::Qubit q;
  q.ov.D.setZero();
  EXPECT_EQ(tqs::qas_rhs(tqs::initial_coefficients(2), q.ov, 1e-10), Eigen::VectorXcd::Zero(2));
}

TEST(QasRhs, SingleQubitSwap) {
  const testing_cases::Qubit q;
  tqs::Coefficients a(2);
  a << tqs::cplx(0.3, 0.1), tqs::cplx(-0.2, 0.5);
  tqs::Coefficients expect(2);
  expect << tqs::cplx(0, -1) * a(1), tqs::cplx(0, -1) * a(0);
  EXPECT_LT((tqs::qas_rhs(a, q.ov, 1e-10) - expect).norm(), 1e-15);
}

TEST(Integrate, ZeroSteps) {
  const testing_cases::Qubit q;
  const auto t = tqs::integrate(tqs::initial_coefficients(2), q.ov, {0.1, 0, tqs::Integrator::rk4});
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.method, "qas");
}

TEST(Integrate, ClosedBasisMatchesExactEvolution) {
  const auto h = tqs::models::xx_chain4();
  const auto basis = tqs::build_cumulative_moments(h, 3);
  const tqs::StateVector psi = tqs::prepare(tqs::random_layers(4, 5, 2));
  const auto ov = tqs::compute_overlaps(basis, h, psi, tqs::MeasurementMode::exact(), false);
  const auto t = tqs::integrate(tqs::initial_coefficients(ov.dimension()), ov, {1e-2, 300, tqs::Integrator::rk4});
  for (double f : tqs::trajectory_fidelity(t, basis, psi, h)) EXPECT_GE(f, 1 - 1e-8);
  for (const auto& a : t.alphas) EXPECT_NEAR(tqs::e_norm(a, ov.E), 1.0, 1e-12);
}

TEST(Integrate, EulerIsFirstOrderRk4IsFourthOrder) {
  std::mt19937_64 rng(5);
  const testing_cases::Random c(rng, 2, 3, 4);
  const tqs::Coefficients a0 = tqs::initial_coefficients(c.ov.dimension());
  const double T = 0.5;
  auto err = [&](tqs::Integrator m, std::size_t n) {
    const auto t = tqs::integrate(a0, c.ov, {T / static_cast<double>(n), n, m, 1e-10, false});
    const tqs::Coefficients exact = (tqs::qas_generator(c.ov, 1e-10) * T).exp() * a0;
    return (t.alphas.back() - exact).norm();
  };
  EXPECT_NEAR(std::log2(err(tqs::Integrator::euler, 100) / err(tqs::Integrator::euler, 200)), 1.0, 0.1);
  EXPECT_NEAR(std::log2(err(tqs::Integrator::rk4, 10) / err(tqs::Integrator::rk4, 20)), 4.0, 0.3);
}

TEST(Integrate, RejectsUnnormalizedStart) {
  const testing_cases::Qubit q;
  tqs::Coefficients a(2);
  a << 1.0, 1.0;
  EXPECT_THROW(tqs::integrate(a, q.ov, {0.1, 1, tqs::Integrator::euler}), tqs::Error);
}

}  // namespace
