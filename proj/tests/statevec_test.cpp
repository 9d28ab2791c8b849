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

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "tqs/statevec.hpp"

namespace {

using tqs::PauliString;
using tqs::StateVector;

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
  return StateVector(n, oracle::random_state(n, rng));
}

TEST(StateVector, BasisAndValidation) {
  const StateVector zero(3);
  EXPECT_EQ(zero[0], tqs::cplx(1));
  const StateVector s = StateVector::basis_state("100");
  EXPECT_EQ(s[1], tqs::cplx(1));  // qubit 0 is the low bit
  EXPECT_THROW(StateVector(1, Eigen::Vector2cd(1, 1)), tqs::Error);
  EXPECT_THROW(StateVector(2, Eigen::Vector2cd(1, 0)), tqs::Error);
  EXPECT_THROW(StateVector::basis_state("012"), tqs::Error);
}

TEST(Prepare, ZeroLayersGivesZeroState) {
  const StateVector s = tqs::prepare(tqs::random_layers(3, 0, 1));
  EXPECT_EQ(s.amplitudes(), StateVector(3).amplitudes());
}

TEST(Prepare, RxPiFlipsQubit) {
  tqs::CircuitSpec spec;
  spec.n_qubits = 1;
  spec.layers.push_back({{{std::numbers::pi, 0.0, 0.0}}, {}, tqs::Entangler::cz});
  const StateVector s = tqs::prepare(spec);
  EXPECT_NEAR(std::norm(s[1]), 1.0, 1e-10);
}

TEST(Prepare, RandomLayersDeterministicAndNormalized) {
  for (auto kind : {tqs::Entangler::cz, tqs::Entangler::cnot}) {
    const StateVector a = tqs::prepare(tqs::random_layers(2, 5, 42, kind));
    const StateVector b = tqs::prepare(tqs::random_layers(2, 5, 42, kind));
    EXPECT_NEAR(a.amplitudes().norm(), 1.0, 1e-10);
    EXPECT_EQ(a.amplitudes(), b.amplitudes());
    const StateVector c = tqs::prepare(tqs::random_layers(2, 5, 43, kind));
    EXPECT_GT((a.amplitudes() - c.amplitudes()).norm(), 1e-3);
  }
}

TEST(Prepare, MatchesDenseGateProduct) {
  const tqs::CircuitSpec spec = tqs::random_layers(3, 2, 9, tqs::Entangler::cnot);
  oracle::Vec v = oracle::Vec::Zero(8);
  v(0) = 1;
  const tqs::cplx i(0, 1);
  auto rot = [&](char axis, double t) {
    return (std::cos(t / 2) * oracle::Mat::Identity(2, 2) - i * std::sin(t / 2) * oracle::single(axis)).eval();
  };
  auto on_qubit = [&](const oracle::Mat& u, std::size_t q) {
    oracle::Mat m = oracle::Mat::Identity(1, 1);
    for (std::size_t k = 0; k < 3; ++k) m = Eigen::kroneckerProduct(k == q ? u : oracle::Mat::Identity(2, 2), m).eval();
    return m;
  };
  for (const auto& layer : spec.layers) {
    for (std::size_t q = 0; q < 3; ++q) {
      v = on_qubit(rot('X', layer.rotations[q][0]), q) * v;
      v = on_qubit(rot('Y', layer.rotations[q][1]), q) * v;
      v = on_qubit(rot('Z', layer.rotations[q][2]), q) * v;
    }
    for (const auto& [c, t] : layer.entanglers) {
      oracle::Mat p0 = oracle::Mat::Zero(2, 2), p1 = oracle::Mat::Zero(2, 2);
      p0(0, 0) = 1;
      p1(1, 1) = 1;
      v = (on_qubit(p0, c) + on_qubit(p1, c) * on_qubit(oracle::single('X'), t)) * v;
    }
  }
  EXPECT_LT((tqs::prepare(spec).amplitudes() - v).norm(), 1e-12);
}

TEST(ApplyPauli, Basics) {
  std::mt19937_64 rng(1);
  const StateVector psi = random_state(2, rng);
  EXPECT_EQ(tqs::apply_pauli(PauliString::identity(2), psi).amplitudes(), psi.amplitudes());
  const StateVector one = tqs::apply_pauli(PauliString::from_dense("X"), StateVector(1));
  EXPECT_EQ(one[1], tqs::cplx(1));
}

TEST(ApplyPauli, MatchesDense) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const oracle::Vec psi = oracle::random_state(3, rng);
    const PauliString p(3, rng() % 8, rng() % 8, static_cast<int>(rng() % 4));
    EXPECT_LT((tqs::apply_pauli(p, psi) - oracle::dense(p) * psi).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Expectation, Basics) {
  EXPECT_EQ(tqs::expectation(PauliString::from_dense("Z"), StateVector(1)), 1.0);
  EXPECT_EQ(tqs::expectation(PauliString::from_dense("X"), StateVector(1)), 0.0);
  EXPECT_THROW(tqs::expectation(PauliString(1, 1, 0, 1), StateVector(1)), tqs::Error);
}

TEST(Expectation, MatchesDenseQuadraticForm) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Vec psi = oracle::random_state(4, rng);
    const PauliString p = trial == 0 ? PauliString::from_sparse(4, "X0 Z2") : PauliString(4, rng() % 16, rng() % 16);
    const double expect = psi.dot(oracle::dense(p) * psi).real();
    EXPECT_NEAR(tqs::expectation(p, StateVector(4, psi)), expect, 1e-12);
  }
}

TEST(SampleExpectation, DeterministicOutcome) {
  tqs::Rng rng(1);
  for (std::size_t shots : {1u, 7u, 100u}) {
    EXPECT_EQ(tqs::sample_expectation(PauliString::from_dense("Z"), StateVector(1), shots, rng), 1.0);
  }
  EXPECT_THROW(tqs::sample_expectation(PauliString::from_dense("Z"), StateVector(1), 0, rng), tqs::Error);
}

TEST(SampleExpectation, XOnZeroStaysNearZero) {
  const double bound = 5.0 / std::sqrt(8192.0);
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    tqs::Rng rng(seed);
    if (std::abs(tqs::sample_expectation(PauliString::from_dense("X"), StateVector(1), 8192, rng)) > bound) {
      ++outside;
    }
  }
  EXPECT_EQ(outside, 0);
}

TEST(SampleExpectation, StdScalesAsInverseSqrtShots) {
  std::mt19937_64 g(8);
  const StateVector psi = random_state(2, g);
  const PauliString p = PauliString::from_dense("XY");
  const double exact = tqs::expectation(p, psi);
  std::vector<double> shots{256, 1024, 4096}, stds;
  for (double s : shots) {
    double acc = 0;
    const int seeds = 400;
    for (int seed = 0; seed < seeds; ++seed) {
      tqs::Rng rng(static_cast<std::uint64_t>(seed) * 7919 + static_cast<std::uint64_t>(s));
      const double e = tqs::sample_expectation(p, psi, static_cast<std::size_t>(s), rng) - exact;
      acc += e * e;
    }
    stds.push_back(std::sqrt(acc / seeds));
  }
  const double slope = (std::log(stds[2]) - std::log(stds[0])) / (std::log(shots[2]) - std::log(shots[0]));
  EXPECT_NEAR(slope, -0.5, 0.1);
}

TEST(Fidelity, Basics) {
  std::mt19937_64 rng(6);
  const StateVector psi = random_state(3, rng);
  EXPECT_NEAR(tqs::fidelity(psi, psi), 1.0, 1e-14);
  EXPECT_EQ(tqs::fidelity(StateVector::basis_state("0"), StateVector::basis_state("1")), 0.0);
  const StateVector rotated(3, psi.amplitudes() * std::polar(1.0, 0.731));
  EXPECT_NEAR(tqs::fidelity(psi, rotated), 1.0, 1e-14);
}

}  // namespace
