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

#include "dense_oracle.hpp"
#include "tqs/pauli.hpp"

namespace {

using tqs::Hamiltonian;
using tqs::PauliString;

TEST(PauliString, DenseRoundTrip) {
  const PauliString p = PauliString::from_dense("XZIY");
  EXPECT_EQ(p.to_dense(), "XZIY");
  EXPECT_EQ(p.to_sparse(), "X0 Z1 Y3");
  EXPECT_EQ(PauliString::from_sparse(4, "X0 Z1 Y3"), p);
  EXPECT_EQ(PauliString::from_dense("-iXY").phase_exp(), 3);
  EXPECT_EQ(PauliString::from_dense("+iZ").phase_exp(), 1);
  EXPECT_EQ(PauliString::from_sparse(3, "I"), PauliString::identity(3));
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_THROW(PauliString::from_dense("XQ"), tqs::Error);
  EXPECT_THROW(PauliString::from_sparse(2, "X2"), tqs::Error);
  EXPECT_THROW(PauliString::from_sparse(2, "X0 Z0"), tqs::Error);
  EXPECT_THROW(PauliString(2, 0b100, 0), tqs::Error);
  EXPECT_THROW(PauliString(0), tqs::Error);
}

TEST(PauliProduct, SingleQubitTable) {
  const auto X = PauliString::from_dense("X"), Y = PauliString::from_dense("Y"),
             Z = PauliString::from_dense("Z");
  EXPECT_EQ(X * X, PauliString::identity(1));
  const PauliString xz = X * Z;
  EXPECT_EQ(xz.canonical(), Y);
  EXPECT_EQ(xz.phase_exp(), 3);  // X Z = -i Y
  EXPECT_EQ((Z * X).phase_exp(), 1);
  EXPECT_EQ((X * Y).canonical(), Z);
  EXPECT_EQ((X * Y).phase_exp(), 1);
}

TEST(PauliProduct, TwoQubitExample) {
  const PauliString r = PauliString::from_dense("XI") * PauliString::from_dense("ZZ");
  EXPECT_EQ(r.canonical(), PauliString::from_dense("YZ"));
  EXPECT_EQ(r.phase(), tqs::cplx(0, -1));
  EXPECT_TRUE(oracle::equal_up_to_phase(oracle::dense(r), oracle::dense("XI") * oracle::dense("ZZ")));
  EXPECT_LT((oracle::dense(r) - oracle::dense("XI") * oracle::dense("ZZ")).norm(), 1e-14);
}

TEST(PauliProduct, MismatchedWidthThrows) {
  EXPECT_THROW(PauliString::from_dense("X") * PauliString::from_dense("XX"), tqs::Error);
}

TEST(PauliProduct, MatchesDenseOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const auto a = PauliString(n, rng() % (1u << n), rng() % (1u << n), static_cast<int>(rng() % 4));
    const auto b = PauliString(n, rng() % (1u << n), rng() % (1u << n), static_cast<int>(rng() % 4));
    const oracle::Mat expect = oracle::dense(a) * oracle::dense(b);
    EXPECT_LT((oracle::dense(a * b) - expect).cwiseAbs().maxCoeff(), 1e-15);
    const oracle::Mat comm = oracle::dense(a) * oracle::dense(b) - oracle::dense(b) * oracle::dense(a);
    EXPECT_EQ(tqs::commutes(a, b), comm.norm() < 1e-12);
  }
}

TEST(PauliString, LibraryDenseMatchesKronecker) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const std::string s = oracle::random_letters(n, rng);
    EXPECT_LT((tqs::dense_matrix(PauliString::from_dense(s)) - oracle::dense(s)).norm(), 1e-15) << s;
  }
  EXPECT_TRUE(tqs::dense_matrix(PauliString::identity(1)).isApprox(Eigen::Matrix2cd::Identity()));
  oracle::Mat z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_TRUE(tqs::dense_matrix(PauliString::from_dense("Z")).isApprox(z));
}

TEST(Canonicalize, Examples) {
  const auto y = tqs::canonicalize(PauliString::from_dense("Y"));
  EXPECT_EQ(y.rep, PauliString::from_dense("Y"));
  EXPECT_EQ(y.phase, tqs::cplx(1));
  const auto xz = tqs::canonicalize(PauliString::from_dense("X") * PauliString::from_dense("Z"));
  EXPECT_EQ(xz.rep, PauliString::from_dense("Y"));
  EXPECT_EQ(xz.phase, tqs::cplx(0, -1));
  const auto minus_i = tqs::canonicalize(PauliString(1, 0, 0, 2));
  EXPECT_TRUE(minus_i.rep.is_identity());
  EXPECT_EQ(minus_i.phase, tqs::cplx(-1));
}

TEST(Hamiltonian, ParseAndValidate) {
  const Hamiltonian h = Hamiltonian::parse("# comment\n0.5 X0 X1\n-1e-1 Z2\n");
  EXPECT_EQ(h.n_qubits(), 3u);
  EXPECT_EQ(h.size(), 2u);
  EXPECT_DOUBLE_EQ(h.coefficient_l1(), 0.6);
  EXPECT_EQ(Hamiltonian::parse("# qubits 5\n1 Z0\n").n_qubits(), 5u);
  EXPECT_THROW(Hamiltonian::parse("0.5 X0\n0.5 X0\n"), tqs::Error);
  EXPECT_THROW(Hamiltonian::parse("1.0 I\n"), tqs::Error);
  EXPECT_THROW(Hamiltonian::parse("abc X0\n"), tqs::Error);
  try {
    Hamiltonian::parse("1 X0\n1 Q1\n");
    FAIL();
  } catch (const tqs::Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Hamiltonian, TextRoundTrip) {
  std::mt19937_64 rng(5);
  const Hamiltonian h = oracle::random_hamiltonian(3, 5, rng);
  const Hamiltonian back = Hamiltonian::parse(h.to_text());
  ASSERT_EQ(back.size(), h.size());
  EXPECT_EQ(back.n_qubits(), h.n_qubits());
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_EQ(back.terms()[i].coefficient, h.terms()[i].coefficient);
    EXPECT_EQ(back.terms()[i].pauli, h.terms()[i].pauli);
  }
}

TEST(HamiltonianSquare, SingleZ) {
  const auto sq = tqs::hamiltonian_square_terms(Hamiltonian::parse("1.0 Z0\n"));
  ASSERT_EQ(sq.size(), 1u);
  EXPECT_TRUE(sq[0].pauli.is_identity());
  EXPECT_NEAR(std::abs(sq[0].coefficient - 1.0), 0.0, 1e-15);
}

TEST(HamiltonianSquare, CrossTermsCancel) {
  const double a = 0.3, b = -1.7;
  const Hamiltonian h(1, {{a, PauliString::from_dense("X")}, {b, PauliString::from_dense("Z")}});
  const auto sq = tqs::hamiltonian_square_terms(h);
  ASSERT_EQ(sq.size(), 1u);
  EXPECT_TRUE(sq[0].pauli.is_identity());
  EXPECT_NEAR(sq[0].coefficient.real(), a * a + b * b, 1e-14);
}

TEST(HamiltonianSquare, MatchesDenseSquare) {
  std::mt19937_64 rng(17);
  std::vector<Hamiltonian> cases{tqs::Hamiltonian::parse("0.5 X0 X1\n0.5 Y0 Y1\n0.5 Z0 Z1\n")};
  for (int i = 0; i < 10; ++i) cases.push_back(oracle::random_hamiltonian(1 + rng() % 3, 1 + rng() % 6, rng));
  for (const auto& h : cases) {
    const oracle::Mat hd = oracle::dense(h);
    const oracle::Mat sq = tqs::dense_matrix(h.n_qubits(), tqs::hamiltonian_square_terms(h));
    EXPECT_LT((sq - hd * hd).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DenseMatrix, XxChainIsHermitianTraceless) {
  const oracle::Mat m = tqs::dense_matrix(Hamiltonian::parse("0.5 X0 X1\n0.5 X1 X2\n0.5 X2 X3\n"));
  EXPECT_EQ(m.rows(), 16);
  EXPECT_LT((m - m.adjoint()).norm(), 1e-15);
  EXPECT_NEAR(std::abs(m.trace()), 0.0, 1e-15);
}

TEST(DenseMatrix, RefusesLargeRegisters) {
  EXPECT_THROW(tqs::dense_matrix(PauliString::identity(tqs::kOracleQubitLimit + 1)), tqs::Error);
}

}  // namespace
