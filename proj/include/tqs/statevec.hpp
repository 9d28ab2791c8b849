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

#include <array>
#include <bit>
#include <numbers>
#include <ostream>
#include <utility>
#include <vector>

#include "tqs/common.hpp"
#include "tqs/pauli.hpp"
#include "tqs/rng.hpp"

namespace tqs {

/// Dense n-qubit pure state. Qubit 0 is the least significant bit of the
/// basis-state index. Operations return new states.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;
  static constexpr std::size_t kMaxQubits = 26;

  explicit StateVector(std::size_t n_qubits) : n_(checked(n_qubits)) {
    amps_ = Eigen::VectorXcd::Zero(dim_of(n_));
    amps_(0) = 1.0;
  }

  /// Throws unless amplitudes has 2^n entries and unit norm.
  StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes)
      : n_(checked(n_qubits)), amps_(std::move(amplitudes)) {
    if (amps_.size() != dim_of(n_)) throw Error("StateVector: amplitude count is not 2^n");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance) {
      throw Error("StateVector: amplitudes are not normalized");
    }
  }

  static StateVector normalized(std::size_t n_qubits, Eigen::VectorXcd amplitudes) {
    const double nrm = amplitudes.norm();
    if (!(nrm > 0)) throw Error("StateVector: cannot normalize the zero vector");
    return StateVector(n_qubits, amplitudes / nrm);
  }

  /// Computational basis state from a bit string, qubit 0 leftmost ("0101").
  static StateVector basis_state(std::string_view bits) {
    bits = trim(bits);
    std::uint64_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] == '1') index |= 1ULL << q;
      else if (bits[q] != '0') throw Error("StateVector: basis string must be 0/1");
    }
    StateVector s(bits.size());
    s.amps_(0) = 0.0;
    s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  std::size_t n_qubits() const { return n_; }
  Eigen::Index dimension() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cplx operator[](Eigen::Index i) const { return amps_(i); }

  /// One "index,re,im" line per amplitude, with a header row.
  void write_csv(std::ostream& out) const {
    out << "index,re,im\n";
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      out << i << ',' << format_double(amps_(i).real()) << ',' << format_double(amps_(i).imag())
          << '\n';
    }
  }

 private:
  static std::size_t checked(std::size_t n) {
    if (n == 0 || n > kMaxQubits) throw Error("StateVector: qubit count out of range");
    return n;
  }
  static Eigen::Index dim_of(std::size_t n) { return static_cast<Eigen::Index>(1ULL << n); }

  std::size_t n_;
  Eigen::VectorXcd amps_;
};

/// dense(p) * amps without the normalization check (works on any vector).
inline Eigen::VectorXcd apply_pauli(const PauliString& p, const Eigen::VectorXcd& amps) {
  if (amps.size() != static_cast<Eigen::Index>(1ULL << p.n_qubits())) {
    throw Error("apply_pauli: dimension mismatch");
  }
  const cplx base = i_pow(p.phase_exp() + std::popcount(p.x_mask() & p.z_mask()));
  Eigen::VectorXcd out(amps.size());
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(amps.size()); ++j) {
    const cplx f = (std::popcount(z & j) & 1) ? -base : base;
    out(static_cast<Eigen::Index>(j ^ x)) = f * amps(static_cast<Eigen::Index>(j));
  }
  return out;
}

inline StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
  if (p.n_qubits() != psi.n_qubits()) throw Error("apply_pauli: qubit count mismatch");
  return StateVector(psi.n_qubits(), apply_pauli(p, psi.amplitudes()));
}

/// <psi| p |psi> for Hermitian (canonical) p.
inline double expectation(const PauliString& p, const StateVector& psi) {
  if (!p.is_canonical()) {
    throw Error("expectation: Pauli string " + p.to_dense() + " is not Hermitian (non-zero phase)");
  }
  if (p.n_qubits() != psi.n_qubits()) throw Error("expectation: qubit count mismatch");
  const auto& a = psi.amplitudes();
  const cplx base = i_pow(std::popcount(p.x_mask() & p.z_mask()));
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  cplx acc = 0.0;
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(a.size()); ++j) {
    const cplx term = std::conj(a(static_cast<Eigen::Index>(j ^ x))) * a(static_cast<Eigen::Index>(j));
    acc += (std::popcount(z & j) & 1) ? -term : term;
  }
  return (base * acc).real();
}

/**
 * Shot-sampled estimate of <p>: each shot yields +1 with probability
 * (1 + <p>) / 2, and the estimate is 2k/shots - 1 for k successes.
 */
inline double sample_expectation(const PauliString& p, const StateVector& psi, std::size_t shots,
                                 Rng& rng) {
  if (shots == 0) throw Error("sample_expectation: shots must be positive");
  const double prob = std::clamp((1.0 + expectation(p, psi)) / 2.0, 0.0, 1.0);
  std::size_t k = 0;
  for (std::size_t s = 0; s < shots; ++s) k += rng.uniform() < prob;
  return 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
}

inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw Error("inner: qubit count mismatch");
  return a.amplitudes().dot(b.amplitudes());  // conjugates the left argument
}

inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

// ---------------------------------------------------------------------------
// Initial-state circuits: layers of Rx, Ry, Rz on every qubit followed by a
// list of two-qubit entanglers.

enum class Entangler { cz, cnot };

inline const char* to_string(Entangler e) { return e == Entangler::cz ? "cz" : "cnot"; }

inline Entangler parse_entangler(std::string_view s) {
  if (s == "cz" || s == "CZ") return Entangler::cz;
  if (s == "cnot" || s == "CNOT" || s == "cx") return Entangler::cnot;
  throw Error("unknown entangler '" + std::string(s) + "'");
}

struct CircuitLayer {
  /// (theta_x, theta_y, theta_z) per qubit, applied as Rx then Ry then Rz.
  std::vector<std::array<double, 3>> rotations;
  /// (control, target) pairs applied in order after the rotations.
  std::vector<std::pair<std::size_t, std::size_t>> entanglers;
  Entangler kind = Entangler::cz;
};

struct CircuitSpec {
  std::size_t n_qubits = 1;
  std::vector<CircuitLayer> layers;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_qubits == 0 || n_qubits > StateVector::kMaxQubits) throw Error("circuit: bad qubit count");
    for (const auto& l : layers) {
      if (l.rotations.size() != n_qubits) throw Error("circuit: layer needs one rotation triple per qubit");
      for (const auto& [c, t] : l.entanglers) {
        if (c == t) throw Error("circuit: entangler control equals target");
        if (c >= n_qubits || t >= n_qubits) throw Error("circuit: entangler index out of range");
      }
    }
  }
};

/// n_layers layers with angles uniform in [0, 2pi) drawn from Rng(seed), in
/// layer-major, qubit-major, (x, y, z) order, and a nearest-neighbour chain of
/// entanglers (0,1), (1,2), ...
inline CircuitSpec random_layers(std::size_t n_qubits, std::size_t n_layers, std::uint64_t seed,
                                 Entangler kind = Entangler::cz) {
  CircuitSpec spec;
  spec.n_qubits = n_qubits;
  spec.seed = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l < n_layers; ++l) {
    CircuitLayer layer;
    layer.kind = kind;
    for (std::size_t q = 0; q < n_qubits; ++q) {
      std::array<double, 3> th{};
      for (double& a : th) a = 2.0 * std::numbers::pi * rng.uniform();
      layer.rotations.push_back(th);
    }
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) layer.entanglers.emplace_back(q, q + 1);
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

namespace detail {

inline void apply_1q(Eigen::VectorXcd& v, std::size_t q, const Eigen::Matrix2cd& u) {
  const std::uint64_t bit = 1ULL << q;
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(v.size()); ++j) {
    if (j & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(j), i1 = static_cast<Eigen::Index>(j | bit);
    const cplx a0 = v(i0), a1 = v(i1);
    v(i0) = u(0, 0) * a0 + u(0, 1) * a1;
    v(i1) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

inline Eigen::Matrix2cd rx(double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  Eigen::Matrix2cd m;
  m << c, cplx(0, -s), cplx(0, -s), c;
  return m;
}

inline Eigen::Matrix2cd ry(double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

inline Eigen::Matrix2cd rz(double t) {
  Eigen::Matrix2cd m;
  m << std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2);
  return m;
}

}  // namespace detail

inline StateVector prepare(const CircuitSpec& spec) {
  spec.validate();
  StateVector zero(spec.n_qubits);
  Eigen::VectorXcd v = zero.amplitudes();
  for (const auto& layer : spec.layers) {
    for (std::size_t q = 0; q < spec.n_qubits; ++q) {
      const auto& [tx, ty, tz] = layer.rotations[q];
      detail::apply_1q(v, q, detail::rx(tx));
      detail::apply_1q(v, q, detail::ry(ty));
      detail::apply_1q(v, q, detail::rz(tz));
    }
    for (const auto& [c, t] : layer.entanglers) {
      const std::uint64_t cb = 1ULL << c, tb = 1ULL << t;
      for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(v.size()); ++j) {
        if (!(j & cb)) continue;
        if (layer.kind == Entangler::cz) {
          if (j & tb) v(static_cast<Eigen::Index>(j)) = -v(static_cast<Eigen::Index>(j));
        } else if (!(j & tb)) {
          std::swap(v(static_cast<Eigen::Index>(j)), v(static_cast<Eigen::Index>(j | tb)));
        }
      }
    }
  }
  return StateVector::normalized(spec.n_qubits, std::move(v));
}

}  // namespace tqs
