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

#include <string>
#include <vector>

#include "tqs/pauli.hpp"

namespace tqs::models {

// Built-in benchmark Hamiltonians. Qubits are numbered from 0.

/// 1/2 (X0 X1 + Y0 Y1 + Z0 Z1).
inline Hamiltonian heisenberg2() {
  return Hamiltonian::parse("0.5 X0 X1\n0.5 Y0 Y1\n0.5 Z0 Z1\n");
}

/// 1/2 (X0 X1 + X1 X2 + X2 X3).
inline Hamiltonian xx_chain4() {
  return Hamiltonian::parse("0.5 X0 X1\n0.5 X1 X2\n0.5 X2 X3\n");
}

/// Periodic transverse-field Ising ring: sum_i 1/2 Z_i Z_{i+1 mod n} + sum_i X_i.
/// For n = 2 both bonds join the same pair, which gives 1.0 Z0 Z1.
inline Hamiltonian tfi_ring(std::size_t n) {
  if (n < 2) throw Error("tfi_ring: need at least two qubits");
  std::vector<PauliTerm> terms;
  if (n == 2) {
    terms.push_back({1.0, PauliString::from_sparse(2, "Z0 Z1")});
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      const std::uint64_t z = (1ULL << i) | (1ULL << j);
      terms.push_back({0.5, PauliString(n, 0, z)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) terms.push_back({1.0, PauliString::single(n, i, 'X')});
  return Hamiltonian(n, std::move(terms));
}

inline Hamiltonian tfi8() { return tfi_ring(8); }
inline Hamiltonian tfi2() { return tfi_ring(2); }

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"heisenberg2", "xx-chain4", "tfi8", "tfi2"};
  return names;
}

inline bool is_builtin(std::string_view name) {
  for (const auto& n : builtin_names()) {
    if (n == name) return true;
  }
  return false;
}

inline Hamiltonian builtin(std::string_view name) {
  if (name == "heisenberg2") return heisenberg2();
  if (name == "xx-chain4") return xx_chain4();
  if (name == "tfi8") return tfi8();
  if (name == "tfi2") return tfi2();
  throw Error("unknown built-in Hamiltonian '" + std::string(name) + "'");
}

/// How a built-in reads its source definition, recorded in run manifests.
inline std::string builtin_note(std::string_view name) {
  if (name == "tfi8") return "periodic 8-qubit ring: 8 ZZ bonds (0.5) + 8 X fields (1.0)";
  if (name == "tfi2") return "periodic 2-qubit ring: both bonds merge into 1.0 Z0 Z1, plus X0, X1";
  return "as defined";
}

}  // namespace tqs::models
