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

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tqs/pauli.hpp"

namespace tqs {

/**
 * Cumulative moment basis: the states R_i |psi> where each R_i is a
 * canonical product of at most `order` Hamiltonian term strings.
 *
 * reps[0] is the identity. Entries are grouped by the level at which they
 * first appear and sorted by (z, x) within a level. provenance[i] lists the
 * term indices of the word that produced reps[i], leftmost factor first
 * (P_{i_k} ... P_{i_1}).
 */
struct MomentBasis {
  std::size_t n_qubits = 1;
  std::size_t order = 0;
  std::vector<PauliString> reps;
  std::vector<std::vector<std::size_t>> provenance;
  std::vector<std::size_t> levels;

  std::size_t size() const { return reps.size(); }

  /// Short identifier: qubits, order, size and a hash of the representatives.
  std::string id() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xFF;
        h *= 1099511628211ULL;
      }
    };
    for (const auto& r : reps) {
      mix(r.x_mask());
      mix(r.z_mask());
    }
    std::ostringstream s;
    s << "n" << n_qubits << "-k" << order << "-m" << reps.size() << "-" << std::hex
      << std::setw(16) << std::setfill('0') << h;
    return s.str();
  }
};

/// Breadth-first construction of the order-k cumulative basis by left-multiplying with the term
/// strings of h, deduplicated up to global phase.
inline MomentBasis build_cumulative_moments(const Hamiltonian& h, std::size_t k) {
  MomentBasis basis;
  basis.n_qubits = h.n_qubits();
  basis.order = k;
  basis.reps.push_back(PauliString::identity(h.n_qubits()));
  basis.provenance.emplace_back();
  basis.levels.push_back(0);

  std::set<std::pair<std::uint64_t, std::uint64_t>> seen{basis.reps[0].key()};
  std::size_t frontier_begin = 0, frontier_end = 1;
  for (std::size_t level = 1; level <= k; ++level) {
    struct Found {
      PauliString rep;
      std::vector<std::size_t> word;
    };
    std::vector<Found> found;
    for (std::size_t r = frontier_begin; r < frontier_end; ++r) {
      for (std::size_t t = 0; t < h.size(); ++t) {
        const PauliString prod = (h.terms()[t].pauli * basis.reps[r]).canonical();
        if (!seen.insert(prod.key()).second) continue;
        std::vector<std::size_t> word{t};
        word.insert(word.end(), basis.provenance[r].begin(), basis.provenance[r].end());
        found.push_back({prod, std::move(word)});
      }
    }
    if (found.empty()) break;  // closed: later levels add nothing either
    std::stable_sort(found.begin(), found.end(),
                     [](const Found& a, const Found& b) { return a.rep.key() < b.rep.key(); });
    frontier_begin = basis.reps.size();
    for (auto& f : found) {
      basis.reps.push_back(f.rep);
      basis.provenance.push_back(std::move(f.word));
      basis.levels.push_back(level);
    }
    frontier_end = basis.reps.size();
  }
  return basis;
}

/// True iff every canonical(P * R) for a term string P and rep R is a rep.
inline bool closure_reached(const MomentBasis& basis, const Hamiltonian& h) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> have;
  for (const auto& r : basis.reps) have.insert(r.key());
  for (const auto& r : basis.reps) {
    for (const auto& t : h.terms()) {
      if (!have.count((t.pauli * r).canonical().key())) return false;
    }
  }
  return true;
}

/// Product of the provenance word, for checking reps against their history.
inline PauliString word_product(const MomentBasis& basis, const Hamiltonian& h, std::size_t i) {
  PauliString p = PauliString::identity(h.n_qubits());
  for (auto it = basis.provenance[i].rbegin(); it != basis.provenance[i].rend(); ++it) {
    p = h.terms().at(*it).pauli * p;
  }
  return p;
}

// Dump format, one line per rep:   level <k>: <sparse-pauli> {i_k,...,i_1}
// preceded by a "# basis n=<n> order=<k>" header.

inline void write_basis(std::ostream& out, const MomentBasis& basis) {
  out << "# basis n=" << basis.n_qubits << " order=" << basis.order << " size=" << basis.size()
      << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out << "level " << basis.levels[i] << ": " << basis.reps[i].to_sparse() << " {";
    for (std::size_t j = 0; j < basis.provenance[i].size(); ++j) {
      out << (j ? "," : "") << basis.provenance[i][j];
    }
    out << "}\n";
  }
}

inline MomentBasis read_basis(std::istream& in) {
  MomentBasis basis;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error("basis line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      std::istringstream h{std::string(s.substr(1))};
      std::string word;
      if (h >> word && word == "basis") {
        std::string kv;
        while (h >> kv) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) fail("bad header field '" + kv + "'");
          std::size_t v = 0;
          if (!parse_int(std::string_view(kv).substr(eq + 1), v)) fail("bad header value");
          const std::string key = kv.substr(0, eq);
          if (key == "n") basis.n_qubits = v;
          else if (key == "order") basis.order = v;
        }
        have_header = true;
      }
      continue;
    }
    if (!have_header) fail("missing '# basis' header");
    if (s.substr(0, 6) != "level ") fail("expected 'level <k>: ...'");
    const auto colon = s.find(':');
    const auto brace = s.rfind('{');
    if (colon == std::string_view::npos || brace == std::string_view::npos || brace < colon ||
        s.back() != '}') {
      fail("malformed basis line");
    }
    std::size_t level = 0;
    if (!parse_int(trim(s.substr(6, colon - 6)), level)) fail("bad level");
    PauliString rep;
    try {
      rep = PauliString::from_sparse(basis.n_qubits, s.substr(colon + 1, brace - colon - 1));
    } catch (const Error& e) {
      fail(e.what());
    }
    std::vector<std::size_t> word;
    std::string_view w = s.substr(brace + 1, s.size() - brace - 2);
    while (!w.empty()) {
      const auto comma = w.find(',');
      std::size_t idx = 0;
      if (!parse_int(trim(w.substr(0, comma)), idx)) fail("bad provenance word");
      word.push_back(idx);
      if (comma == std::string_view::npos) break;
      w.remove_prefix(comma + 1);
    }
    basis.reps.push_back(rep);
    basis.provenance.push_back(std::move(word));
    basis.levels.push_back(level);
  }
  if (basis.reps.empty() || !basis.reps[0].is_identity()) {
    throw Error("basis: first representative must be the identity");
  }
  return basis;
}

}  // namespace tqs
