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
#include <bit>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tqs/common.hpp"

namespace tqs {

/**
 * An n-qubit Pauli operator in symplectic form.
 *
 * The operator is i^phase_exp times the tensor product of one factor per
 * qubit, where qubit q carries
 *
 *   I if x_q = 0, z_q = 0      X if x_q = 1, z_q = 0
 *   Z if x_q = 0, z_q = 1      Y if x_q = 1, z_q = 1
 *
 * with Y = i X Z. Hence the whole string equals
 * i^(phase_exp + |x & z|) X^x Z^z, and products follow from
 * Z^a X^b = (-1)^|a & b| X^b Z^a.
 *
 * Qubit 0 is the least significant bit of both masks.
 */
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(std::size_t n_qubits, std::uint64_t x_mask = 0,
                       std::uint64_t z_mask = 0, int phase_exp = 0)
      : n_(n_qubits), x_(x_mask), z_(z_mask), phase_(((phase_exp % 4) + 4) % 4) {
    if (n_ == 0 || n_ > kMaxQubits) {
      throw Error("PauliString: qubit count must be in [1, 64], got " +
                  std::to_string(n_));
    }
    const std::uint64_t used = n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
    if ((x_ & ~used) || (z_ & ~used)) {
      throw Error("PauliString: mask has bits beyond qubit " + std::to_string(n_ - 1));
    }
  }

  static PauliString identity(std::size_t n_qubits) { return PauliString(n_qubits); }

  /// Single-qubit operator `op` in {I, X, Y, Z} on qubit q.
  static PauliString single(std::size_t n_qubits, std::size_t q, char op) {
    if (q >= n_qubits) throw Error("PauliString: qubit index out of range");
    const std::uint64_t bit = 1ULL << q;
    switch (op) {
      case 'I': return PauliString(n_qubits);
      case 'X': return PauliString(n_qubits, bit, 0);
      case 'Y': return PauliString(n_qubits, bit, bit);
      case 'Z': return PauliString(n_qubits, 0, bit);
      default: throw Error(std::string("PauliString: unknown operator '") + op + "'");
    }
  }

  /// Parses the dense form, qubit 0 leftmost: "XZIY", optionally prefixed by
  /// one of "+", "-", "+i", "-i", "i".
  static PauliString from_dense(std::string_view text) {
    text = trim(text);
    int phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      if (text.front() == '-') phase = 2;
      text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == 'i') {
      phase += 1;
      text.remove_prefix(1);
    }
    if (text.empty()) throw Error("PauliString: empty dense string");
    std::uint64_t x = 0, z = 0;
    for (std::size_t q = 0; q < text.size(); ++q) {
      const PauliString s = single(text.size(), q, text[q]);
      x |= s.x_;
      z |= s.z_;
    }
    return PauliString(text.size(), x, z, phase);
  }

  /// Parses the sparse form "X0 Z1 Y3"; "I" (or an empty string) is the identity.
  static PauliString from_sparse(std::size_t n_qubits, std::string_view text) {
    PauliString out(n_qubits);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "I") continue;
      std::size_t q = 0;
      if (tok.size() < 2 || !parse_int(std::string_view(tok).substr(1), q)) {
        throw Error("PauliString: malformed sparse factor '" + tok + "'");
      }
      if (q >= n_qubits) {
        throw Error("PauliString: factor '" + tok + "' exceeds " +
                    std::to_string(n_qubits) + " qubits");
      }
      const std::uint64_t bit = 1ULL << q;
      if ((out.x_ | out.z_) & bit) throw Error("PauliString: qubit repeated in '" + tok + "'");
      const PauliString s = single(n_qubits, q, tok[0]);
      out.x_ |= s.x_;
      out.z_ |= s.z_;
    }
    return out;
  }

  /// Largest qubit index referenced by a sparse string, or nullopt for identity.
  static std::optional<std::size_t> sparse_max_index(std::string_view text) {
    std::optional<std::size_t> best;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "I") continue;
      std::size_t q = 0;
      if (tok.size() < 2 || !parse_int(std::string_view(tok).substr(1), q)) {
        throw Error("PauliString: malformed sparse factor '" + tok + "'");
      }
      best = std::max(best.value_or(0), q);
    }
    return best;
  }

  std::size_t n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exp() const { return phase_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  bool is_canonical() const { return phase_ == 0; }
  std::size_t weight() const { return std::popcount(x_ | z_); }

  /// Global factor i^phase_exp.
  cplx phase() const { return i_pow(phase_); }

  PauliString canonical() const { return PauliString(n_, x_, z_, 0); }

  char op(std::size_t q) const {
    const bool xb = (x_ >> q) & 1, zb = (z_ >> q) & 1;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  std::string to_dense() const {
    static constexpr const char* kPrefix[] = {"", "+i", "-", "-i"};
    std::string s = kPrefix[phase_];
    for (std::size_t q = 0; q < n_; ++q) s += op(q);
    return s;
  }

  /// Sparse form of the canonical part; the phase is not representable.
  std::string to_sparse() const {
    std::string s;
    for (std::size_t q = 0; q < n_; ++q) {
      const char c = op(q);
      if (c == 'I') continue;
      if (!s.empty()) s += ' ';
      s += c;
      s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
  }

  /// Ordering key used for deterministic term lists: (z_mask, x_mask).
  std::pair<std::uint64_t, std::uint64_t> key() const { return {z_, x_}; }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::size_t n_ = 1;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Lexicographic order on (z_mask, x_mask), then phase.
struct PauliLess {
  bool operator()(const PauliString& a, const PauliString& b) const {
    if (a.key() != b.key()) return a.key() < b.key();
    return a.phase_exp() < b.phase_exp();
  }
};

/// Exact product p * q including the global phase.
inline PauliString multiply(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw Error("multiply: qubit count mismatch (" + std::to_string(p.n_qubits()) +
                " vs " + std::to_string(q.n_qubits()) + ")");
  }
  const std::uint64_t x = p.x_mask() ^ q.x_mask();
  const std::uint64_t z = p.z_mask() ^ q.z_mask();
  const int e = p.phase_exp() + q.phase_exp() +
                std::popcount(p.x_mask() & p.z_mask()) +
                std::popcount(q.x_mask() & q.z_mask()) +
                2 * std::popcount(p.z_mask() & q.x_mask()) - std::popcount(x & z);
  return PauliString(p.n_qubits(), x, z, e);
}

inline PauliString operator*(const PauliString& p, const PauliString& q) {
  return multiply(p, q);
}

inline bool commutes(const PauliString& p, const PauliString& q) {
  return (std::popcount(p.x_mask() & q.z_mask()) + std::popcount(p.z_mask() & q.x_mask())) %
             2 == 0;
}

struct CanonicalForm {
  PauliString rep;
  cplx phase;
};

/// Splits p into phase * rep with rep.phase_exp() == 0.
inline CanonicalForm canonicalize(const PauliString& p) { return {p.canonical(), p.phase()}; }

struct PauliTerm {
  double coefficient;
  PauliString pauli;
};

struct ComplexPauliTerm {
  cplx coefficient;
  PauliString pauli;
};

/**
 * Hermitian Pauli-sum Hamiltonian with real coefficients on canonical,
 * pairwise distinct strings.
 */
class Hamiltonian {
 public:
  Hamiltonian() = default;

  Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms, bool allow_identity = false)
      : n_(n_qubits), terms_(std::move(terms)) {
    if (n_ == 0 || n_ > kMaxQubits) throw Error("Hamiltonian: invalid qubit count");
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> seen;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const PauliString& p = terms_[i].pauli;
      if (p.n_qubits() != n_) throw Error("Hamiltonian: term qubit count mismatch");
      if (!p.is_canonical()) throw Error("Hamiltonian: term " + p.to_dense() + " is not canonical");
      if (p.is_identity() && !allow_identity) {
        throw Error("Hamiltonian: identity term not allowed");
      }
      if (!seen.emplace(p.key(), i).second) {
        throw Error("Hamiltonian: duplicate term " + p.to_sparse());
      }
    }
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Sum of |coefficient|, an upper bound on the operator norm.
  double coefficient_l1() const {
    double s = 0;
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
  }

  /// One term per line, "<coefficient> <sparse-pauli>", preceded by a
  /// "# qubits <n>" line that fixes the register width on re-reading.
  std::string to_text() const {
    std::string out = "# qubits " + std::to_string(n_) + "\n";
    for (const auto& t : terms_) {
      out += format_double(t.coefficient) + " " + t.pauli.to_sparse() + "\n";
    }
    return out;
  }

  /// Reads the line format written by to_text(). Lines starting with '#' are
  /// comments; "# qubits <n>" sets the width, otherwise it is one past the
  /// largest referenced qubit.
  static Hamiltonian parse(std::istream& in, bool allow_identity = false) {
    struct Raw {
      double c;
      std::string sparse;
      std::size_t line;
    };
    std::vector<Raw> raws;
    std::optional<std::size_t> width;
    std::size_t max_index = 0;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
      throw Error("hamiltonian line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view s = trim(line);
      if (s.empty()) continue;
      if (s.front() == '#') {
        std::istringstream c{std::string(s.substr(1))};
        std::string word;
        std::size_t n = 0;
        if (c >> word && word == "qubits") {
          if (!(c >> n) || n == 0 || n > kMaxQubits) fail("bad qubit count");
          width = n;
        }
        continue;
      }
      const auto sp = s.find_first_of(" \t");
      if (sp == std::string_view::npos) fail("expected '<coefficient> <pauli>'");
      double c = 0;
      if (!parse_double(s.substr(0, sp), c)) fail("bad coefficient '" + std::string(s.substr(0, sp)) + "'");
      std::string sparse(trim(s.substr(sp)));
      try {
        if (auto m = PauliString::sparse_max_index(sparse)) max_index = std::max(max_index, *m + 1);
      } catch (const Error& e) {
        fail(e.what());
      }
      raws.push_back({c, sparse, lineno});
    }
    const std::size_t n = width.value_or(std::max<std::size_t>(max_index, 1));
    if (max_index > n) throw Error("hamiltonian: term exceeds declared qubit count");
    std::vector<PauliTerm> terms;
    for (const auto& r : raws) {
      lineno = r.line;
      try {
        terms.push_back({r.c, PauliString::from_sparse(n, r.sparse)});
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    if (terms.empty()) throw Error("hamiltonian: no terms");
    return Hamiltonian(n, std::move(terms), allow_identity);
  }

  static Hamiltonian parse(std::string_view text, bool allow_identity = false) {
    std::istringstream in{std::string(text)};
    return parse(in, allow_identity);
  }

 private:
  std::size_t n_ = 1;
  std::vector<PauliTerm> terms_;
};

/// Magnitude below which merged coefficients are dropped.
inline constexpr double kTermDropTolerance = 1e-12;

/// Merges like strings, drops near-zero coefficients, and sorts by (z, x).
inline std::vector<ComplexPauliTerm> collect_terms(const std::vector<ComplexPauliTerm>& raw) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, ComplexPauliTerm> acc;
  for (const auto& t : raw) {
    const CanonicalForm cf = canonicalize(t.pauli);
    auto [it, fresh] = acc.try_emplace(cf.rep.key(), ComplexPauliTerm{0.0, cf.rep});
    it->second.coefficient += t.coefficient * cf.phase;
  }
  std::vector<ComplexPauliTerm> out;
  for (auto& [k, t] : acc) {
    if (std::abs(t.coefficient) >= kTermDropTolerance) out.push_back(t);
  }
  return out;
}

/// H^2 as a collected Pauli sum.
inline std::vector<ComplexPauliTerm> hamiltonian_square_terms(const Hamiltonian& h) {
  std::vector<ComplexPauliTerm> raw;
  raw.reserve(h.size() * h.size());
  for (const auto& a : h.terms()) {
    for (const auto& b : h.terms()) {
      raw.push_back({a.coefficient * b.coefficient, a.pauli * b.pauli});
    }
  }
  return collect_terms(raw);
}

inline std::vector<ComplexPauliTerm> as_complex_terms(const Hamiltonian& h) {
  std::vector<ComplexPauliTerm> out;
  out.reserve(h.size());
  for (const auto& t : h.terms()) out.push_back({t.coefficient, t.pauli});
  return out;
}

namespace detail {
inline void check_oracle_size(std::size_t n) {
  if (n > kOracleQubitLimit) {
    throw Error("dense oracle limited to " + std::to_string(kOracleQubitLimit) +
                " qubits, got " + std::to_string(n));
  }
}
}  // namespace detail

/// Accumulates c * dense(p) into m.
inline void add_dense(Eigen::MatrixXcd& m, const PauliString& p, cplx c) {
  const std::uint64_t dim = 1ULL << p.n_qubits();
  const cplx base = c * i_pow(p.phase_exp() + std::popcount(p.x_mask() & p.z_mask()));
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double sign = (std::popcount(p.z_mask() & j) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(j ^ p.x_mask()), static_cast<Eigen::Index>(j)) += sign * base;
  }
}

inline Eigen::MatrixXcd dense_matrix(const PauliString& p) {
  detail::check_oracle_size(p.n_qubits());
  const auto dim = static_cast<Eigen::Index>(1ULL << p.n_qubits());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  add_dense(m, p, 1.0);
  return m;
}

inline Eigen::MatrixXcd dense_matrix(std::size_t n_qubits, const std::vector<ComplexPauliTerm>& terms) {
  detail::check_oracle_size(n_qubits);
  const auto dim = static_cast<Eigen::Index>(1ULL << n_qubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms) add_dense(m, t.pauli, t.coefficient);
  return m;
}

inline Eigen::MatrixXcd dense_matrix(const Hamiltonian& h) {
  return dense_matrix(h.n_qubits(), as_complex_terms(h));
}

}  // namespace tqs
