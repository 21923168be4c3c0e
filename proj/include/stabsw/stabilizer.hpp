// Copyright 2026 The stabsw Authors
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

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/f2.hpp"
#include "stabsw/pauli.hpp"

namespace stabsw {

/// H0 = -sum_j h_j s_j with pairwise commuting strings s_j and h_j > 0.
struct StabilizerHamiltonian {
  PauliSum terms;                               // canonical, coefficients -h_j
  std::vector<double> weights;                  // h_j, aligned with terms
  std::vector<std::size_t> generator_indices;   // first maximal independent subset of terms
  SupportIndex index;                           // qubit -> terms

  std::size_t nqubits() const { return terms.nqubits(); }
  std::size_t num_generators() const { return generator_indices.size(); }

  BitMatrix generator_rows() const {
    PauliSum g(nqubits());
    for (auto i : generator_indices) g.push_back(terms.row(i), 1.0);
    return check_matrix(g);
  }
};

inline StabilizerHamiltonian build_stabilizer_hamiltonian(const PauliSum& input) {
  StabilizerHamiltonian h;
  h.terms = canonicalize(input);
  const PauliSum& t = h.terms;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Complex c = t.coeff(i);
    if (std::abs(c.imag()) > 1e-12 * std::abs(c))
      throw HamiltonianError("term " + std::to_string(i) + " (" + t.term(i).sparse_str() + ") has a complex coefficient");
    if (!(c.real() < 0))
      throw HamiltonianError("term " + std::to_string(i) + " (" + t.term(i).sparse_str() +
                             ") must have a negative coefficient");
    h.weights.push_back(-c.real());
  }
  h.index = SupportIndex(t);
  std::vector<std::uint32_t> stamp(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    detail::for_each_overlapping(t.row_ptr(i), t.nwords(), h.index, stamp, static_cast<std::uint32_t>(i + 1),
                                 [&](std::size_t j) {
                                   if (detail::anticommute(t.row_ptr(i), t.row_ptr(j), t.nwords()))
                                     throw CommutationError("H0 terms do not commute", std::min(i, j), std::max(i, j));
                                 });
  }
  RowBasis basis(t.row_words());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (basis.insert(t.row(i))) h.generator_indices.push_back(i);
  return h;
}

struct SignedTerm {
  PauliTerm term;
  int sign = 1;
};

/// Excitation of a string P relative to H0: which terms it flips and the cost.
struct ExcitationProfile {
  std::vector<std::size_t> flipped;  // indices into H0 terms, increasing
  double delta_e = 0.0;
};

inline ExcitationProfile excitation_profile(const Word* row, const StabilizerHamiltonian& h) {
  ExcitationProfile p;
  const PauliSum& t = h.terms;
  std::vector<std::uint32_t> stamp(t.size(), 0);
  detail::for_each_overlapping(row, t.nwords(), h.index, stamp, 1, [&](std::size_t j) {
    if (detail::anticommute(row, t.row_ptr(j), t.nwords())) p.flipped.push_back(j);
  });
  std::sort(p.flipped.begin(), p.flipped.end());
  for (auto j : p.flipped) p.delta_e += 2.0 * h.weights[j];
  return p;
}

inline ExcitationProfile excitation_profile(const PauliTerm& p, const StabilizerHamiltonian& h) {
  if (p.nqubits() != h.nqubits()) throw SizeMismatch("excitation_profile qubit count", p.nqubits(), h.nqubits());
  return excitation_profile(p.words().data(), h);
}

/// Basis of strings commuting with every row of `stab_rows` (check-matrix layout).
inline BitMatrix centralizer_basis(const BitMatrix& stab_rows) {
  const std::size_t n = stab_rows.cols() / 2;
  BitMatrix swapped(stab_rows.rows(), stab_rows.cols());
  for (std::size_t r = 0; r < stab_rows.rows(); ++r)
    for (std::size_t c = 0; c < 2 * n; ++c)
      if (stab_rows.get(r, c)) swapped.set(r, c < n ? c + n : c - n, true);
  return nullspace(swapped);
}

/// M1 L M2^T over F2 with L the symplectic form.
inline BitMatrix symplectic_product(const BitMatrix& m1, const BitMatrix& m2) {
  if (m1.cols() != m2.cols() || m1.cols() % 2 != 0) throw SizeMismatch("symplectic_product widths", m1.cols(), m2.cols());
  const std::size_t n = m1.cols() / 2;
  BitMatrix swapped(m2.rows(), m2.cols());
  for (std::size_t r = 0; r < m2.rows(); ++r)
    for (std::size_t c = m2.first_set(r); c < 2 * n; c = m2.first_set(r, c + 1))
      swapped.set(r, c < n ? c + n : c - n, true);
  BitMatrix out(m1.rows(), m2.rows());
  for (std::size_t i = 0; i < m1.rows(); ++i) {
    auto a = m1.row(i);
    for (std::size_t j = 0; j < m2.rows(); ++j) {
      auto b = swapped.row(j);
      Word acc = 0;
      for (std::size_t k = 0; k < a.size(); ++k) acc ^= a[k] & b[k];
      if (std::popcount(acc) & 1) out.set(i, j, true);
    }
  }
  return out;
}

/// Destabilizer check matrix D with D L G^T = I, from the Smith form of G.
inline BitMatrix compute_destabilizers(const BitMatrix& stab_rows) {
  const std::size_t n = stab_rows.rows();
  if (stab_rows.cols() != 2 * n) throw SizeMismatch("stabilizer check matrix must be N x 2N", stab_rows.cols(), 2 * n);
  const BitMatrix comm = symplectic_product(stab_rows, stab_rows);
  for (std::size_t i = 0; i < n; ++i)
    if (auto j = comm.first_set(i); j < n) throw CommutationError("stabilizers do not commute", std::min(i, j), std::max(i, j));
  const SmithForm snf = smith_normal_form(stab_rows);
  const BitMatrix q11 = snf.Q.block(0, 0, n, n);
  const BitMatrix q21 = snf.Q.block(n, 0, n, n);
  BitMatrix d = BitMatrix::hstack((q21 * snf.P).transposed(), (q11 * snf.P).transposed());
  if (!(symplectic_product(d, stab_rows) == BitMatrix::identity(n)))
    throw std::logic_error("destabilizer identity failed");
  return d;
}

/// A full signed stabilizer set fixing one state, plus matching destabilizers.
struct GroundStateSpec {
  std::size_t nqubits = 0;
  std::vector<PauliTerm> stabilizers;
  std::vector<int> signs;
  std::vector<PauliTerm> destabilizers;

  BitMatrix stab_rows() const { return rows_of(stabilizers); }
  BitMatrix destab_rows() const { return rows_of(destabilizers); }

 private:
  BitMatrix rows_of(const std::vector<PauliTerm>& v) const {
    PauliSum s(nqubits);
    for (auto& t : v) s.push_back(t, 1.0);
    return check_matrix(s);
  }
};

/// Builds a spec from explicit signed generators (N of them, commuting, independent).
inline GroundStateSpec make_ground_state(std::size_t nqubits, const std::vector<SignedTerm>& gens) {
  GroundStateSpec gs;
  gs.nqubits = nqubits;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].term.nqubits() != nqubits) throw SizeMismatch("stabilizer qubit count", gens[i].term.nqubits(), nqubits);
    if (gens[i].sign != 1 && gens[i].sign != -1) throw HamiltonianError("stabilizer sign must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j)
      if (!gens[i].term.commutes_with(gens[j].term)) throw CommutationError("stabilizers do not commute", j, i);
  }
  RowBasis basis(2 * words_for_bits(nqubits));
  std::size_t rank = 0;
  for (auto& g : gens) rank += basis.insert(g.term.words()) ? 1 : 0;
  if (rank < gens.size()) throw RankDeficiency("stabilizer generators are dependent", rank, gens.size());
  if (gens.size() > nqubits) throw HamiltonianError("more than N stabilizer generators");
  if (rank < nqubits) throw RankDeficiency("stabilizer set does not fix a state", rank, nqubits);
  for (auto& g : gens) {
    gs.stabilizers.push_back(g.term);
    gs.signs.push_back(g.sign);
  }
  const BitMatrix d = compute_destabilizers(gs.stab_rows());
  for (std::size_t r = 0; r < nqubits; ++r) gs.destabilizers.push_back(term_from_check_row(d, r));
  return gs;
}

/// H0 generators (sign +1) completed by the caller's extra signed strings.
inline GroundStateSpec complete_ground_state(const StabilizerHamiltonian& h, const std::vector<SignedTerm>& extra) {
  std::vector<SignedTerm> gens;
  for (auto i : h.generator_indices) gens.push_back({h.terms.term(i), 1});
  for (std::size_t e = 0; e < extra.size(); ++e) {
    for (std::size_t g = 0; g < h.generator_indices.size(); ++g)
      if (!extra[e].term.commutes_with(gens[g].term))
        throw CommutationError("extra stabilizer does not commute with generator", e, g);
    gens.push_back(extra[e]);
  }
  if (gens.size() > h.nqubits())
    throw HamiltonianError("over-complete stabilizer set: " + std::to_string(gens.size()) + " generators for " +
                           std::to_string(h.nqubits()) + " qubits");
  return make_ground_state(h.nqubits(), gens);
}

struct Decomposition {
  std::vector<bool> exponents;
  int sign = 1;
};

/// P = sign * prod_i (signs_i g_i)^{n_i} on the ground state, for P commuting with all g_i.
inline Decomposition stabilizer_decompose(const Word* row, const GroundStateSpec& gs) {
  const std::size_t nw = words_for_bits(gs.nqubits);
  for (std::size_t i = 0; i < gs.stabilizers.size(); ++i)
    if (detail::anticommute(row, gs.stabilizers[i].words().data(), nw))
      throw CommutationError("string anticommutes with stabilizer", i, i);
  Decomposition d;
  d.exponents.assign(gs.nqubits, false);
  std::vector<Word> acc(2 * nw, 0);
  int k = 0;
  int sigma = 1;
  for (std::size_t i = 0; i < gs.nqubits; ++i) {
    if (!detail::anticommute(row, gs.destabilizers[i].words().data(), nw)) continue;
    d.exponents[i] = true;
    const Word* g = gs.stabilizers[i].words().data();
    k += detail::phase_exponent(acc.data(), g, nw);
    for (std::size_t w = 0; w < 2 * nw; ++w) acc[w] ^= g[w];
    sigma *= gs.signs[i];
  }
  if (!std::equal(acc.begin(), acc.end(), row)) throw std::logic_error("stabilizer decomposition does not reproduce the string");
  if (k % 2 != 0) throw std::logic_error("non-Hermitian stabilizer product");
  // prod g_i = i^k P, and prod g_i |0> = sigma |0>.
  d.sign = (k % 4 == 0) ? sigma : -sigma;
  return d;
}

inline Decomposition stabilizer_decompose(const PauliTerm& p, const GroundStateSpec& gs) {
  if (p.nqubits() != gs.nqubits) throw SizeMismatch("stabilizer_decompose qubit count", p.nqubits(), gs.nqubits);
  return stabilizer_decompose(p.words().data(), gs);
}

/// One line per stabilizer: `<sign> 1 0 <letters>`.
inline std::string to_text(const GroundStateSpec& gs) {
  std::string out;
  for (std::size_t i = 0; i < gs.stabilizers.size(); ++i) {
    out += gs.signs[i] > 0 ? "+1 " : "-1 ";
    out += "1 0 " + gs.stabilizers[i].str() + "\n";
  }
  return out;
}

inline GroundStateSpec parse_ground_state(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SignedTerm> gens;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
    std::istringstream ls(line);
    int sign = 0;
    double re = 0, im = 0;
    std::string letters;
    if (!(ls >> sign >> re >> im >> letters) || (sign != 1 && sign != -1) || re != 1.0 || im != 0.0)
      throw ParseError("bad stabilizer line: " + line);
    gens.push_back({PauliTerm::from_string(letters), sign});
    n = letters.size();
  }
  if (gens.empty()) throw ParseError("no stabilizers");
  return make_ground_state(n, gens);
}

}  // namespace stabsw
