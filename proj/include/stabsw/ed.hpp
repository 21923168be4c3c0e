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

// Exact diagonalization for small systems. Basis state |b> has qubit q in
// bit q of b, so qubit 0 is the rightmost tensor factor.

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/pauli.hpp"
#include "stabsw/stabilizer.hpp"

namespace stabsw {

using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxEdQubits = 14;     // matrix-free path
inline constexpr std::size_t kMaxDenseQubits = 12;  // a 2^12 complex matrix is 256 MiB
inline constexpr std::size_t kFullSolveQubits = 10;
inline constexpr double kPinningField = 1e-6;

namespace detail {

// One string as masks: T|b> = i^{|x&z|} (-1)^{|z&b|} |b ^ x>.
struct PauliMask {
  std::uint64_t x = 0, z = 0;
  Complex coeff;  // includes i^{|x&z|}
};

inline std::vector<PauliMask> masks_of(const PauliSum& a) {
  if (a.nqubits() > kMaxEdQubits)
    throw std::length_error("exact diagonalization supports at most " + std::to_string(kMaxEdQubits) +
                            " qubits (got " + std::to_string(a.nqubits()) + ")");
  std::vector<PauliMask> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Word* r = a.row_ptr(i);
    const std::uint64_t x = r[0], z = r[1];
    out.push_back({x, z, mul_ipow(a.coeff(i), std::popcount(x & z))});
  }
  return out;
}

inline void check_dim(std::size_t nqubits, Eigen::Index dim) {
  if (dim != (Eigen::Index{1} << nqubits))
    throw SizeMismatch("state dimension", static_cast<std::size_t>(dim), std::size_t{1} << nqubits);
}

}  // namespace detail

/// A 2^N x 2^N matrix tagged with its qubit count.
class DenseOperator {
 public:
  DenseOperator(std::size_t nqubits, DenseMatrix m, bool claim_hermitian = false)
      : nqubits_(nqubits), m_(std::move(m)) {
    if (nqubits_ > kMaxDenseQubits)
      throw std::length_error("dense operators are capped at " + std::to_string(kMaxDenseQubits) + " qubits");
    const auto dim = Eigen::Index{1} << nqubits_;
    if (m_.rows() != dim || m_.cols() != dim)
      throw SizeMismatch("dense operator dimension", static_cast<std::size_t>(m_.rows()), static_cast<std::size_t>(dim));
    if (claim_hermitian) {
      const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
      if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("operator claimed Hermitian is not");
      hermitian_ = true;
    }
  }

  std::size_t nqubits() const { return nqubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool hermitian() const { return hermitian_; }
  const DenseMatrix& matrix() const { return m_; }

 private:
  std::size_t nqubits_;
  DenseMatrix m_;
  bool hermitian_ = false;
};

inline DenseOperator to_dense(const PauliSum& a, bool claim_hermitian = false) {
  if (a.nqubits() > kMaxDenseQubits)
    throw std::length_error("to_dense supports at most " + std::to_string(kMaxDenseQubits) + " qubits (got " +
                            std::to_string(a.nqubits()) + ")");
  const auto masks = detail::masks_of(a);
  const std::uint64_t dim = std::uint64_t{1} << a.nqubits();
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& p : masks)
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double s = (std::popcount(p.z & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += s * p.coeff;
    }
  return DenseOperator(a.nqubits(), std::move(m), claim_hermitian);
}

/// out = A v without forming A.
inline void apply_to_state(const PauliSum& a, const StateVector& v, StateVector& out) {
  const auto masks = detail::masks_of(a);
  detail::check_dim(a.nqubits(), v.size());
  out.setZero(v.size());
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (const auto& p : masks)
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double s = (std::popcount(p.z & b) & 1) ? -1.0 : 1.0;
      out[static_cast<Eigen::Index>(b ^ p.x)] += s * p.coeff * v[static_cast<Eigen::Index>(b)];
    }
}

inline StateVector apply_to_state(const PauliSum& a, const StateVector& v) {
  StateVector out;
  apply_to_state(a, v, out);
  return out;
}

inline Complex exact_expectation(const DenseOperator& o, const StateVector& state) {
  if (o.dim() != state.size())
    throw SizeMismatch("expectation dimension", static_cast<std::size_t>(o.dim()), static_cast<std::size_t>(state.size()));
  return state.dot(o.matrix() * state);
}

inline Complex exact_expectation(const PauliSum& o, const StateVector& state) { return state.dot(apply_to_state(o, state)); }

/// Computational basis state |bits>.
inline StateVector basis_state(std::size_t nqubits, std::uint64_t bits) {
  StateVector v = StateVector::Zero(Eigen::Index{1} << nqubits);
  v[static_cast<Eigen::Index>(bits)] = 1.0;
  return v;
}

/// H - eps sum_i sign_i P_i: a small field favouring the given signed strings.
inline PauliSum pinned(const PauliSum& h, const std::vector<SignedTerm>& pins, double eps = kPinningField) {
  PauliSum field(h.nqubits());
  for (const auto& p : pins) field.push_back(p.term, -eps * p.sign);
  return add(h, canonicalize(field));
}

struct SectorGroundState {
  double energy = 0.0;
  StateVector state;
  double gap = 0.0;  // to the next level inside the sector; 0 if not resolved
  std::string method;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||H psi - E psi||
};

struct LanczosOptions {
  std::size_t max_iterations = 400;
  double tolerance = 1e-11;
  std::size_t check_every = 8;
};

/// Lowest eigenpair of a Hermitian map by Lanczos with full
/// reorthogonalization, started from `start`.
template <class MatVec>
SectorGroundState lanczos_lowest(MatVec&& op, StateVector start, const LanczosOptions& opt = {}) {
  const double nrm = start.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("Lanczos start vector is zero");
  const Eigen::Index dim = start.size();
  std::vector<StateVector> basis{start / nrm};
  std::vector<double> alpha, beta;
  StateVector w(dim);
  SectorGroundState out;
  out.method = "lanczos";
  const std::size_t cap = std::min<std::size_t>(opt.max_iterations, static_cast<std::size_t>(dim));
  auto ritz = [&](bool final) {
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    // Standard estimate ||H x - theta x|| = |beta_k y_k|.
    const double res = std::abs(beta.back() * es.eigenvectors()(k - 1, 0));
    if (!final && res > opt.tolerance) return false;
    out.energy = es.eigenvalues()[0];
    out.gap = k > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
    out.state = StateVector::Zero(dim);
    for (Eigen::Index i = 0; i < k; ++i) out.state += es.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
    out.state.normalize();
    out.iterations = static_cast<std::size_t>(k);
    return true;
  };
  for (std::size_t it = 0; it < cap; ++it) {
    op(basis.back(), w);
    const double a = basis.back().dot(w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    const double bnorm = w.norm();
    beta.push_back(bnorm);
    const bool exhausted = bnorm < 1e-13 * std::max(1.0, std::abs(a));
    if (exhausted || it + 1 == cap || (it + 1) % opt.check_every == 0) {
      if (exhausted) beta.back() = 0.0;
      if (ritz(exhausted || it + 1 == cap)) break;
    }
    basis.push_back(w / bnorm);
  }
  StateVector hv(dim);
  op(out.state, hv);
  out.residual = (hv - out.energy * out.state).norm();
  return out;
}

namespace detail {

inline void check_sector(const PauliSum* h, const std::vector<SignedTerm>& sector, std::size_t n) {
  for (std::size_t i = 0; i < sector.size(); ++i) {
    if (sector[i].term.nqubits() != n) throw SizeMismatch("sector operator qubit count", sector[i].term.nqubits(), n);
    if (sector[i].sign != 1 && sector[i].sign != -1) throw std::invalid_argument("sector signs must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j)
      if (!sector[i].term.commutes_with(sector[j].term))
        throw CommutationError("sector operators do not commute", j, i);
    if (h)
      for (std::size_t k = 0; k < h->size(); ++k)
        if (!sector[i].term.commutes_with(h->term(k)))
          throw CommutationError("sector operator does not commute with the Hamiltonian", i, k);
  }
}

// v <- prod_i (1 + s_i g_i)/2 v
inline void project(const std::vector<PauliSum>& gens, StateVector& v) {
  StateVector tmp;
  for (const auto& g : gens) {
    apply_to_state(g, v, tmp);
    v = 0.5 * (v + tmp);
  }
}

inline std::vector<PauliSum> signed_sums(const std::vector<SignedTerm>& sector) {
  std::vector<PauliSum> out;
  for (const auto& s : sector) out.push_back(PauliSum::from_term(s.term, static_cast<double>(s.sign)));
  return out;
}

// Fixed pseudo-random vector (xorshift), so runs are reproducible.
inline StateVector seed_vector(Eigen::Index dim) {
  StateVector v(dim);
  std::uint64_t x = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index b = 0; b < dim; ++b) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    v[b] = static_cast<double>(x >> 11) * 0x1.0p-53 - 0.5;
  }
  return v;
}

}  // namespace detail

/// Lowest eigenpair of a dense Hermitian H inside the joint +1 eigenspace of
/// sign_i g_i. Out-of-sector states are pushed above the spectrum.
inline SectorGroundState sector_ground_state(const DenseOperator& h, const std::vector<SignedTerm>& sector) {
  detail::check_sector(nullptr, sector, h.nqubits());
  const auto dim = h.dim();
  const DenseMatrix& hm = h.matrix();
  const double scale = std::max(1.0, hm.cwiseAbs().maxCoeff());
  if (!h.hermitian() && (hm - hm.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("sector_ground_state needs a Hermitian operator");
  const auto gens = detail::signed_sums(sector);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    // g and H Hermitian: H g = (g H)^dagger, so [g, H] = 0 iff g H is Hermitian.
    DenseMatrix gh(dim, dim);
    StateVector col;
    for (Eigen::Index c = 0; c < dim; ++c) {
      apply_to_state(gens[i], hm.col(c), col);
      gh.col(c) = col;
    }
    if ((gh - gh.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw CommutationError("sector operator does not commute with the Hamiltonian", i, 0);
  }
  SectorGroundState out;
  if (h.nqubits() <= kFullSolveQubits) {
    DenseMatrix p = DenseMatrix::Identity(dim, dim);
    for (const auto& g : gens) p = 0.5 * (p + to_dense(g).matrix() * p);
    const double rank = p.trace().real();
    if (rank < 0.5) throw std::invalid_argument("empty sector");
    const double shift = hm.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(p * hm * p + shift * (DenseMatrix::Identity(dim, dim) - p));
    out.energy = es.eigenvalues()[0];
    out.state = es.eigenvectors().col(0);
    out.gap = rank > 1.5 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
    out.method = "dense";
    out.iterations = 1;
    out.residual = (hm * out.state - out.energy * out.state).norm();
    return out;
  }
  StateVector v0 = detail::seed_vector(dim);
  detail::project(gens, v0);
  if (v0.norm() < 1e-10) throw std::invalid_argument("empty sector");
  return lanczos_lowest(
      [&](const StateVector& v, StateVector& w) {
        w = hm * v;
        detail::project(gens, w);
      },
      v0);
}

/// Matrix-free sector ground state for up to kMaxEdQubits qubits. `start`
/// seeds Lanczos (projected into the sector); pass the unperturbed reference
/// state to follow one branch of a near-degenerate pair.
inline SectorGroundState sector_ground_state(const PauliSum& h, const std::vector<SignedTerm>& sector,
                                             const StateVector* start = nullptr, const LanczosOptions& opt = {}) {
  const std::size_t n = h.nqubits();
  detail::check_sector(&h, sector, n);
  if (!is_hermitian(h)) throw std::invalid_argument("sector_ground_state needs a Hermitian operator");
  if (n <= kFullSolveQubits) return sector_ground_state(to_dense(h, true), sector);
  const auto gens = detail::signed_sums(sector);
  const Eigen::Index dim = Eigen::Index{1} << n;
  StateVector v0;
  if (start) {
    detail::check_dim(n, start->size());
    v0 = *start;
  } else {
    v0 = detail::seed_vector(dim);
  }
  detail::project(gens, v0);
  if (v0.norm() < 1e-10) throw std::invalid_argument("empty sector (or start vector outside it)");
  auto op = [&](const StateVector& v, StateVector& w) {
    apply_to_state(h, v, w);
    detail::project(gens, w);
  };
  return lanczos_lowest(op, v0, opt);
}

}  // namespace stabsw
