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

// Invariant suite behind `stabsw validate`. Each check compares the library
// against something it does not share code with: dense matrices built straight
// from T(a, b) = i^{a.b} X^a Z^b, hand-rolled symplectic products, or a second
// pipeline (other tie-break, other representation).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <functional>
#include <ostream>
#include <random>

#include "stabsw/experiments.hpp"

namespace stabsw {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

inline void print(std::ostream& os, const ValidationReport& r) {
  for (const auto& c : r.checks)
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << fmt_num(c.measured)
       << "  tolerance=" << fmt_coupling(c.tolerance) << "  " << c.detail << '\n';
  os << (r.passed() ? "all checks passed" : "validation FAILED") << '\n';
}

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : r.checks)
    a.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"tolerance", c.tolerance},
                 {"detail", c.detail}});
  return {{"passed", r.passed()}, {"checks", a}};
}

using PhaseFunction = std::function<int(const Word*, const Word*, std::size_t)>;

struct ValidationOptions {
  std::uint64_t seed = 20260101;
  std::size_t trials = 200;
  PhaseFunction phase = detail::phase_exponent;  // swapped out by the negative-control test
};

namespace oracle {

// Dense T(a, b) by its action on basis states: i^{a.b} (-1)^{|b & s|} |s ^ a>.
inline Eigen::MatrixXcd dense_term(const PauliTerm& t) {
  const std::size_t n = t.nqubits();
  if (n > 10) throw std::length_error("dense oracle is limited to 10 qubits");
  std::uint64_t a = 0, b = 0;
  for (std::size_t q = 0; q < n; ++q) {
    a |= std::uint64_t{t.x(q)} << q;
    b |= std::uint64_t{t.z(q)} << q;
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const Complex lead = detail::ipow(std::popcount(a & b));
  for (Eigen::Index s = 0; s < dim; ++s)
    m(static_cast<Eigen::Index>(s ^ a), s) = lead * (std::popcount(b & std::uint64_t(s)) & 1 ? -1.0 : 1.0);
  return m;
}

inline Eigen::MatrixXcd dense_sum(const PauliSum& a) {
  const Eigen::Index dim = Eigen::Index{1} << a.nqubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < a.size(); ++i) m += a.coeff(i) * dense_term(a.term(i));
  return m;
}

inline PauliTerm random_term(std::mt19937_64& rng, std::size_t n) {
  static constexpr char kLetters[] = "IXYZ";
  PauliTerm t(n);
  for (std::size_t q = 0; q < n; ++q) t.set(q, kLetters[rng() % 4]);
  return t;
}

inline PauliSum random_sum(std::mt19937_64& rng, std::size_t n, std::size_t terms) {
  std::normal_distribution<double> g;
  PauliSum s(n);
  for (std::size_t k = 0; k < terms; ++k) s.push_back(random_term(rng, n), Complex(g(rng), g(rng)));
  return canonicalize(s);
}

/// N commuting independent rows: Z_0..Z_{N-1} pushed through random H, S and
/// CNOT gates on the check matrix, then mixed by random row sums.
inline BitMatrix random_stabilizer_rows(std::mt19937_64& rng, std::size_t n) {
  BitMatrix m(n, 2 * n);
  for (std::size_t q = 0; q < n; ++q) m.set(q, n + q, true);
  const std::size_t gates = 4 * n * n + 8;
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t q = rng() % n;
    switch (rng() % 3) {
      case 0:  // H: x <-> z
        for (std::size_t r = 0; r < n; ++r) {
          const bool x = m.get(r, q), z = m.get(r, n + q);
          m.set(r, q, z);
          m.set(r, n + q, x);
        }
        break;
      case 1:  // S: z ^= x
        for (std::size_t r = 0; r < n; ++r)
          if (m.get(r, q)) m.flip(r, n + q);
        break;
      default: {  // CNOT q -> t
        if (n < 2) break;
        std::size_t t = rng() % (n - 1);
        if (t >= q) ++t;
        for (std::size_t r = 0; r < n; ++r) {
          if (m.get(r, q)) m.flip(r, t);
          if (m.get(r, n + t)) m.flip(r, n + q);
        }
      }
    }
  }
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const std::size_t i = rng() % n, j = rng() % n;
    if (i != j) m.xor_row(i, j);
  }
  return m;
}

inline int symplectic_bit(const BitMatrix& a, std::size_t i, const BitMatrix& b, std::size_t j) {
  const std::size_t n = a.cols() / 2;
  int s = 0;
  for (std::size_t q = 0; q < n; ++q) s ^= (a.get(i, q) & b.get(j, n + q)) ^ (a.get(i, n + q) & b.get(j, q));
  return s;
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle

// ---- individual checks ------------------------------------------------------------

/// T(r1) T(r2) = i^k T(r1 ^ r2) against dense matrices, plus the algebraic
/// identities k(r, r) = 0, k(r1, r2) - k(r2, r1) = 2 [anticommute], and
/// associativity of the phase cocycle.
inline CheckResult check_phase_identities(const ValidationOptions& o) {
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  std::size_t algebra_failures = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const auto a = oracle::random_term(rng, n), b = oracle::random_term(rng, n), c = oracle::random_term(rng, n);
    const std::size_t nw = a.nwords();
    const Word *ra = a.words().data(), *rb = b.words().data(), *rc = c.words().data();
    PauliTerm ab = a, bc = b;
    for (std::size_t k = 0; k < 2 * nw; ++k) {
      ab.words()[k] ^= rb[k];
      bc.words()[k] ^= rc[k];
    }
    const int k_ab = o.phase(ra, rb, nw);
    worst = std::max(worst, (oracle::dense_term(a) * oracle::dense_term(b) - detail::ipow(k_ab) * oracle::dense_term(ab))
                                .cwiseAbs()
                                .maxCoeff());
    const int k_ba = o.phase(rb, ra, nw);
    const int anti = detail::anticommute(ra, rb, nw) ? 2 : 0;
    const int assoc = (k_ab + o.phase(ab.words().data(), rc, nw) - o.phase(rb, rc, nw) - o.phase(ra, bc.words().data(), nw)) & 3;
    if (o.phase(ra, ra, nw) != 0 || ((k_ab - k_ba - anti) & 3) != 0 || assoc != 0) ++algebra_failures;
  }
  const double tol = 1e-12;
  return {"phase_identities", worst <= tol && algebra_failures == 0, worst, tol,
          std::to_string(o.trials) + " random triples, N<=5; identity violations: " + std::to_string(algebra_failures)};
}

/// Products, commutators and sums of random PauliSums match dense matrices.
inline CheckResult check_pauli_dense_equivalence(const ValidationOptions& o) {
  std::mt19937_64 rng(o.seed + 1);
  double worst = 0.0;
  const std::size_t trials = std::max<std::size_t>(1, o.trials / 4);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto a = oracle::random_sum(rng, n, 1 + rng() % 8), b = oracle::random_sum(rng, n, 1 + rng() % 8);
    const auto da = oracle::dense_sum(a), db = oracle::dense_sum(b);
    worst = std::max(worst, (oracle::dense_sum(multiply(a, b)) - da * db).cwiseAbs().maxCoeff());
    worst = std::max(worst, (oracle::dense_sum(commutator(a, b)) - (da * db - db * da)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (oracle::dense_sum(add(a, b)) - (da + db)).cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12;
  return {"pauli_dense_equivalence", worst <= tol, worst, tol, std::to_string(trials) + " random operator pairs, N<=6"};
}

/// D L G^T = I (mod 2) for random full-rank commuting sets, N <= 10.
inline CheckResult check_destabilizer_identity(const ValidationOptions& o) {
  std::mt19937_64 rng(o.seed + 2);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t n = 1 + rng() % 10;
    const auto g = oracle::random_stabilizer_rows(rng, n);
    BitMatrix d;
    try {
      d = compute_destabilizers(g);
    } catch (const std::exception&) {
      ++failures;
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = oracle::symplectic_bit(d, i, g, j) == (i == j ? 1 : 0);
    if (!ok) ++failures;
  }
  return {"destabilizer_identity", failures == 0, static_cast<double>(failures), 0.0,
          std::to_string(o.trials) + " random stabilizer sets, N<=10; measured = failing sets"};
}

/// ||(1 - P0) e^{-S} H e^{S} P0|| at coupling h, with S truncated at order M.
inline double sw_residual(const LatticeModel& unit, const SWGenerator& s, std::size_t m, double h) {
  const auto h0 = oracle::dense_sum(unit.h0.terms);
  const Eigen::MatrixXcd h_full = h0 + h * oracle::dense_sum(unit.h1_unit);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(h0.rows(), h0.cols());
  for (std::size_t k = 1; k <= m; ++k) gen += std::pow(h, double(k)) * oracle::dense_sum(s.orders[k - 1]);
  const Eigen::MatrixXcd u = gen.exp(), u_inv = (-gen).exp();
  const Eigen::MatrixXcd ht = u_inv * h_full * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h0);
  const double e0 = es.eigenvalues()(0);
  Eigen::Index k0 = 0;
  while (k0 < es.eigenvalues().size() && es.eigenvalues()(k0) < e0 + 1e-9) ++k0;
  const Eigen::MatrixXcd v0 = es.eigenvectors().leftCols(k0);
  const Eigen::MatrixXcd leak = ht * v0 - v0 * (v0.adjoint() * ht * v0);
  return oracle::spectral_norm(leak);
}

/// Log-log slope of the leakage over h in [0.05, 0.2] for M = 1, 2, 3 (TFIM N=8).
inline std::vector<CheckResult> check_sw_residual_scaling(const ValidationOptions&) {
  const auto unit = build_tfim_chain(8, 1.0, TfimState::kAllUp);
  const auto s = build_generator(unit.h0, unit.h1_unit, 3);
  std::vector<double> hs;
  for (int i = 0; i <= 6; ++i) hs.push_back(0.05 * std::pow(4.0, i / 6.0));
  std::vector<CheckResult> out;
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<double> r;
    for (double h : hs) r.push_back(sw_residual(unit, s, m, h));
    const double slope = oracle::loglog_slope(hs, r);
    const double target = static_cast<double>(m + 1);
    out.push_back({"sw_residual_scaling_M" + std::to_string(m), std::abs(slope - target) <= 0.3, slope, 0.3,
                   "TFIM N=8, h in [0.05, 0.2]; measured = log-log slope, target " + fmt_num(target)});
  }
  return out;
}

namespace detail {

// Series for the observables the acceptance runs read off a TFIM ring.
inline std::vector<OrderSeries> tfim_series(std::size_t n, std::size_t order, TieBreak tie, bool ti, TfimState state) {
  const auto unit = build_tfim_chain(n, 1.0, state);
  SolveOptions so;
  so.tie_break = tie;
  const auto s = ti ? build_generator_ti(unit.h0, unit.h1_unit, order, unit.translations, so)
                    : build_generator(unit.h0, unit.h1_unit, order, so);
  GroundStateEvaluator eval(unit.gs);
  Conjugator conj(s, order);
  std::vector<OrderSeries> out;
  for (const auto& name : {"Z0", "X0"})
    out.push_back(expectation_from_orders("", conj.expand(resolve_observable(unit, name)), eval).orders);
  const auto y0 = conj.expand(PauliSum::from_term(PauliTerm::sparse(n, {{0, 'Y'}})));
  for (std::size_t d = 1; d <= 3; ++d)
    out.push_back(
        connected_from_orders("", y0, conj.expand(PauliSum::from_term(PauliTerm::sparse(n, {{d, 'Y'}}))), eval).orders);
  return out;
}

inline std::vector<OrderSeries> toric_series(std::size_t l, std::size_t order, TieBreak tie) {
  const auto unit = build_toric_square(l, l, 1.0);
  SolveOptions so;
  so.tie_break = tie;
  const auto s = build_generator_ti(unit.h0, unit.h1_unit, order, unit.translations, so);
  GroundStateEvaluator eval(unit.gs);
  Conjugator conj(s, order);
  std::vector<OrderSeries> out;
  for (const auto& loop : unit.loops) out.push_back(expectation_from_orders("", conj.expand(loop.op), eval).orders);
  return out;
}

inline double series_diff(const std::vector<OrderSeries>& a, const std::vector<OrderSeries>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t m = 0; m < a[i].size(); ++m) d = std::max(d, std::abs(a[i][m] - b[i][m]));
  return d;
}

}  // namespace detail

/// Observable series do not depend on which flipped H0 term carries the
/// division in the generator solve.
inline CheckResult check_tie_break_invariance(const ValidationOptions&) {
  const double d1 = detail::series_diff(detail::tfim_series(12, 4, TieBreak::kFirst, false, TfimState::kAllUp),
                                        detail::tfim_series(12, 4, TieBreak::kLast, false, TfimState::kAllUp));
  const double d2 = detail::series_diff(detail::tfim_series(8, 4, TieBreak::kFirst, false, TfimState::kAllRight),
                                        detail::tfim_series(8, 4, TieBreak::kLast, false, TfimState::kAllRight));
  const double d3 = detail::series_diff(detail::toric_series(4, 4, TieBreak::kFirst), detail::toric_series(4, 4, TieBreak::kLast));
  const double worst = std::max({d1, d2, d3});
  const double tol = 1e-12;
  return {"tie_break_invariance", worst <= tol, worst, tol,
          "first vs last: TFIM N=12 and PM frame N=8 (Z, X, YY:1..3), toric 4x4 loops, M=4"};
}

/// Translation-reduced and explicit pipelines give the same observable series.
inline CheckResult check_translation_equivalence(const ValidationOptions&) {
  double worst = 0.0;
  for (auto tie : {TieBreak::kFirst, TieBreak::kLast})
    worst = std::max(worst, detail::series_diff(detail::tfim_series(12, 4, tie, false, TfimState::kAllUp),
                                                detail::tfim_series(12, 4, tie, true, TfimState::kAllUp)));
  const double tol = 1e-12;
  return {"translation_equivalence", worst <= tol, worst, tol, "TFIM N=12, M=4, Z, X and YY:1..3 per order"};
}

/// Truncated series against exact diagonalization on small rings.
inline std::vector<CheckResult> check_ed_cross(const ValidationOptions&) {
  std::vector<CheckResult> out;
  {
    // pinned all-up branch, <Z0> at h=0.1, M=6; the truncation error is O(h^8)
    RunConfig c;
    c.model = "tfim";
    c.n = 8;
    c.order = 6;
    c.couplings = {0.1};
    c.observables = {"Z0", "X0"};
    c.ed_compare = true;
    c.threads = 1;
    const auto a = analyze_tfim(c);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.names.size(); ++k)
      worst = std::max(worst, std::abs(cumulative_at(a.series[k], 0.1).back() - a.ed[0].at(a.names[k])));
    const double tol = 1e-7;
    out.push_back({"ed_cross_check_all_up", worst <= tol, worst, tol, "TFIM N=8, h=0.1, M=6 vs pinned ED (Z0, X0)"});
  }
  {
    // GHZ spec: <Z0> vanishes exactly, <X0> matches the symmetric sector
    RunConfig c;
    c.model = "tfim";
    c.n = 8;
    c.order = 6;
    c.state = "ghz";
    c.couplings = {0.1};
    c.observables = {"Z0", "X0"};
    c.ed_compare = true;
    c.threads = 1;
    const auto a = analyze_tfim(c);
    double worst = 0.0;
    for (const auto& z : a.series[0]) worst = std::max(worst, std::abs(z));
    worst = std::max(worst, std::abs(cumulative_at(a.series[1], 0.1).back() - a.ed[0].at("X0")));
    const double tol = 1e-7;
    out.push_back({"ed_cross_check_ghz", worst <= tol, worst, tol, "TFIM N=8 GHZ, h=0.1, M=6: Z0 series zero, X0 vs sector ED"});
  }
  {
    RunConfig c;
    c.model = "tfim";
    c.n = 8;
    c.order = 6;
    c.state = "all_right";
    c.couplings = {8.0};
    c.observables = {"X0", "Z0"};
    c.ed_compare = true;
    c.threads = 1;
    const auto a = analyze_tfim(c);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.names.size(); ++k)
      worst = std::max(worst, std::abs(cumulative_at(a.series[k], 0.125).back() - a.ed[0].at(a.names[k])));
    const double tol = 1e-7;
    out.push_back({"ed_cross_check_paramagnet", worst <= tol, worst, tol, "TFIM N=8 PM frame, h=8, M=6 vs ED (X0, Z0)"});
  }
  return out;
}

inline ValidationReport run_validation(const ValidationOptions& o = {}) {
  ValidationReport r;
  r.checks.push_back(check_phase_identities(o));
  r.checks.push_back(check_pauli_dense_equivalence(o));
  r.checks.push_back(check_destabilizer_identity(o));
  for (auto& c : check_sw_residual_scaling(o)) r.checks.push_back(std::move(c));
  r.checks.push_back(check_tie_break_invariance(o));
  r.checks.push_back(check_translation_equivalence(o));
  for (auto& c : check_ed_cross(o)) r.checks.push_back(std::move(c));
  return r;
}

}  // namespace stabsw
