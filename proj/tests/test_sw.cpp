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

#include "stabsw/sw.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "stabsw/models.hpp"
#include "stabsw/observables.hpp"

using namespace stabsw;
using oracle::dense;
using oracle::max_abs;

namespace {

const Complex kI(0, 1);

struct Pattern {
  Complex coeff;
  std::vector<std::pair<int, char>> sites;  // offsets from j
};

// sum_j of translated patterns on an n-site ring.
PauliSum ring_sum(std::size_t n, const std::vector<Pattern>& patterns) {
  PauliSum s(n);
  for (const auto& p : patterns)
    for (std::size_t j = 0; j < n; ++j) {
      PauliTerm t(n);
      for (auto [off, c] : p.sites) t.set((j + n + off) % n, c);
      s.push_back(t, p.coeff);
    }
  return canonicalize(s);
}

SWGenerator translation_consistent(const LatticeModel& m, std::size_t order) {
  SolveOptions o;
  o.tie_break = TieBreak::kLast;
  return build_generator_ti(m.h0, m.h1, order, m.translations, o);
}

PauliSum tfim_h0_plus_h1(const LatticeModel& m) { return add(m.h0.terms, m.h1); }

}  // namespace

TEST(solve_sm, single_qubit) {
  auto h0 = build_stabilizer_hamiltonian(PauliSum::from_term(PauliTerm::from_string("Z"), -1.0));
  const double lambda = 0.37;
  auto v = PauliSum::from_term(PauliTerm::from_string("X"), lambda);
  auto s = solve_sm(v, h0);
  EXPECT_EQ(s, PauliSum::from_term(PauliTerm::from_string("Y"), kI * lambda / 2.0));
  const auto p0 = oracle::ground_projector(h0.terms);
  const auto q0 = oracle::Mat::Identity(2, 2) - p0;
  const auto dv = dense(v), dh = dense(h0.terms), ds = dense(s);
  EXPECT_LT(max_abs(q0 * (dv + dh * ds - ds * dh) * p0), 1e-15);
}

TEST(solve_sm, block_diagonal_input) {
  auto h0 = build_stabilizer_hamiltonian(PauliSum::from_term(PauliTerm::from_string("Z"), -1.0));
  EXPECT_TRUE(solve_sm(PauliSum::from_term(PauliTerm::from_string("Z"), 0.5), h0).empty());
}

TEST(solve_sm, random_models_dense_condition) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    PauliSum terms(n);
    for (auto& g : oracle::random_stabilizers(rng, n, 30)) terms.push_back(g.term, -w(rng));
    auto h0 = build_stabilizer_hamiltonian(terms);
    auto v = oracle::random_sum(rng, n, 6);
    v = scale(0.5, add(v, PauliSum(n)));
    // Hermitian part only.
    for (auto& c : v.coeffs()) c = c.real();
    for (auto tie : {TieBreak::kFirst, TieBreak::kLast}) {
      auto s = solve_sm(v, h0, tie);
      EXPECT_TRUE(is_anti_hermitian(s));
      const auto p0 = oracle::ground_projector(h0.terms);
      const auto q0 = oracle::Mat::Identity(p0.rows(), p0.cols()) - p0;
      const auto dh = dense(h0.terms), ds = dense(s);
      EXPECT_LT(max_abs(q0 * (dense(v) + dh * ds - ds * dh) * p0), 1e-12);
    }
  }
}

TEST(tfim_generator, first_two_orders_match_closed_form) {
  const double h = 0.3;
  for (std::size_t n : {8, 12, 70}) {
    auto m = build_tfim_chain(n, h, TfimState::kAllUp);
    auto g = translation_consistent(m, 2);
    auto s1 = ring_sum(n, {{-kI * h / 4.0, {{-1, 'Z'}, {0, 'Y'}}}});
    auto s2 = ring_sum(n, {{-kI * 3.0 * h * h / 32.0, {{-1, 'Z'}, {0, 'X'}, {1, 'Y'}}},
                           {-kI * h * h / 32.0, {{0, 'Y'}, {1, 'X'}, {2, 'Z'}}}});
    EXPECT_LT(max_coeff_diff(g.orders[0], s1), 1e-14) << n;
    EXPECT_LT(max_coeff_diff(g.orders[1], s2), 1e-14) << n;
    EXPECT_EQ(g.orders[0].size(), s1.size());
    EXPECT_EQ(g.orders[1].size(), s2.size());
  }
}

TEST(compute_vm, tfim_orders_one_and_two) {
  const double h = 0.2;
  const std::size_t n = 10;
  auto m = build_tfim_chain(n, h, TfimState::kAllUp);
  auto g = translation_consistent(m, 1);
  EXPECT_EQ(compute_vm(m.h0, m.h1, g, 1), m.h1);
  auto v2 = compute_vm(m.h0, m.h1, g, 2);
  auto expected = ring_sum(n, {{-h * h / 4.0, {{0, 'Z'}, {1, 'Z'}}},
                               {3.0 * h * h / 8.0, {{0, 'Y'}, {1, 'Y'}}},
                               {-h * h / 8.0, {{-1, 'Z'}, {0, 'X'}, {1, 'X'}, {2, 'Z'}}}});
  EXPECT_LT(max_coeff_diff(v2, expected), 1e-15);
  // m = 2 is [H1, S1] + 1/2 [[H0, S1], S1] for any choice of S1.
  auto s1 = build_generator(m.h0, m.h1, 1).orders[0];
  auto direct = add(commutator(m.h1, s1), scale(0.5, commutator(commutator(m.h0.terms, s1), s1)));
  EXPECT_LT(max_coeff_diff(compute_vm(m.h0, m.h1, build_generator(m.h0, m.h1, 1), 2), direct), 1e-15);
  EXPECT_THROW(compute_vm(m.h0, m.h1, SWGenerator{}, 3), std::invalid_argument);
}

TEST(transformed_orders, tfim_order_two_closed_form) {
  const double h = 0.25;
  const std::size_t n = 9;
  auto m = build_tfim_chain(n, h, TfimState::kAllUp);
  auto g = translation_consistent(m, 2);
  auto th = transformed_orders(m.h0, m.h1, g, 2);
  auto h1 = ring_sum(n, {{-h / 2.0, {{0, 'X'}}}, {h / 2.0, {{-1, 'Z'}, {0, 'X'}, {1, 'Z'}}}});
  auto h2 = ring_sum(n, {{-h * h / 4.0, {{0, 'Z'}, {1, 'Z'}}},
                         {h * h / 8.0, {{0, 'Y'}, {1, 'Y'}}},
                         {h * h / 8.0, {{-1, 'Z'}, {0, 'X'}, {1, 'X'}, {2, 'Z'}}}});
  EXPECT_LT(max_coeff_diff(th.orders[0], h1), 1e-15);
  EXPECT_LT(max_coeff_diff(th.orders[1], h2), 1e-15);
}

TEST(build_generator, zero_perturbation) {
  auto m = build_tfim_chain(6, 0.0, TfimState::kAllUp);
  auto g = build_generator(m.h0, m.h1, 3);
  for (const auto& s : g.orders) EXPECT_TRUE(s.empty());
  auto th = transformed_orders(m.h0, m.h1, g, 3);
  for (const auto& o : th.orders) EXPECT_TRUE(o.empty());
  EXPECT_THROW(build_generator(m.h0, m.h1, 0), std::invalid_argument);
}

TEST(build_generator, structural_invariants) {
  auto m = build_tfim_chain(14, 0.4, TfimState::kAllUp);
  auto g = build_generator(m.h0, m.h1, 5);
  auto th = transformed_orders(m.h0, m.h1, g, 5);
  GroundStateEvaluator eval(m.gs);
  EXPECT_GT(ground_leakage(m.h1, eval), 0.1);
  PauliTerm all_x(14);
  for (std::size_t q = 0; q < 14; ++q) all_x.set(q, 'X');
  std::size_t prev_weight = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& s = g.orders[k];
    EXPECT_TRUE(is_anti_hermitian(s));
    EXPECT_TRUE(is_hermitian(th.orders[k]));
    std::size_t w = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_FALSE(excitation_profile(s.term(i), m.h0).flipped.empty());
      EXPECT_TRUE(s.term(i).commutes_with(all_x));
      w = std::max(w, s.term(i).weight());
    }
    // Rows of H^(m) may flip H0 terms individually (already -h/2 X_j at
    // order 1); only their combination must not leak out of the ground state.
    // leakage^2 is a sum of cancelling products c_a c_b, so rounding enters
    // the leakage itself at sqrt(eps) * c, not eps * c.
    EXPECT_LT(ground_leakage(th.orders[k], eval), 1e-6 * th.orders[k].max_abs_coeff());
    if (k > 0) EXPECT_LE(w, prev_weight + 2);
    prev_weight = w;
  }
}

TEST(build_generator, homogeneity_in_coupling) {
  auto base = build_tfim_chain(10, 0.3, TfimState::kAllUp);
  auto g = build_generator(base.h0, base.h1, 4);
  for (double t : {0.5, 2.0}) {
    auto g2 = build_generator(base.h0, scale(t, base.h1), 4);
    for (std::size_t k = 0; k < 4; ++k) {
      const double f = std::pow(t, static_cast<double>(k + 1));
      EXPECT_LT(max_coeff_diff(g2.orders[k], scale(f, g.orders[k])), 1e-12 * f * g.orders[k].max_abs_coeff());
    }
  }
}

TEST(build_generator, transformed_hamiltonian_matches_dense_conjugation) {
  // Random stabilizer H0 and random Hermitian H1: the order-m terms of
  // e^{-S} (H0 + H1) e^{S} are H^(m), block diagonal.
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> w(0.5, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 3 + trial % 3;
    PauliSum terms(n);
    for (auto& gen : oracle::random_stabilizers(rng, n, 40)) terms.push_back(gen.term, -w(rng));
    auto h0 = build_stabilizer_hamiltonian(terms);
    auto h1 = oracle::random_sum(rng, n, 5);
    for (auto& c : h1.coeffs()) c = 0.2 * c.real();
    const std::size_t order = 4;
    auto g = build_generator(h0, h1, order);
    auto th = transformed_orders(h0, h1, g, order);
    oracle::Poly hp{dense(h0.terms), dense(h1)};
    auto conj = oracle::conjugate_poly(hp, g.orders, order);
    const auto p0 = oracle::ground_projector(h0.terms);
    const auto q0 = oracle::Mat::Identity(p0.rows(), p0.cols()) - p0;
    for (std::size_t k = 1; k <= order; ++k) {
      EXPECT_LT(max_abs(conj[k] - dense(th.orders[k - 1])), 1e-12) << "order " << k;
      EXPECT_LT(max_abs(q0 * conj[k] * p0), 1e-12) << "order " << k;
    }
  }
}

TEST(build_generator, translation_mode_is_a_valid_generator) {
  auto m = build_tfim_chain(6, 0.3, TfimState::kAllUp);
  auto g = build_generator_ti(m.h0, m.h1, 3, m.translations);
  EXPECT_FALSE(g.reps.empty());
  EXPECT_LT(g.reps[0].size(), g.orders[0].size());
  oracle::Poly hp{dense(m.h0.terms), dense(m.h1)};
  auto conj = oracle::conjugate_poly(hp, g.orders, 3);
  const auto p0 = oracle::ground_projector(m.h0.terms);
  const auto q0 = oracle::Mat::Identity(p0.rows(), p0.cols()) - p0;
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_LT(max_abs(q0 * conj[k] * p0), 1e-12);
}

TEST(build_generator, term_cap) {
  auto m = build_tfim_chain(12, 0.3, TfimState::kAllUp);
  SolveOptions o;
  o.term_cap = 20;
  try {
    build_generator(m.h0, m.h1, 4, o);
    FAIL();
  } catch (const TermCapExceeded& e) {
    EXPECT_GE(e.order(), 2u);
    EXPECT_EQ(e.cap(), 20u);
  }
}

TEST(build_generator, stats_per_order) {
  auto m = build_tfim_chain(12, 0.3, TfimState::kAllUp);
  auto g = build_generator(m.h0, m.h1, 3);
  ASSERT_EQ(g.stats.size(), 3u);
  EXPECT_EQ(g.stats[0].v_terms, 12u);
  EXPECT_EQ(g.stats[0].s_terms, 12u);
  EXPECT_EQ(g.stats[2].order, 3u);
}
