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

#include "stabsw/translation.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace stabsw;

namespace {

std::shared_ptr<const TranslationGroup> ring(std::size_t n) {
  return std::make_shared<TranslationGroup>(TranslationGroup::lattice(n, 1, n, 1));
}

PauliSum sum_of(std::size_t n, std::initializer_list<std::pair<Complex, const char*>> terms) {
  PauliSum s(n);
  for (auto& [c, t] : terms) s.push_back(parse_term(t, n), c);
  return canonicalize(s);
}

// Brute-force orbit sum: every translate of every rep row, no shortcuts.
PauliSum orbit_sum_oracle(const PauliSum& rep, const TranslationGroup& g) {
  PauliSum out(rep.nqubits());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const PauliTerm t = rep.term(i);
    for (std::size_t e = 0; e < g.order(); ++e) {
      PauliTerm moved(rep.nqubits());
      for (std::size_t q = 0; q < rep.nqubits(); ++q)
        if (t.letter(q) != 'I') moved.set(g.element(e)[q], t.letter(q));
      out.push_back(moved, rep.coeff(i));
    }
  }
  return canonicalize(out);
}

}  // namespace

TEST(translation_group, validation) {
  using Perm = TranslationGroup::Perm;
  EXPECT_THROW(TranslationGroup(3, {Perm{0, 0, 1}}, {3}), std::invalid_argument);
  EXPECT_THROW(TranslationGroup(3, {Perm{1, 2, 0}}, {2}), std::invalid_argument);
  EXPECT_THROW(TranslationGroup(4, {Perm{1, 0, 2, 3}, Perm{0, 2, 1, 3}}, {2, 2}), std::invalid_argument);
  TranslationGroup g(3, {Perm{1, 2, 0}}, {3});
  EXPECT_EQ(g.order(), 3u);
  auto sq = TranslationGroup::lattice(18, 2, 3, 3);
  EXPECT_EQ(sq.order(), 9u);
}

TEST(expand_full, examples) {
  auto g = ring(3);
  EXPECT_EQ(expand_full(TISum(sum_of(3, {{1.0, "X0"}}), g)), sum_of(3, {{1.0, "X0"}, {1.0, "X1"}, {1.0, "X2"}}));
  auto g4 = ring(4);
  auto bonds = expand_full(TISum(sum_of(4, {{1.0, "Z0 Z1"}}), g4));
  EXPECT_EQ(bonds.size(), 4u);
  // A fully symmetric string denotes |G| copies of itself; from_explicit divides that out.
  auto all_x = sum_of(4, {{1.0, "XXXX"}});
  auto t = from_explicit(all_x, g4);
  EXPECT_EQ(expand_full(t), all_x);
  EXPECT_THROW(from_explicit(sum_of(4, {{1.0, "X0"}}), g4), std::invalid_argument);
}

TEST(ti_ops, examples) {
  auto g = ring(5);
  TISum x(sum_of(5, {{1.0, "X0"}}), g), z(sum_of(5, {{1.0, "Z0"}}), g);
  EXPECT_EQ(ti_add(x, z).rep, sum_of(5, {{1.0, "X0"}, {1.0, "Z0"}}));
  EXPECT_TRUE(ti_add(x, ti_scale(-1.0, x)).rep.empty());
  EXPECT_TRUE(ti_commutator(x, x).rep.empty());
  EXPECT_TRUE(ti_multiply(x, TISum(PauliSum(5), g)).rep.empty());
  TISum zz(sum_of(5, {{1.0, "Z0 Z1"}}), g);
  EXPECT_TRUE(ti_commutator(zz, z).rep.empty());
  EXPECT_NO_THROW(ti_add(x, TISum(sum_of(5, {{1.0, "X0"}}), ring(5))));
  auto trivial = std::make_shared<TranslationGroup>(5, std::vector<TranslationGroup::Perm>{}, std::vector<std::size_t>{});
  EXPECT_THROW(ti_add(x, TISum(sum_of(5, {{1.0, "X0"}}), trivial)), std::invalid_argument);
}

TEST(ti_ops, tfim_commutator_orbit) {
  const std::size_t n = 8;
  auto g = ring(n);
  TISum h1(sum_of(n, {{-0.3, "X0"}}), g), h0(sum_of(n, {{-1.0, "Z0 Z1"}}), g);
  auto c = expand_full(ti_commutator(h1, h0));
  EXPECT_LT(max_coeff_diff(c, commutator(expand_full(h1), expand_full(h0))), 1e-15);
}

TEST(ti_ops, homomorphism_random) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + trial % 6;
    auto g = ring(n);
    TISum a(oracle::random_sum(rng, n, 3), g), b(oracle::random_sum(rng, n, 3), g);
    auto fa = orbit_sum_oracle(a.rep, *g), fb = orbit_sum_oracle(b.rep, *g);
    EXPECT_LT(max_coeff_diff(expand_full(a), fa), 1e-13);
    EXPECT_LT(max_coeff_diff(expand_full(ti_add(a, b)), add(fa, fb)), 1e-12);
    EXPECT_LT(max_coeff_diff(expand_full(ti_multiply(a, b)), multiply(fa, fb)), 1e-11);
    EXPECT_LT(max_coeff_diff(expand_full(ti_commutator(a, b)), commutator(fa, fb)), 1e-11);
  }
}

TEST(ti_ops, two_dimensional_group) {
  std::mt19937_64 rng(5);
  auto g = std::make_shared<TranslationGroup>(TranslationGroup::lattice(12, 3, 2, 2));
  TISum a(oracle::random_sum(rng, 12, 4), g), b(oracle::random_sum(rng, 12, 4), g);
  auto fa = orbit_sum_oracle(a.rep, *g), fb = orbit_sum_oracle(b.rep, *g);
  EXPECT_LT(max_coeff_diff(expand_full(ti_commutator(a, b)), commutator(fa, fb)), 1e-11);
  // Canonical representatives are the smallest translate.
  for (std::size_t i = 0; i < a.rep.size(); ++i)
    for (std::size_t e = 0; e < g->order(); ++e) EXPECT_FALSE(g->apply(a.rep.term(i), e) < a.rep.term(i));
}
