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

#include "stabsw/stabilizer.hpp"

#include <Eigen/Eigenvalues>
#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace stabsw;
using stabsw::oracle::dense;

namespace {

PauliSum ring_bonds(std::size_t n) {
  PauliSum s(n);
  for (std::size_t j = 0; j < n; ++j) s.push_back(PauliTerm::sparse(n, {{j, 'Z'}, {(j + 1) % n, 'Z'}}), -1.0);
  return canonicalize(s);
}

// Toric code on an L x L torus; h(x,y) = 2c, v(x,y) = 2c+1 with c = y L + x.
PauliSum toric_terms(std::size_t L) {
  const std::size_t n = 2 * L * L;
  auto h = [&](std::size_t x, std::size_t y) { return 2 * ((y % L) * L + x % L); };
  auto v = [&](std::size_t x, std::size_t y) { return 2 * ((y % L) * L + x % L) + 1; };
  PauliSum s(n);
  for (std::size_t y = 0; y < L; ++y)
    for (std::size_t x = 0; x < L; ++x) {
      PauliTerm a(n), b(n);
      for (auto q : {h(x, y), h(x + L - 1, y), v(x, y), v(x, y + L - 1)}) a.set(q, 'Z');
      for (auto q : {h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)}) b.set(q, 'X');
      s.push_back(a, -1.0);
      s.push_back(b, -1.0);
    }
  return canonicalize(s);
}

}  // namespace

TEST(stabilizer_hamiltonian, ring_rank) {
  auto h = build_stabilizer_hamiltonian(ring_bonds(4));
  EXPECT_EQ(h.terms.size(), 4u);
  EXPECT_EQ(h.num_generators(), 3u);
  EXPECT_EQ(rank(h.generator_rows()), 3u);
}

TEST(stabilizer_hamiltonian, toric_rank) {
  auto h = build_stabilizer_hamiltonian(toric_terms(2));
  EXPECT_EQ(h.terms.size(), 8u);
  EXPECT_EQ(h.num_generators(), 6u);
}

TEST(stabilizer_hamiltonian, rejects_bad_input) {
  PauliSum xz(1);
  xz.push_back(PauliTerm::from_string("X"), -1.0);
  xz.push_back(PauliTerm::from_string("Z"), -1.0);
  EXPECT_THROW(build_stabilizer_hamiltonian(xz), CommutationError);
  EXPECT_THROW(build_stabilizer_hamiltonian(PauliSum::from_term(PauliTerm::from_string("Z"), 1.0)), HamiltonianError);
  EXPECT_THROW(build_stabilizer_hamiltonian(PauliSum::from_term(PauliTerm::from_string("Z"), Complex(-1, 0.5))),
               HamiltonianError);
}

TEST(excitation_profile, examples) {
  auto h = build_stabilizer_hamiltonian(ring_bonds(6));
  auto p = excitation_profile(PauliTerm::sparse(6, {{2, 'X'}}), h);
  EXPECT_EQ(p.flipped.size(), 2u);
  EXPECT_DOUBLE_EQ(p.delta_e, 4.0);
  auto q = excitation_profile(PauliTerm::sparse(6, {{2, 'Z'}}), h);
  EXPECT_TRUE(q.flipped.empty());
  EXPECT_EQ(q.delta_e, 0.0);

  auto t = build_stabilizer_hamiltonian(toric_terms(3));
  auto z = excitation_profile(PauliTerm::sparse(18, {{4, 'Z'}}), t);
  EXPECT_EQ(z.flipped.size(), 2u);
  EXPECT_DOUBLE_EQ(z.delta_e, 4.0);
}

TEST(excitation_profile, matches_dense_spectrum) {
  // Random weighted H0 from a random stabilizer group; compare the energy of
  // P|0> with the dense ground energy.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> w(0.3, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 5;
    auto gens = oracle::random_stabilizers(rng, n, 40);
    PauliSum terms(n);
    for (auto& g : gens) terms.push_back(g.term, -w(rng));
    auto h = build_stabilizer_hamiltonian(terms);
    auto dh = dense(h.terms);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(dh);
    const oracle::Vec g0 = es.eigenvectors().col(0);
    for (int k = 0; k < 10; ++k) {
      auto p = oracle::random_term(rng, n);
      const oracle::Vec ex = dense(p) * g0;
      const double e = (ex.adjoint() * dh * ex)(0, 0).real();
      EXPECT_NEAR(excitation_profile(p, h).delta_e, e - es.eigenvalues()(0), 1e-10);
    }
  }
}

TEST(centralizer, examples) {
  BitMatrix z(1, 2);
  z.set(0, 1, true);
  auto c = centralizer_basis(z);
  ASSERT_EQ(c.rows(), 1u);
  EXPECT_EQ(term_from_check_row(c, 0).str(), "Z");
  EXPECT_EQ(centralizer_basis(BitMatrix(0, 8)).rows(), 8u);
  std::mt19937_64 rng(1);
  auto gens = oracle::random_stabilizers(rng, 5, 30);
  PauliSum s(5);
  for (auto& g : gens) s.push_back(g.term, 1.0);
  EXPECT_EQ(centralizer_basis(check_matrix(s)).rows(), 5u);
}

TEST(destabilizers, single_qubit) {
  BitMatrix z(1, 2);
  z.set(0, 1, true);
  auto d = compute_destabilizers(z);
  const auto letter = term_from_check_row(d, 0).str();
  EXPECT_TRUE(letter == "X" || letter == "Y");
}

TEST(destabilizers, chain_identity) {
  const std::size_t n = 6;
  auto h = build_stabilizer_hamiltonian(ring_bonds(n));
  auto gs = complete_ground_state(h, {{PauliTerm::sparse(n, {{n - 1, 'Z'}}), 1}});
  EXPECT_EQ(symplectic_product(gs.destab_rows(), gs.stab_rows()), BitMatrix::identity(n));
}

TEST(destabilizers, random_identity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    auto gs = make_ground_state(n, oracle::random_stabilizers(rng, n, 50));
    EXPECT_EQ(symplectic_product(gs.destab_rows(), gs.stab_rows()), BitMatrix::identity(n));
  }
}

TEST(complete_ground_state, tfim_frames_match_dense_states) {
  const std::size_t n = 5;
  auto h = build_stabilizer_hamiltonian(ring_bonds(n));
  PauliTerm all_x(n);
  for (std::size_t q = 0; q < n; ++q) all_x.set(q, 'X');
  auto up = complete_ground_state(h, {{PauliTerm::sparse(n, {{n - 1, 'Z'}}), 1}});
  auto down = complete_ground_state(h, {{PauliTerm::sparse(n, {{n - 1, 'Z'}}), -1}});
  auto ghz = complete_ground_state(h, {{all_x, 1}});
  auto vu = oracle::stabilizer_state(up), vd = oracle::stabilizer_state(down), vg = oracle::stabilizer_state(ghz);
  EXPECT_NEAR(std::abs(vu(0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(vd((1 << n) - 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(vg(0)), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(std::abs(vg((1 << n) - 1)), std::sqrt(0.5), 1e-12);
}

TEST(complete_ground_state, errors) {
  const std::size_t n = 4;
  auto h = build_stabilizer_hamiltonian(ring_bonds(n));
  EXPECT_THROW(complete_ground_state(h, {{PauliTerm::sparse(n, {{0, 'X'}}), 1}}), CommutationError);
  EXPECT_THROW(complete_ground_state(h, {}), RankDeficiency);
  EXPECT_THROW(complete_ground_state(h, {{PauliTerm::sparse(n, {{0, 'Z'}}), 1}, {PauliTerm::sparse(n, {{1, 'Z'}}), 1}}),
               HamiltonianError);
  EXPECT_THROW(complete_ground_state(h, {{PauliTerm::sparse(n, {{0, 'Z'}, {1, 'Z'}}), 1}}), RankDeficiency);
}

TEST(stabilizer_decompose, chain_examples) {
  const std::size_t n = 6;
  auto h = build_stabilizer_hamiltonian(ring_bonds(n));
  auto up = complete_ground_state(h, {{PauliTerm::sparse(n, {{n - 1, 'Z'}}), 1}});
  auto down = complete_ground_state(h, {{PauliTerm::sparse(n, {{n - 1, 'Z'}}), -1}});
  for (std::size_t j = 0; j < n; ++j) {
    auto z = PauliTerm::sparse(n, {{j, 'Z'}});
    EXPECT_EQ(stabilizer_decompose(z, up).sign, 1);
    EXPECT_EQ(stabilizer_decompose(z, down).sign, -1);
  }
  auto id = stabilizer_decompose(PauliTerm(n), up);
  EXPECT_EQ(id.sign, 1);
  EXPECT_TRUE(std::none_of(id.exponents.begin(), id.exponents.end(), [](bool b) { return b; }));
  EXPECT_THROW(stabilizer_decompose(PauliTerm::sparse(n, {{0, 'X'}}), up), CommutationError);
}

TEST(stabilizer_decompose, round_trip_against_dense_state) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto gens = oracle::random_stabilizers(rng, n, 40);
    auto gs = make_ground_state(n, gens);
    auto psi = oracle::stabilizer_state(gs);
    // Random elements of the stabilizer group: products of random subsets.
    for (int k = 0; k < 10; ++k) {
      PauliSum prod = PauliSum::identity(n);
      for (auto& g : gens)
        if (rng() & 1) prod = multiply(prod, PauliSum::from_term(g.term));
      const PauliTerm p = prod.term(0);
      auto d = stabilizer_decompose(p, gs);
      const Complex exact = (psi.adjoint() * dense(p) * psi)(0, 0);
      EXPECT_NEAR(exact.real(), d.sign, 1e-12);
      EXPECT_NEAR(exact.imag(), 0.0, 1e-12);
    }
  }
}

TEST(ground_state_spec, text_round_trip) {
  std::mt19937_64 rng(2);
  auto gs = make_ground_state(4, oracle::random_stabilizers(rng, 4, 20));
  auto back = parse_ground_state(to_text(gs));
  EXPECT_EQ(back.stabilizers, gs.stabilizers);
  EXPECT_EQ(back.signs, gs.signs);
}
