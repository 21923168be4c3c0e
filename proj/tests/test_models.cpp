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

#include "stabsw/models.hpp"

#include "gtest/gtest.h"
#include "stabsw/observables.hpp"
#include "stabsw/sw.hpp"

using namespace stabsw;

namespace {

bool commutes(const PauliSum& a, const PauliSum& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!a.term(i).commutes_with(b.term(j))) return false;
  return true;
}

// The logical strings appended after the H0 generators.
PauliSum global_loops(const LatticeModel& m) {
  PauliSum s(m.nqubits);
  for (std::size_t i = m.h0.generator_indices.size(); i < m.gs.stabilizers.size(); ++i)
    s.push_back(m.gs.stabilizers[i], 1.0);
  return s;
}

// Every group element maps the operator onto itself.
bool translation_invariant(const PauliSum& op, const TranslationGroup& g) {
  for (std::size_t e = 0; e < g.order(); ++e) {
    PauliSum moved(op.nqubits());
    for (std::size_t i = 0; i < op.size(); ++i) moved.push_back(g.apply(op.term(i), e), op.coeff(i));
    if (max_coeff_diff(canonicalize(moved), op) != 0.0) return false;
  }
  return true;
}

void check_common(const LatticeModel& m) {
  EXPECT_EQ(m.gs.nqubits, m.nqubits);
  EXPECT_EQ(m.gs.stabilizers.size(), m.nqubits);
  EXPECT_EQ(m.gs.destabilizers.size(), m.nqubits);
  EXPECT_EQ(rank(m.gs.stab_rows()), m.nqubits);
  EXPECT_TRUE(is_hermitian(m.h1));
  EXPECT_LT(max_coeff_diff(m.h1, scale(m.coupling, m.h1_unit)), 1e-15);
  ASSERT_TRUE(m.translations);
  EXPECT_TRUE(translation_invariant(m.h0.terms, *m.translations));
  EXPECT_TRUE(translation_invariant(m.h1_unit, *m.translations));
  GroundStateEvaluator eval(m.gs);
  for (std::size_t i = 0; i < m.h0.terms.size(); ++i)
    EXPECT_EQ(eval.value(m.h0.terms.row_ptr(i)), m.h0.terms.coeff(i).real() < 0 ? 1 : -1);
}

}  // namespace

TEST(tfim, ordered_frames) {
  for (auto st : {TfimState::kAllUp, TfimState::kAllDown, TfimState::kGhz}) {
    auto m = build_tfim_chain(9, 0.25, st);
    check_common(m);
    EXPECT_EQ(m.kind, "tfim");
    EXPECT_EQ(m.h0.terms.size(), 9u);
    EXPECT_EQ(m.h0.generator_indices.size(), 8u);
    EXPECT_EQ(m.coupling, 0.25);
    EXPECT_EQ(m.translations->order(), 9u);
    EXPECT_EQ(m.observables.count("YY:4"), 1u);
    EXPECT_EQ(m.observables.count("YY:5"), 0u);
  }
  GroundStateEvaluator up(build_tfim_chain(6, 0.1, TfimState::kAllUp).gs);
  GroundStateEvaluator down(build_tfim_chain(6, 0.1, TfimState::kAllDown).gs);
  GroundStateEvaluator ghz(build_tfim_chain(6, 0.1, TfimState::kGhz).gs);
  const auto z3 = PauliTerm::sparse(6, {{3, 'Z'}}), xall = PauliTerm::from_string("XXXXXX");
  EXPECT_EQ(up.value(z3), 1);
  EXPECT_EQ(down.value(z3), -1);
  EXPECT_EQ(ghz.value(z3), 0);
  EXPECT_EQ(ghz.value(xall), 1);
  EXPECT_EQ(up.value(xall), 0);
}

TEST(tfim, paramagnetic_frame_is_dual) {
  // Kramers-Wannier: <Z_0 Z_1> deep in the paramagnet follows the ordered
  // <X> series g/2 + g^3/16 with g = 1/h.
  auto m = build_tfim_chain(10, 4.0, TfimState::kAllRight);
  check_common(m);
  EXPECT_DOUBLE_EQ(m.coupling, 0.25);
  EXPECT_EQ(m.metadata.at("coupling"), "1/h");
  auto g = build_generator(m.h0, m.h1_unit, 4);
  auto zz = PauliSum::from_term(PauliTerm::sparse(10, {{0, 'Z'}, {1, 'Z'}}));
  auto r = expectation(zz, g, m.gs, 4);
  const double want[] = {0.0, 0.5, 0.0, 1.0 / 16.0, 0.0};
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_NEAR(r.orders[k].real(), want[k], 1e-13);
  EXPECT_THROW(build_tfim_chain(10, 0.0, TfimState::kAllRight), std::invalid_argument);
  EXPECT_THROW(build_tfim_chain(2, 0.1, TfimState::kAllUp), std::invalid_argument);
}

TEST(toric_square, structure) {
  auto m = build_toric_square(4, 3, 0.1);
  check_common(m);
  EXPECT_EQ(m.nqubits, 24u);
  EXPECT_EQ(m.h0.terms.size(), 24u);
  EXPECT_EQ(m.h0.generator_indices.size(), 22u);
  EXPECT_EQ(m.h1_unit.size(), 24u);
  EXPECT_EQ(m.translations->order(), 12u);
  ASSERT_EQ(m.loops.size(), 1u);
  EXPECT_EQ(m.loops[0].name, "x_loop:1");
  EXPECT_EQ(m.observables.count("B:3,0"), 1u);
  // Every qubit sits on two vertices and two plaquettes.
  std::vector<int> zc(24, 0), xc(24, 0);
  for (std::size_t i = 0; i < m.h0.terms.size(); ++i)
    for (auto q : m.h0.terms.term(i).support()) (m.h0.terms.term(i).letter(q) == 'Z' ? zc : xc)[q]++;
  for (std::size_t q = 0; q < 24; ++q) {
    EXPECT_EQ(zc[q], 2);
    EXPECT_EQ(xc[q], 2);
  }
}

TEST(toric_square, loops) {
  auto m = build_toric_square(6, 6, 0.1);
  ASSERT_EQ(m.loops.size(), 3u);
  GroundStateEvaluator eval(m.gs);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto& l = m.loops[k - 1];
    EXPECT_EQ(l.name, "x_loop:" + std::to_string(k));
    EXPECT_EQ(l.circumference, 4 * k);
    EXPECT_EQ(l.op.term(0).weight(), 4 * k);
    EXPECT_TRUE(commutes(l.op, m.h0.terms));
    EXPECT_EQ(eval.value(l.op), Complex(1.0));
  }
  auto z = loop_observable(m, LoopKind::kZLoop, 2, 3);
  EXPECT_EQ(z.name, "z_loop:2x3");
  EXPECT_EQ(z.circumference, 10u);
  EXPECT_EQ(eval.value(z.op), Complex(1.0));
  EXPECT_THROW(loop_observable(m, LoopKind::kXLoop, 6, 1), std::out_of_range);
  EXPECT_THROW(loop_observable(m, LoopKind::kXLoop, 1, 1, 1), std::out_of_range);
  EXPECT_THROW(build_toric_square(1, 4, 0.1), std::invalid_argument);
}

TEST(toric_square, global_loops_commute_with_field) {
  auto m = build_toric_square(4, 4, 0.2);
  EXPECT_EQ(global_loops(m).size(), 2u);
  EXPECT_TRUE(commutes(global_loops(m), m.h1_unit));
}

TEST(toric_bilayer, structure_and_layer_symmetry) {
  auto m = build_toric_bilayer(4, 4, 0.2);
  check_common(m);
  EXPECT_EQ(m.nqubits, 64u);
  EXPECT_EQ(m.h1_unit.size(), 32u);
  for (std::size_t i = 0; i < m.h1_unit.size(); ++i) {
    auto s = m.h1_unit.term(i).support();
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[1] - s[0], 32u);
  }
  EXPECT_EQ(m.translations->order(), 16u);
  ASSERT_EQ(m.observables.count("x_loop:2@2"), 1u);
  auto g = build_generator_ti(m.h0, m.h1_unit, 4, m.translations);
  GroundStateEvaluator eval(m.gs);
  Conjugator conj(g, 4);
  for (std::size_t k = 1; k <= 2; ++k) {
    auto a = expectation_from_orders("a", conj.expand(m.observables.at("x_loop:" + std::to_string(k))), eval);
    auto b = expectation_from_orders("b", conj.expand(m.observables.at("x_loop:" + std::to_string(k) + "@2")), eval);
    EXPECT_EQ(a.orders[0], Complex(1.0));
    for (std::size_t o = 0; o <= 4; ++o) EXPECT_NEAR(std::abs(a.orders[o] - b.orders[o]), 0.0, 1e-13);
  }
}

TEST(kagome, structure) {
  for (auto pert : {KagomePerturbation::kXXIsing, KagomePerturbation::kZZIsing, KagomePerturbation::kHeisenberg}) {
    auto m = build_kagome_tc(3, 4, pert, 0.1, KagomeFrame::kXLoops);
    check_common(m);
    EXPECT_EQ(m.nqubits, 36u);
    EXPECT_EQ(m.h0.terms.size(), 36u);
    EXPECT_EQ(m.h0.generator_indices.size(), 34u);
    const std::size_t per_bond = pert == KagomePerturbation::kHeisenberg ? 3 : 1;
    EXPECT_EQ(m.h1_unit.size(), per_bond * 6 * 12);
  }
  const KagomeLattice kg{5, 5};
  EXPECT_EQ(kg.bonds().size(), 150u);
  std::vector<int> degree(kg.qubits(), 0);
  for (auto [p, q] : kg.bonds()) {
    degree[p]++;
    degree[q]++;
  }
  for (int d : degree) EXPECT_EQ(d, 4);
}

TEST(kagome, loops) {
  auto m = build_kagome_tc(6, 6, KagomePerturbation::kXXIsing, 0.1, KagomeFrame::kXLoops);
  EXPECT_TRUE(m.warnings.empty());
  GroundStateEvaluator eval(m.gs);
  ASSERT_EQ(m.loops.size(), 6u);
  for (const auto& l : m.loops) {
    const std::size_t k = l.extent_x;
    EXPECT_EQ(l.circumference, l.kind == LoopKind::kXLoop ? 4 * k : 8 * k - 2) << l.name;
    EXPECT_EQ(eval.value(l.op), Complex(1.0)) << l.name;
    EXPECT_TRUE(commutes(l.op, m.h0.terms)) << l.name;
  }
  EXPECT_EQ(m.observables.count("x_loop:1x2"), 1u);
  EXPECT_EQ(m.observables.count("z_loop:2x1"), 1u);
  EXPECT_TRUE(commutes(global_loops(m), m.h1_unit));
  auto zf = build_kagome_tc(4, 4, KagomePerturbation::kXXIsing, 0.1, KagomeFrame::kZLoops);
  EXPECT_FALSE(commutes(global_loops(zf), zf.h1_unit));
}

TEST(kagome, frame_warnings) {
  EXPECT_FALSE(build_kagome_tc(2, 2, KagomePerturbation::kXXIsing, 0.1, KagomeFrame::kZLoops).warnings.empty());
  EXPECT_FALSE(build_kagome_tc(2, 2, KagomePerturbation::kZZIsing, 0.1, KagomeFrame::kXLoops).warnings.empty());
  EXPECT_TRUE(build_kagome_tc(2, 2, KagomePerturbation::kZZIsing, 0.1, KagomeFrame::kZLoops).warnings.empty());
  EXPECT_FALSE(build_kagome_tc(2, 2, KagomePerturbation::kHeisenberg, 0.1, KagomeFrame::kXLoops).warnings.empty());
}

TEST(models, large_lattices) {
  EXPECT_EQ(build_toric_square(10, 10, 0.1).nqubits, 200u);
  EXPECT_EQ(build_toric_bilayer(10, 10, 0.1).nqubits, 400u);
  auto k = build_kagome_tc(10, 10, KagomePerturbation::kXXIsing, 0.1, KagomeFrame::kXLoops);
  EXPECT_EQ(k.nqubits, 300u);
  EXPECT_EQ(k.h1_unit.size(), 600u);
  EXPECT_EQ(k.loops.size(), 10u);
}

TEST(models, resolve_observable) {
  auto m = build_tfim_chain(6, 0.2, TfimState::kAllUp);
  EXPECT_EQ(resolve_observable(m, "Z0"), m.observables.at("Z0"));
  EXPECT_EQ(resolve_observable(m, "IXIIIY").term(0), PauliTerm::from_string("IXIIIY"));
  EXPECT_EQ(resolve_observable(m, "X1 Y5").term(0), PauliTerm::from_string("IXIIIY"));
  EXPECT_THROW(resolve_observable(m, "loop"), ParseError);
  EXPECT_THROW(loop_observable(m, LoopKind::kXLoop, 1, 1), std::invalid_argument);
}
