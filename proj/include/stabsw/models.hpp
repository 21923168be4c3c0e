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

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/pauli.hpp"
#include "stabsw/stabilizer.hpp"
#include "stabsw/translation.hpp"

namespace stabsw {

enum class TfimState { kAllUp, kAllDown, kGhz, kAllRight };
enum class KagomePerturbation { kXXIsing, kZZIsing, kHeisenberg };
enum class KagomeFrame { kXLoops, kZLoops };
enum class LoopKind { kXLoop, kZLoop };

struct LoopObservable {
  std::string name;
  LoopKind kind = LoopKind::kXLoop;
  std::size_t extent_x = 0, extent_y = 0;
  std::size_t layer = 0;
  std::size_t circumference = 0;  // qubits in the boundary string
  PauliSum op;
};

/// A perturbed stabilizer model. H1 = coupling * h1_unit.
struct LatticeModel {
  std::string kind;
  std::size_t nqubits = 0;
  std::size_t lx = 0, ly = 0;
  StabilizerHamiltonian h0;
  PauliSum h1_unit;
  double coupling = 0.0;
  PauliSum h1;
  GroundStateSpec gs;
  std::map<std::string, PauliSum> observables;
  std::vector<LoopObservable> loops;
  std::shared_ptr<const TranslationGroup> translations;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> warnings;
};

namespace detail {

inline PauliTerm string_on(std::size_t n, const std::vector<std::size_t>& sites, char letter) {
  PauliTerm t(n);
  for (auto q : sites) t.set(q, letter);
  return t;
}

// Product of strings with phase tracked; returns the +1 string and i^k.
inline std::pair<PauliTerm, int> product_of(std::size_t n, const std::vector<PauliTerm>& factors) {
  PauliTerm acc(n);
  int k = 0;
  for (const auto& f : factors) {
    auto [p, dk] = multiply_terms(acc, f);
    acc = std::move(p);
    k += dk;
  }
  return {acc, ((k % 4) + 4) % 4};
}

inline void finish_model(LatticeModel& m, const PauliSum& h0_terms, const std::vector<SignedTerm>& extra) {
  m.h0 = build_stabilizer_hamiltonian(h0_terms);
  m.h1 = scale(m.coupling, m.h1_unit);
  m.gs = complete_ground_state(m.h0, extra);
  m.nqubits = h0_terms.nqubits();
}

inline LoopObservable make_loop(std::string name, LoopKind kind, std::size_t ex, std::size_t ey, std::size_t layer,
                                std::size_t n, const std::vector<PauliTerm>& tiles) {
  auto [p, k] = product_of(n, tiles);
  if (k != 0) throw std::logic_error("loop tiles do not multiply to a +1 string");
  LoopObservable l{std::move(name), kind, ex, ey, layer, p.weight(), PauliSum::from_term(p)};
  return l;
}

inline void check_extents(std::size_t lx, std::size_t ly) {
  if (lx < 2 || ly < 2)
    throw std::invalid_argument("lattice extents must be at least 2 (got " + std::to_string(lx) + "x" + std::to_string(ly) + ")");
}

inline void check_loop_extent(std::size_t ex, std::size_t ey, std::size_t lx, std::size_t ly) {
  if (ex == 0 || ey == 0 || ex >= lx || ey >= ly)
    throw std::out_of_range("loop extent " + std::to_string(ex) + "x" + std::to_string(ey) + " does not fit a " +
                            std::to_string(lx) + "x" + std::to_string(ly) + " torus");
}

}  // namespace detail

// ---- transverse field Ising chain -----------------------------------------

/// H = -sum Z_j Z_{j+1} - h sum X_j on a ring. The paramagnetic frame
/// (kAllRight) uses the rescaled H/h = -sum X_j - (1/h) sum Z_j Z_{j+1}, so
/// its coupling is 1/h.
inline LatticeModel build_tfim_chain(std::size_t n, double h, TfimState state) {
  if (n < 3) throw std::invalid_argument("TFIM ring needs N >= 3 (got " + std::to_string(n) + ")");
  LatticeModel m;
  m.kind = "tfim";
  m.lx = n;
  m.ly = 1;
  PauliSum zz(n), x(n);
  for (std::size_t j = 0; j < n; ++j) {
    zz.push_back(PauliTerm::sparse(n, {{j, 'Z'}, {(j + 1) % n, 'Z'}}), -1.0);
    x.push_back(PauliTerm::sparse(n, {{j, 'X'}}), -1.0);
  }
  zz = canonicalize(zz);
  x = canonicalize(x);
  std::vector<SignedTerm> extra;
  PauliTerm all_x(n);
  for (std::size_t q = 0; q < n; ++q) all_x.set(q, 'X');
  switch (state) {
    case TfimState::kAllUp: extra.push_back({PauliTerm::sparse(n, {{n - 1, 'Z'}}), 1}); m.metadata["state"] = "all_up"; break;
    case TfimState::kAllDown: extra.push_back({PauliTerm::sparse(n, {{n - 1, 'Z'}}), -1}); m.metadata["state"] = "all_down"; break;
    case TfimState::kGhz: extra.push_back({all_x, 1}); m.metadata["state"] = "ghz"; break;
    case TfimState::kAllRight: m.metadata["state"] = "all_right"; break;
  }
  if (state == TfimState::kAllRight) {
    if (h == 0.0) throw std::invalid_argument("paramagnetic frame needs h != 0");
    m.h1_unit = zz;
    m.coupling = 1.0 / h;
    m.metadata["coupling"] = "1/h";
    detail::finish_model(m, x, extra);
  } else {
    m.h1_unit = x;
    m.coupling = h;
    m.metadata["coupling"] = "h";
    detail::finish_model(m, zz, extra);
  }
  m.translations = std::make_shared<TranslationGroup>(TranslationGroup::lattice(n, 1, n, 1));
  m.observables["Z0"] = PauliSum::from_term(PauliTerm::sparse(n, {{0, 'Z'}}));
  m.observables["X0"] = PauliSum::from_term(PauliTerm::sparse(n, {{0, 'X'}}));
  for (std::size_t d = 1; d <= std::min<std::size_t>(n / 2, 8); ++d)
    m.observables["YY:" + std::to_string(d)] = PauliSum::from_term(PauliTerm::sparse(n, {{0, 'Y'}, {d, 'Y'}}));
  return m;
}

// ---- square-lattice toric code ----------------------------------------------

/// Edge qubits of an lx x ly torus: cell c = y lx + x holds the horizontal
/// edge 2c and the vertical edge 2c + 1; `offset` shifts a whole layer.
struct SquareLattice {
  std::size_t lx, ly, offset = 0;
  std::size_t h(std::ptrdiff_t x, std::ptrdiff_t y) const { return offset + 2 * cell(x, y); }
  std::size_t v(std::ptrdiff_t x, std::ptrdiff_t y) const { return offset + 2 * cell(x, y) + 1; }
  std::size_t cell(std::ptrdiff_t x, std::ptrdiff_t y) const {
    const auto X = static_cast<std::ptrdiff_t>(lx), Y = static_cast<std::ptrdiff_t>(ly);
    return static_cast<std::size_t>(((y % Y + Y) % Y) * X + ((x % X + X) % X));
  }
  std::size_t qubits() const { return 2 * lx * ly; }
  std::vector<std::size_t> vertex(std::ptrdiff_t x, std::ptrdiff_t y) const { return {h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)}; }
  std::vector<std::size_t> plaquette(std::ptrdiff_t x, std::ptrdiff_t y) const { return {h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)}; }
};

namespace detail {

inline void add_toric_layer(const SquareLattice& sq, std::size_t n, PauliSum& h0, std::vector<SignedTerm>& extra) {
  for (std::size_t y = 0; y < sq.ly; ++y)
    for (std::size_t x = 0; x < sq.lx; ++x) {
      h0.push_back(string_on(n, sq.vertex(x, y), 'Z'), -1.0);
      h0.push_back(string_on(n, sq.plaquette(x, y), 'X'), -1.0);
    }
  std::vector<std::size_t> gx, gy;
  for (std::size_t x = 0; x < sq.lx; ++x) gx.push_back(sq.v(x, 0));
  for (std::size_t y = 0; y < sq.ly; ++y) gy.push_back(sq.h(0, y));
  extra.push_back({string_on(n, gx, 'Z'), 1});
  extra.push_back({string_on(n, gy, 'Z'), 1});
}

}  // namespace detail

/// k_x x k_y block of plaquettes (X loop) or vertices (Z loop) at the origin.
inline LoopObservable square_loop(const SquareLattice& sq, std::size_t n, LoopKind kind, std::size_t ex, std::size_t ey,
                                  std::size_t layer = 0) {
  detail::check_loop_extent(ex, ey, sq.lx, sq.ly);
  std::vector<PauliTerm> tiles;
  for (std::size_t y = 0; y < ey; ++y)
    for (std::size_t x = 0; x < ex; ++x)
      tiles.push_back(kind == LoopKind::kXLoop ? detail::string_on(n, sq.plaquette(x, y), 'X')
                                               : detail::string_on(n, sq.vertex(x, y), 'Z'));
  std::string name = (kind == LoopKind::kXLoop ? "x_loop:" : "z_loop:") + std::to_string(ex);
  if (ey != ex) name += "x" + std::to_string(ey);
  if (layer > 0) name += "@" + std::to_string(layer + 1);
  return detail::make_loop(std::move(name), kind, ex, ey, layer, n, tiles);
}

inline LatticeModel build_toric_square(std::size_t lx, std::size_t ly, double h) {
  detail::check_extents(lx, ly);
  LatticeModel m;
  m.kind = "toric_square";
  m.lx = lx;
  m.ly = ly;
  const SquareLattice sq{lx, ly};
  const std::size_t n = sq.qubits();
  PauliSum h0(n);
  std::vector<SignedTerm> extra;
  detail::add_toric_layer(sq, n, h0, extra);
  m.h1_unit = PauliSum(n);
  for (std::size_t q = 0; q < n; ++q) m.h1_unit.push_back(PauliTerm::sparse(n, {{q, 'Z'}}), -1.0);
  m.h1_unit = canonicalize(m.h1_unit);
  m.coupling = h;
  detail::finish_model(m, canonicalize(h0), extra);
  m.translations = std::make_shared<TranslationGroup>(TranslationGroup::lattice(n, 2, lx, ly));
  for (std::size_t k = 1; k <= std::min(lx, ly) / 2; ++k) m.loops.push_back(square_loop(sq, n, LoopKind::kXLoop, k, k));
  for (const auto& l : m.loops) m.observables[l.name] = l.op;
  m.observables["B:0,0"] = PauliSum::from_term(detail::string_on(n, sq.plaquette(0, 0), 'X'));
  for (std::size_t d = 1; d < lx; ++d)
    m.observables["B:" + std::to_string(d) + ",0"] = PauliSum::from_term(detail::string_on(n, sq.plaquette(d, 0), 'X'));
  m.metadata["loop_shape"] = "k x k plaquette block";
  return m;
}

/// Two toric-code layers (layer 2 offset by 2 lx ly) with H1 = -J sum Z^(1)_i Z^(2)_i.
inline LatticeModel build_toric_bilayer(std::size_t lx, std::size_t ly, double j) {
  detail::check_extents(lx, ly);
  LatticeModel m;
  m.kind = "toric_bilayer";
  m.lx = lx;
  m.ly = ly;
  const std::size_t per = 2 * lx * ly, n = 2 * per;
  const SquareLattice l1{lx, ly, 0}, l2{lx, ly, per};
  PauliSum h0(n);
  std::vector<SignedTerm> extra;
  detail::add_toric_layer(l1, n, h0, extra);
  detail::add_toric_layer(l2, n, h0, extra);
  m.h1_unit = PauliSum(n);
  for (std::size_t q = 0; q < per; ++q) m.h1_unit.push_back(PauliTerm::sparse(n, {{q, 'Z'}, {q + per, 'Z'}}), -1.0);
  m.h1_unit = canonicalize(m.h1_unit);
  m.coupling = j;
  detail::finish_model(m, canonicalize(h0), extra);
  m.translations = std::make_shared<TranslationGroup>(TranslationGroup::lattice(n, 2, lx, ly, {0, per}));
  for (std::size_t k = 1; k <= std::min(lx, ly) / 2; ++k) m.loops.push_back(square_loop(l1, n, LoopKind::kXLoop, k, k, 0));
  for (const auto& l : m.loops) m.observables[l.name] = l.op;
  for (std::size_t k = 1; k <= std::min(lx, ly) / 2; ++k) {
    auto l = square_loop(l2, n, LoopKind::kXLoop, k, k, 1);
    m.observables[l.name] = l.op;
  }
  m.metadata["loop_shape"] = "k x k plaquette block, layer 1";
  return m;
}

// ---- kagome toric code --------------------------------------------------------

/// Kagome sites: cell c = y lx + x holds A = 3c (corner), B = 3c + 1 (along a1),
/// C = 3c + 2 (along a2).
struct KagomeLattice {
  std::size_t lx, ly;
  std::size_t cell(std::ptrdiff_t x, std::ptrdiff_t y) const {
    const auto X = static_cast<std::ptrdiff_t>(lx), Y = static_cast<std::ptrdiff_t>(ly);
    return static_cast<std::size_t>(((y % Y + Y) % Y) * X + ((x % X + X) % X));
  }
  std::size_t a(std::ptrdiff_t x, std::ptrdiff_t y) const { return 3 * cell(x, y); }
  std::size_t b(std::ptrdiff_t x, std::ptrdiff_t y) const { return 3 * cell(x, y) + 1; }
  std::size_t c(std::ptrdiff_t x, std::ptrdiff_t y) const { return 3 * cell(x, y) + 2; }
  std::size_t qubits() const { return 3 * lx * ly; }
  std::vector<std::size_t> up(std::ptrdiff_t x, std::ptrdiff_t y) const { return {a(x, y), b(x, y), c(x, y)}; }
  std::vector<std::size_t> down(std::ptrdiff_t x, std::ptrdiff_t y) const { return {a(x, y), b(x - 1, y), c(x, y - 1)}; }
  std::vector<std::size_t> hexagon(std::ptrdiff_t x, std::ptrdiff_t y) const {
    return {b(x, y), c(x, y), a(x + 1, y), a(x, y + 1), b(x, y + 1), c(x + 1, y)};
  }
  /// Nearest-neighbour bonds, each once.
  std::vector<std::pair<std::size_t, std::size_t>> bonds() const {
    std::set<std::pair<std::size_t, std::size_t>> s;
    auto add = [&](std::size_t p, std::size_t q) { s.insert({std::min(p, q), std::max(p, q)}); };
    for (std::size_t y = 0; y < ly; ++y)
      for (std::size_t x = 0; x < lx; ++x) {
        const auto X = static_cast<std::ptrdiff_t>(x), Y = static_cast<std::ptrdiff_t>(y);
        add(a(X, Y), b(X, Y));
        add(a(X, Y), c(X, Y));
        add(b(X, Y), c(X, Y));
        add(a(X, Y), b(X - 1, Y));
        add(a(X, Y), c(X, Y - 1));
        add(b(X - 1, Y), c(X, Y - 1));
      }
    return {s.begin(), s.end()};
  }
};

/// X loop: up and down triangles of a k_x x k_y block of cells.
/// Z loop: hexagons of a k_x x k_y block. Both anchored at the origin cell.
inline LoopObservable kagome_loop(const KagomeLattice& kg, LoopKind kind, std::size_t ex, std::size_t ey) {
  detail::check_loop_extent(ex, ey, kg.lx, kg.ly);
  const std::size_t n = kg.qubits();
  std::vector<PauliTerm> tiles;
  for (std::size_t y = 0; y < ey; ++y)
    for (std::size_t x = 0; x < ex; ++x) {
      if (kind == LoopKind::kXLoop) {
        tiles.push_back(detail::string_on(n, kg.up(x, y), 'X'));
        tiles.push_back(detail::string_on(n, kg.down(x, y), 'X'));
      } else {
        tiles.push_back(detail::string_on(n, kg.hexagon(x, y), 'Z'));
      }
    }
  std::string name = (kind == LoopKind::kXLoop ? "x_loop:" : "z_loop:") + std::to_string(ex);
  if (ey != ex) name += "x" + std::to_string(ey);
  return detail::make_loop(std::move(name), kind, ex, ey, 0, n, tiles);
}

inline LatticeModel build_kagome_tc(std::size_t lx, std::size_t ly, KagomePerturbation pert, double j, KagomeFrame frame) {
  detail::check_extents(lx, ly);
  LatticeModel m;
  m.kind = "kagome_tc";
  m.lx = lx;
  m.ly = ly;
  const KagomeLattice kg{lx, ly};
  const std::size_t n = kg.qubits();
  PauliSum h0(n);
  for (std::size_t y = 0; y < ly; ++y)
    for (std::size_t x = 0; x < lx; ++x) {
      h0.push_back(detail::string_on(n, kg.up(x, y), 'X'), -1.0);
      h0.push_back(detail::string_on(n, kg.down(x, y), 'X'), -1.0);
      h0.push_back(detail::string_on(n, kg.hexagon(x, y), 'Z'), -1.0);
    }
  m.h1_unit = PauliSum(n);
  for (auto [p, q] : kg.bonds()) {
    if (pert == KagomePerturbation::kXXIsing || pert == KagomePerturbation::kHeisenberg)
      m.h1_unit.push_back(PauliTerm::sparse(n, {{p, 'X'}, {q, 'X'}}), 1.0);
    if (pert == KagomePerturbation::kZZIsing || pert == KagomePerturbation::kHeisenberg)
      m.h1_unit.push_back(PauliTerm::sparse(n, {{p, 'Z'}, {q, 'Z'}}), 1.0);
    if (pert == KagomePerturbation::kHeisenberg) m.h1_unit.push_back(PauliTerm::sparse(n, {{p, 'Y'}, {q, 'Y'}}), 1.0);
  }
  m.h1_unit = canonicalize(m.h1_unit);
  m.coupling = j;

  std::vector<std::size_t> line1, line2;
  for (std::size_t x = 0; x < lx; ++x) {
    line1.push_back(kg.a(x, 0));
    line1.push_back(kg.b(x, 0));
  }
  for (std::size_t y = 0; y < ly; ++y) {
    line2.push_back(kg.a(0, y));
    line2.push_back(kg.c(0, y));
  }
  const char letter = frame == KagomeFrame::kXLoops ? 'X' : 'Z';
  std::vector<SignedTerm> extra{{detail::string_on(n, line1, letter), 1}, {detail::string_on(n, line2, letter), 1}};
  detail::finish_model(m, canonicalize(h0), extra);

  static const char* kPert[] = {"xx_ising", "zz_ising", "heisenberg"};
  m.metadata["perturbation"] = kPert[static_cast<int>(pert)];
  m.metadata["frame"] = frame == KagomeFrame::kXLoops ? "x_loops" : "z_loops";
  m.metadata["loop_shape"] = "k x k rhombic cell block (x_loop: up+down triangles, z_loop: hexagons)";
  if ((pert == KagomePerturbation::kXXIsing && frame == KagomeFrame::kZLoops) ||
      (pert == KagomePerturbation::kZZIsing && frame == KagomeFrame::kXLoops) || pert == KagomePerturbation::kHeisenberg)
    m.warnings.push_back("global loops of the chosen frame do not commute with the perturbation");

  m.translations = std::make_shared<TranslationGroup>(TranslationGroup::lattice(n, 3, lx, ly));
  for (std::size_t k = 1; k <= std::min(lx, ly) / 2; ++k) {
    m.loops.push_back(kagome_loop(kg, LoopKind::kXLoop, k, k));
    m.loops.push_back(kagome_loop(kg, LoopKind::kZLoop, k, k));
  }
  for (const auto& l : m.loops) m.observables[l.name] = l.op;
  for (auto [ex, ey] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 1}})
    for (auto kind : {LoopKind::kXLoop, LoopKind::kZLoop})
      if (ey < ly && ex < lx) {
        auto l = kagome_loop(kg, kind, ex, ey);
        m.observables[l.name] = l.op;
      }
  return m;
}

/// Rebuilds the loop of a model by family and extent.
inline LoopObservable loop_observable(const LatticeModel& m, LoopKind kind, std::size_t ex, std::size_t ey,
                                      std::size_t layer = 0) {
  if (m.kind == "toric_square" || m.kind == "toric_bilayer") {
    if (layer > (m.kind == "toric_bilayer" ? 1u : 0u)) throw std::out_of_range("no such layer");
    return square_loop(SquareLattice{m.lx, m.ly, layer * 2 * m.lx * m.ly}, m.nqubits, kind, ex, ey, layer);
  }
  if (m.kind == "kagome_tc") return kagome_loop(KagomeLattice{m.lx, m.ly}, kind, ex, ey);
  throw std::invalid_argument("model '" + m.kind + "' has no loop observables");
}

/// A named observable of the model, or a Pauli string in dense or sparse form.
inline PauliSum resolve_observable(const LatticeModel& m, const std::string& name) {
  if (auto it = m.observables.find(name); it != m.observables.end()) return it->second;
  try {
    return PauliSum::from_term(parse_term(name, m.nqubits));
  } catch (const ParseError& e) {
    throw ParseError("unknown observable '" + name + "': " + e.what());
  }
}

}  // namespace stabsw
