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

#include <chrono>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/pauli.hpp"
#include "stabsw/stabilizer.hpp"
#include "stabsw/translation.hpp"

namespace stabsw {

/// Which flipped H0 term plays s_P in the particular solution.
enum class TieBreak { kFirst, kLast };

struct SolveOptions {
  TieBreak tie_break = TieBreak::kFirst;
  std::size_t term_cap = 20'000'000;
};

/// Particular solution S with (1 - P0)(V + [H0, S]) P0 = 0:
/// S = sum_P c_P / dE_P * s_P P over rows of V that flip at least one H0 term.
inline PauliSum solve_sm(const PauliSum& v, const StabilizerHamiltonian& h, TieBreak tie = TieBreak::kFirst) {
  v.check_size(h.terms);
  const PauliSum& t = h.terms;
  const std::size_t nw = v.nwords(), rw = v.row_words();
  TermAccumulator acc(v.nqubits(), v.size());
  std::vector<std::uint32_t> stamp(t.size(), 0);
  std::vector<Word> tmp(rw);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Word* p = v.row_ptr(i);
    double de = 0.0;
    std::size_t pick = t.size();
    detail::for_each_overlapping(p, nw, h.index, stamp, static_cast<std::uint32_t>(i + 1), [&](std::size_t j) {
      if (!detail::anticommute(p, t.row_ptr(j), nw)) return;
      de += 2.0 * h.weights[j];
      if (pick == t.size() || (tie == TieBreak::kFirst ? j < pick : j > pick)) pick = j;
    });
    if (pick == t.size()) continue;  // block diagonal already
    const Word* s = t.row_ptr(pick);
    for (std::size_t k = 0; k < rw; ++k) tmp[k] = s[k] ^ p[k];
    acc.add(tmp.data(), detail::mul_ipow(v.coeff(i) / de, detail::phase_exponent(s, p, nw)));
  }
  return acc.finish();
}

/// Where operators live during the construction: explicit sums, or
/// translation representatives with right-hand operands expanded on demand.
class OperatorSpace {
 public:
  struct Right {
    PauliSum full;
    SupportIndex index;
  };

  OperatorSpace() = default;
  explicit OperatorSpace(std::shared_ptr<const TranslationGroup> group) : group_(std::move(group)) {}

  bool translation_invariant() const { return group_ != nullptr; }
  const std::shared_ptr<const TranslationGroup>& group() const { return group_; }

  std::shared_ptr<const Right> prepare(const PauliSum& op) const {
    auto r = std::make_shared<Right>();
    r->full = group_ ? expand_orbits(op, *group_) : op;
    r->index = SupportIndex(r->full);
    return r;
  }
  PauliSum reduce(const PauliSum& op) const { return group_ ? orbit_canonicalize(op, *group_) : op; }
  PauliSum expand(const PauliSum& op) const { return group_ ? expand_orbits(op, *group_) : op; }

 private:
  std::shared_ptr<const TranslationGroup> group_;
};

/// Memoized nested commutators of a fixed left operand A with generator orders:
/// N[c][k] = sum over ordered compositions (n_1..n_c) of k of
/// [...[A, S^(n_1)], ..., S^(n_c)], built as N[c][k] = sum_n [N[c-1][k-n], S^(n)].
class CommutatorTower {
 public:
  using Rights = std::vector<std::shared_ptr<const OperatorSpace::Right>>;

  CommutatorTower(PauliSum a, const OperatorSpace* space, const Rights* rights, std::size_t term_cap)
      : a_(std::move(a)), space_(space), rights_(rights), term_cap_(term_cap) {}

  const PauliSum& get(std::size_t c, std::size_t k) {
    if (c == 0) return k == 0 ? a_ : zero();
    if (k < c) return zero();
    if (memo_.size() <= c) memo_.resize(c + 1);
    auto& row = memo_[c];
    if (row.size() <= k) row.resize(k + 1);
    if (row[k]) return *row[k];
    if (rights_->size() < k - c + 1) throw std::logic_error("generator order " + std::to_string(k - c + 1) + " missing");
    TermAccumulator acc(a_.nqubits());
    for (std::size_t n = 1; n + c - 1 <= k; ++n) {
      const PauliSum& inner = get(c - 1, k - n);
      if (inner.empty()) continue;
      const auto& r = *(*rights_)[n - 1];
      commutator_into(acc, inner, r.full, 1.0, &r.index);
      if (acc.size() > term_cap_) throw TermCapExceeded(k, acc.size(), term_cap_);
    }
    row[k] = std::make_unique<PauliSum>(space_->reduce(acc.finish()));
    return *row[k];
  }

 private:
  const PauliSum& zero() {
    if (!zero_) zero_ = std::make_unique<PauliSum>(a_.nqubits());
    return *zero_;
  }

  PauliSum a_;
  const OperatorSpace* space_;
  const Rights* rights_;
  std::size_t term_cap_;
  std::vector<std::vector<std::unique_ptr<PauliSum>>> memo_;
  std::unique_ptr<PauliSum> zero_;
};

inline double inverse_factorial(std::size_t c) {
  double f = 1.0;
  for (std::size_t i = 2; i <= c; ++i) f /= static_cast<double>(i);
  return f;
}

struct OrderStats {
  std::size_t order = 0;
  std::size_t v_terms = 0;
  std::size_t s_terms = 0;  // representatives in translation mode
  double seconds = 0.0;
};

/// S = S^(1) + S^(2) + ...; orders[m-1] is S^(m) as an explicit sum.
struct SWGenerator {
  std::vector<PauliSum> orders;
  std::vector<PauliSum> reps;  // translation representatives, empty in explicit mode
  std::shared_ptr<const TranslationGroup> group;
  std::vector<OrderStats> stats;

  std::size_t max_order() const { return orders.size(); }
};

/// Drives compute_vm / solve_sm order by order and keeps the towers alive
/// so that later orders reuse earlier nested commutators.
class GeneratorBuilder {
 public:
  GeneratorBuilder(const StabilizerHamiltonian& h0, const PauliSum& h1, OperatorSpace space, SolveOptions opts = {})
      : h0_(&h0), space_(std::move(space)), opts_(opts) {
    h0.terms.check_size(h1);
    h0_rep_ = space_.reduce(space_.translation_invariant() ? scale(1.0 / space_.group()->order(), h0.terms) : h0.terms);
    h1_rep_ = space_.reduce(space_.translation_invariant() ? scale(1.0 / space_.group()->order(), h1) : h1);
    if (space_.translation_invariant()) {
      check_invariant(h0_rep_, h0.terms, "H0");
      check_invariant(h1_rep_, h1, "H1");
    }
    h0_tower_ = std::make_unique<CommutatorTower>(h0_rep_, &space_, &rights_, opts_.term_cap);
    h1_tower_ = std::make_unique<CommutatorTower>(h1_rep_, &space_, &rights_, opts_.term_cap);
  }

  std::size_t built_orders() const { return s_.size(); }

  /// V_m in the working representation; needs S^(1..m-1).
  PauliSum vm(std::size_t m) {
    if (m == 0) throw std::invalid_argument("order must be >= 1");
    if (m == 1) return h1_rep_;
    if (s_.size() < m - 1) throw std::logic_error("V_" + std::to_string(m) + " needs lower generator orders");
    TermAccumulator acc(h1_rep_.nqubits());
    for (std::size_t c = 1; c <= m - 1; ++c) acc.add(h1_tower_->get(c, m - 1), inverse_factorial(c));
    for (std::size_t c = 2; c <= m; ++c) acc.add(h0_tower_->get(c, m), inverse_factorial(c));
    return space_.reduce(acc.finish());
  }

  /// Builds S^(m) for the next m.
  const PauliSum& step() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t m = s_.size() + 1;
    PauliSum v;
    try {
      v = vm(m);
    } catch (const TermCapExceeded& e) {
      throw TermCapExceeded(m, e.count(), e.cap());
    }
    PauliSum s = space_.reduce(solve_sm(v, *h0_, opts_.tie_break));
    if (s.size() > opts_.term_cap) throw TermCapExceeded(m, s.size(), opts_.term_cap);
    rights_.push_back(space_.prepare(s));
    stats_.push_back({m, v.size(), s.size(), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    s_.push_back(std::move(s));
    return s_.back();
  }

  /// Supplies S^(m) computed elsewhere (for transformed_orders).
  void push_generator(const PauliSum& s) {
    PauliSum r = space_.translation_invariant() ? space_.reduce(scale(1.0 / space_.group()->order(), s)) : s;
    rights_.push_back(space_.prepare(r));
    s_.push_back(std::move(r));
  }

  /// H^(m) = V_m + [H0, S^(m)] in the working representation.
  PauliSum transformed(std::size_t m) {
    if (s_.size() < m) throw std::logic_error("H^(" + std::to_string(m) + ") needs S^(" + std::to_string(m) + ")");
    return space_.reduce(add(vm(m), h0_tower_->get(1, m)));
  }

  SWGenerator result() const {
    SWGenerator g;
    for (const auto& r : rights_) g.orders.push_back(r->full);
    if (space_.translation_invariant()) g.reps = s_;
    g.group = space_.group();
    g.stats = stats_;
    return g;
  }

  const OperatorSpace& space() const { return space_; }

 private:
  void check_invariant(const PauliSum& rep, const PauliSum& full, const char* what) const {
    if (max_coeff_diff(space_.expand(rep), full) > 1e-12 * std::max(1.0, full.max_abs_coeff()))
      throw std::invalid_argument(std::string(what) + " is not translation invariant");
  }

  const StabilizerHamiltonian* h0_;
  OperatorSpace space_;
  SolveOptions opts_;
  PauliSum h0_rep_, h1_rep_;
  CommutatorTower::Rights rights_;
  std::vector<PauliSum> s_;
  std::vector<OrderStats> stats_;
  std::unique_ptr<CommutatorTower> h0_tower_, h1_tower_;
};

/// V_m from explicit lower orders S^(1..m-1) (only those are read).
inline PauliSum compute_vm(const StabilizerHamiltonian& h0, const PauliSum& h1, const SWGenerator& s, std::size_t m) {
  if (m >= 2 && s.orders.size() < m - 1)
    throw std::invalid_argument("compute_vm(" + std::to_string(m) + ") needs " + std::to_string(m - 1) + " generator orders");
  GeneratorBuilder b(h0, h1, OperatorSpace{});
  for (std::size_t n = 1; n + 1 <= m; ++n) b.push_generator(s.orders[n - 1]);
  return b.vm(m);
}

inline SWGenerator build_generator(const StabilizerHamiltonian& h0, const PauliSum& h1, std::size_t max_order,
                                   SolveOptions opts = {}) {
  if (max_order == 0) throw std::invalid_argument("perturbation order must be >= 1");
  GeneratorBuilder b(h0, h1, OperatorSpace{}, opts);
  for (std::size_t m = 1; m <= max_order; ++m) b.step();
  return b.result();
}

/// Same construction on translation representatives; H0 and H1 must be
/// invariant under the group. Returned orders are expanded.
inline SWGenerator build_generator_ti(const StabilizerHamiltonian& h0, const PauliSum& h1, std::size_t max_order,
                                      std::shared_ptr<const TranslationGroup> group, SolveOptions opts = {}) {
  if (max_order == 0) throw std::invalid_argument("perturbation order must be >= 1");
  GeneratorBuilder b(h0, h1, OperatorSpace(std::move(group)), opts);
  for (std::size_t m = 1; m <= max_order; ++m) b.step();
  return b.result();
}

struct TransformedHamiltonian {
  const StabilizerHamiltonian* base = nullptr;
  std::vector<PauliSum> orders;  // H^(1..M)
};

inline TransformedHamiltonian transformed_orders(const StabilizerHamiltonian& h0, const PauliSum& h1,
                                                 const SWGenerator& s, std::size_t max_order) {
  if (s.orders.size() < max_order)
    throw std::invalid_argument("generator has " + std::to_string(s.orders.size()) + " orders, need " +
                                std::to_string(max_order));
  GeneratorBuilder b(h0, h1, OperatorSpace{});
  TransformedHamiltonian out{&h0, {}};
  for (std::size_t m = 1; m <= max_order; ++m) {
    b.push_generator(s.orders[m - 1]);
    out.orders.push_back(b.transformed(m));
  }
  return out;
}

/// Writes S^(m) (and H^(m) if given) in the text format, one file per order.
inline void dump_orders(const std::string& prefix, const std::vector<PauliSum>& orders) {
  for (std::size_t m = 0; m < orders.size(); ++m) {
    const std::string path = prefix + std::to_string(m + 1) + ".txt";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    const std::string text = to_text(orders[m]);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
}

}  // namespace stabsw
