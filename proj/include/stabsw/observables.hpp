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
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "stabsw/pauli.hpp"
#include "stabsw/stabilizer.hpp"
#include "stabsw/sw.hpp"

namespace stabsw {

/// Ground-state values <0|P|0> for strings P, given a full stabilizer spec.
class GroundStateEvaluator {
 public:
  explicit GroundStateEvaluator(GroundStateSpec gs) : gs_(std::move(gs)), stabs_(gs_.nqubits) {
    for (const auto& s : gs_.stabilizers) stabs_.push_back(s, 1.0);
    index_ = SupportIndex(stabs_);
    stamp_.assign(stabs_.size(), 0);
  }

  std::size_t nqubits() const { return gs_.nqubits; }
  std::size_t syndrome_words() const { return words_for_bits(stabs_.size()); }

  /// Bit i set iff the string anticommutes with stabilizer i.
  void syndrome(const Word* row, Word* out) {
    const std::size_t sw = syndrome_words();
    std::fill(out, out + sw, 0);
    detail::for_each_overlapping(row, stabs_.nwords(), index_, stamp_, next_tag(), [&](std::size_t j) {
      if (detail::anticommute(row, stabs_.row_ptr(j), stabs_.nwords())) out[j / kWordBits] |= Word{1} << (j % kWordBits);
    });
  }

  bool in_stabilizer_group(const Word* row) {
    bool ok = true;
    detail::for_each_overlapping(row, stabs_.nwords(), index_, stamp_, next_tag(), [&](std::size_t j) {
      if (ok && detail::anticommute(row, stabs_.row_ptr(j), stabs_.nwords())) ok = false;
    });
    return ok;
  }

  /// +-1 for group elements, 0 otherwise.
  int value(const Word* row) {
    if (!in_stabilizer_group(row)) return 0;
    return stabilizer_decompose(row, gs_).sign;
  }

  int value(const PauliTerm& t) {
    if (t.nqubits() != nqubits()) throw SizeMismatch("observable qubit count", t.nqubits(), nqubits());
    return value(t.words().data());
  }

  Complex value(const PauliSum& op) {
    if (op.nqubits() != nqubits()) throw SizeMismatch("observable qubit count", op.nqubits(), nqubits());
    Complex v = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i)
      if (int s = value(op.row_ptr(i))) v += static_cast<double>(s) * op.coeff(i);
    return v;
  }

  /// <0|A B|0>. Only row pairs with equal syndromes contribute; with
  /// `connected_only` pairs of group elements (trivial syndrome) are skipped,
  /// which removes exactly the <A><B> part.
  Complex product_value(const PauliSum& a, const PauliSum& b, bool connected_only = false) {
    a.check_size(b);
    const std::size_t sw = syndrome_words(), nw = a.nwords(), rw = a.row_words();
    std::vector<Word> sa(a.size() * sw), sb(sw), prod(rw);
    for (std::size_t i = 0; i < a.size(); ++i) syndrome(a.row_ptr(i), sa.data() + i * sw);
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](const Word* x, const Word* y) { return std::lexicographical_compare(x, x + sw, y, y + sw); };
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return less(sa.data() + x * sw, sa.data() + y * sw); });
    Complex total = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      syndrome(b.row_ptr(j), sb.data());
      if (connected_only && std::all_of(sb.begin(), sb.end(), [](Word w) { return w == 0; })) continue;
      auto lo = std::lower_bound(order.begin(), order.end(), sb.data(),
                                 [&](std::size_t x, const Word* key) { return less(sa.data() + x * sw, key); });
      for (auto it = lo; it != order.end() && std::equal(sb.begin(), sb.end(), sa.data() + *it * sw); ++it) {
        const Word* ra = a.row_ptr(*it);
        const Word* rb = b.row_ptr(j);
        for (std::size_t k = 0; k < rw; ++k) prod[k] = ra[k] ^ rb[k];
        const int s = stabilizer_decompose(prod.data(), gs_).sign;
        total += detail::mul_ipow(static_cast<double>(s) * a.coeff(*it) * b.coeff(j), detail::phase_exponent(ra, rb, nw));
      }
    }
    return total;
  }

 private:
  std::uint32_t next_tag() {
    if (++tag_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      tag_ = 1;
    }
    return tag_;
  }

  GroundStateSpec gs_;
  PauliSum stabs_;
  SupportIndex index_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t tag_ = 0;
};

/// ||(1 - P0) A |0>||: how far A moves the reference state out of it,
/// from <0|A (1 - P0) A|0> = connected <A A> for Hermitian A.
inline double ground_leakage(const PauliSum& a, GroundStateEvaluator& eval) {
  return std::sqrt(std::max(0.0, eval.product_value(a, a, true).real()));
}

/// O^(m) for m = 0..M: sum over compositions of m, weighted 1/c!, of nested
/// commutators with the generator orders.
class Conjugator {
 public:
  Conjugator(const SWGenerator& s, std::size_t max_order, std::size_t term_cap = 20'000'000)
      : max_order_(max_order), term_cap_(term_cap) {
    if (s.orders.size() < max_order)
      throw std::invalid_argument("generator has " + std::to_string(s.orders.size()) + " orders, need " +
                                  std::to_string(max_order));
    for (std::size_t m = 0; m < max_order; ++m) rights_.push_back(space_.prepare(s.orders[m]));
  }

  std::size_t max_order() const { return max_order_; }

  std::vector<PauliSum> expand(const PauliSum& o) const {
    CommutatorTower tower(o, &space_, &rights_, term_cap_);
    std::vector<PauliSum> out{o};
    for (std::size_t m = 1; m <= max_order_; ++m) {
      TermAccumulator acc(o.nqubits());
      for (std::size_t c = 1; c <= m; ++c) acc.add(tower.get(c, m), inverse_factorial(c));
      out.push_back(acc.finish());
    }
    return out;
  }

 private:
  std::size_t max_order_;
  std::size_t term_cap_;
  OperatorSpace space_;
  CommutatorTower::Rights rights_;
};

inline std::vector<PauliSum> conjugate_expand(const PauliSum& o, const SWGenerator& s, std::size_t max_order) {
  return Conjugator(s, max_order).expand(o);
}

struct ExpectationReport {
  std::string observable;
  std::vector<Complex> orders;      // contribution of order m, m = 0..M
  std::vector<Complex> cumulative;  // partial sums
  std::map<std::string, std::string> params;

  static ExpectationReport from_orders(std::string name, std::vector<Complex> per_order) {
    ExpectationReport r{std::move(name), std::move(per_order), {}, {}};
    Complex acc = 0.0;
    for (auto c : r.orders) r.cumulative.push_back(acc += c);
    return r;
  }

  Complex value() const { return cumulative.empty() ? Complex(0.0) : cumulative.back(); }
};

inline nlohmann::json to_json(const ExpectationReport& r) {
  auto list = [](const std::vector<Complex>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto c : v) a.push_back(c.imag() == 0.0 ? nlohmann::json(c.real()) : nlohmann::json::array({c.real(), c.imag()}));
    return a;
  };
  return {{"observable", r.observable}, {"orders", list(r.orders)}, {"cumulative", list(r.cumulative)}, {"params", r.params}};
}

inline ExpectationReport expectation_from_orders(std::string name, const std::vector<PauliSum>& orders,
                                                 GroundStateEvaluator& eval) {
  std::vector<Complex> per;
  for (const auto& o : orders) per.push_back(eval.value(o));
  return ExpectationReport::from_orders(std::move(name), std::move(per));
}

inline ExpectationReport expectation(const PauliSum& o, const SWGenerator& s, const GroundStateSpec& gs,
                                     std::size_t max_order, std::string name = "O") {
  GroundStateEvaluator eval(gs);
  return expectation_from_orders(std::move(name), conjugate_expand(o, s, max_order), eval);
}

/// Connected <O1 O2> - <O1><O2> from per-order expansions, truncated at total order.
inline ExpectationReport connected_from_orders(std::string name, const std::vector<PauliSum>& o1,
                                               const std::vector<PauliSum>& o2, GroundStateEvaluator& eval) {
  if (o1.size() != o2.size()) throw SizeMismatch("order lists differ in length", o1.size(), o2.size());
  std::vector<Complex> per(o1.size(), 0.0);
  for (std::size_t m = 0; m < o1.size(); ++m)
    for (std::size_t a = 0; a <= m; ++a) per[m] += eval.product_value(o1[a], o2[m - a], true);
  return ExpectationReport::from_orders(std::move(name), std::move(per));
}

inline ExpectationReport connected_correlation(const PauliSum& o1, const PauliSum& o2, const SWGenerator& s,
                                               const GroundStateSpec& gs, std::size_t max_order,
                                               std::string name = "O1;O2") {
  GroundStateEvaluator eval(gs);
  Conjugator conj(s, max_order);
  return connected_from_orders(std::move(name), conj.expand(o1), conj.expand(o2), eval);
}

/// xi_d = 1 / (log|C(d)| - log|C(d+1)|).
inline double correlation_length(double c_d, double c_d1) {
  const double a = std::abs(c_d), b = std::abs(c_d1);
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("correlation_length needs nonzero correlations");
  const double diff = std::log(a) - std::log(b);
  if (diff == 0.0) throw std::invalid_argument("correlation_length: equal magnitudes at d and d+1");
  return 1.0 / diff;
}

}  // namespace stabsw
