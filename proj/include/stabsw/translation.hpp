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

#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/pauli.hpp"

namespace stabsw {

/// Abelian group of qubit permutations generated by commuting translations.
class TranslationGroup {
 public:
  using Perm = std::vector<std::uint32_t>;

  TranslationGroup(std::size_t nqubits, std::vector<Perm> generators, std::vector<std::size_t> orbit_sizes)
      : nqubits_(nqubits), generators_(std::move(generators)), orbit_sizes_(std::move(orbit_sizes)) {
    if (generators_.size() != orbit_sizes_.size())
      throw SizeMismatch("one orbit size per generator", generators_.size(), orbit_sizes_.size());
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      const Perm& p = generators_[g];
      if (p.size() != nqubits_) throw SizeMismatch("translation length", p.size(), nqubits_);
      std::vector<bool> seen(nqubits_, false);
      for (auto q : p) {
        if (q >= nqubits_ || seen[q]) throw std::invalid_argument("translation " + std::to_string(g) + " is not a bijection");
        seen[q] = true;
      }
      if (orbit_sizes_[g] == 0) throw std::invalid_argument("orbit size must be positive");
      if (power(p, orbit_sizes_[g]) != identity())
        throw std::invalid_argument("translation " + std::to_string(g) + " does not have order " +
                                    std::to_string(orbit_sizes_[g]));
      for (std::size_t h = 0; h < g; ++h)
        if (compose(p, generators_[h]) != compose(generators_[h], p))
          throw std::invalid_argument("translations " + std::to_string(h) + " and " + std::to_string(g) + " do not commute");
    }
    elements_.push_back(identity());
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      const std::size_t base = elements_.size();
      for (std::size_t k = 1; k < orbit_sizes_[g]; ++k)
        for (std::size_t e = 0; e < base; ++e) elements_.push_back(compose(generators_[g], elements_[(k - 1) * base + e]));
    }
  }

  /// Translations of a periodic lx x ly cell lattice; qubit = offset + (y lx + x) k + s
  /// for every offset in `layers` and s < cell_size.
  static TranslationGroup lattice(std::size_t nqubits, std::size_t cell_size, std::size_t lx, std::size_t ly,
                                  const std::vector<std::size_t>& layers = {0}) {
    auto shift = [&](std::size_t dx, std::size_t dy) {
      Perm p(nqubits);
      std::iota(p.begin(), p.end(), 0);
      for (auto off : layers)
        for (std::size_t y = 0; y < ly; ++y)
          for (std::size_t x = 0; x < lx; ++x)
            for (std::size_t s = 0; s < cell_size; ++s)
              p[off + (y * lx + x) * cell_size + s] =
                  static_cast<std::uint32_t>(off + (((y + dy) % ly) * lx + (x + dx) % lx) * cell_size + s);
      return p;
    };
    std::vector<Perm> gens{shift(1, 0)};
    std::vector<std::size_t> sizes{lx};
    if (ly > 1) {
      gens.push_back(shift(0, 1));
      sizes.push_back(ly);
    }
    return TranslationGroup(nqubits, std::move(gens), std::move(sizes));
  }

  std::size_t nqubits() const { return nqubits_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<std::size_t>& orbit_sizes() const { return orbit_sizes_; }
  const Perm& element(std::size_t e) const { return elements_[e]; }

  /// out = g_e(row): the letter on qubit q moves to qubit element(e)[q].
  void apply(const Word* row, std::size_t e, Word* out) const {
    const std::size_t nw = words_for_bits(nqubits_);
    std::fill(out, out + 2 * nw, 0);
    const Perm& p = elements_[e];
    for (std::size_t w = 0; w < nw; ++w) {
      Word m = row[w] | row[nw + w];
      while (m) {
        const std::size_t q = w * kWordBits + static_cast<std::size_t>(std::countr_zero(m));
        m &= m - 1;
        const std::size_t t = p[q];
        const Word bit = Word{1} << (t % kWordBits);
        if ((row[w] >> (q % kWordBits)) & 1U) out[t / kWordBits] |= bit;
        if ((row[nw + w] >> (q % kWordBits)) & 1U) out[nw + t / kWordBits] |= bit;
      }
    }
  }

  PauliTerm apply(const PauliTerm& t, std::size_t e) const {
    PauliTerm out(nqubits_);
    apply(t.words().data(), e, out.words().data());
    return out;
  }

  /// Smallest translate of row (in the canonical row order).
  void canonical_translate(const Word* row, Word* out) const {
    const std::size_t rw = 2 * words_for_bits(nqubits_);
    std::copy(row, row + rw, out);
    std::vector<Word> tmp(rw);
    for (std::size_t e = 1; e < elements_.size(); ++e) {
      apply(row, e, tmp.data());
      if (detail::row_less(tmp.data(), out, rw)) std::copy(tmp.begin(), tmp.end(), out);
    }
  }

  friend bool operator==(const TranslationGroup& a, const TranslationGroup& b) {
    return a.nqubits_ == b.nqubits_ && a.generators_ == b.generators_ && a.orbit_sizes_ == b.orbit_sizes_;
  }

 private:
  Perm identity() const {
    Perm p(nqubits_);
    std::iota(p.begin(), p.end(), 0);
    return p;
  }
  // (a o b)[q] = a[b[q]]
  static Perm compose(const Perm& a, const Perm& b) {
    Perm c(b.size());
    for (std::size_t q = 0; q < b.size(); ++q) c[q] = a[b[q]];
    return c;
  }
  Perm power(const Perm& p, std::size_t k) const {
    Perm r = identity();
    for (std::size_t i = 0; i < k; ++i) r = compose(p, r);
    return r;
  }

  std::size_t nqubits_;
  std::vector<Perm> generators_;
  std::vector<std::size_t> orbit_sizes_;
  std::vector<Perm> elements_;
};

/// Replaces every row by its smallest translate and merges.
inline PauliSum orbit_canonicalize(const PauliSum& a, const TranslationGroup& g) {
  if (a.nqubits() != g.nqubits()) throw SizeMismatch("operator vs translation group", a.nqubits(), g.nqubits());
  TermAccumulator acc(a.nqubits(), a.size());
  std::vector<Word> tmp(a.row_words());
  for (std::size_t i = 0; i < a.size(); ++i) {
    g.canonical_translate(a.row_ptr(i), tmp.data());
    acc.add(tmp.data(), a.coeff(i));
  }
  return acc.finish();
}

/// sum over all group elements g of g(rep).
inline PauliSum expand_orbits(const PauliSum& rep, const TranslationGroup& g) {
  if (rep.nqubits() != g.nqubits()) throw SizeMismatch("operator vs translation group", rep.nqubits(), g.nqubits());
  TermAccumulator acc(rep.nqubits(), rep.size() * g.order());
  std::vector<Word> tmp(rep.row_words());
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::size_t e = 0; e < g.order(); ++e) {
      g.apply(rep.row_ptr(i), e, tmp.data());
      acc.add(tmp.data(), rep.coeff(i));
    }
  return acc.finish();
}

/// Translation-invariant operator sum_g g(rep).
///
/// A string fixed by a subgroup of size s appears s times in that sum; its
/// representative coefficient already carries the 1/s, so no separate
/// multiplicity is stored.
struct TISum {
  PauliSum rep;
  std::shared_ptr<const TranslationGroup> group;

  TISum() = default;
  TISum(PauliSum r, std::shared_ptr<const TranslationGroup> g) : group(std::move(g)) {
    if (!group) throw std::invalid_argument("TISum needs a translation group");
    rep = orbit_canonicalize(r, *group);
  }
};

inline PauliSum expand_full(const TISum& a) { return expand_orbits(a.rep, *a.group); }

/// Representative of a translation-invariant explicit operator. Throws if
/// `check` is set and the operator is not invariant.
inline TISum from_explicit(const PauliSum& op, std::shared_ptr<const TranslationGroup> g, bool check = true) {
  TISum t(scale(1.0 / static_cast<double>(g->order()), op), g);
  if (check) {
    const double diff = max_coeff_diff(expand_full(t), op);
    if (diff > 1e-12 * std::max(1.0, op.max_abs_coeff()))
      throw std::invalid_argument("operator is not translation invariant (deviation " + std::to_string(diff) + ")");
  }
  return t;
}

namespace detail {
inline void check_same_group(const TISum& a, const TISum& b) {
  if (a.group != b.group && !(a.group && b.group && *a.group == *b.group))
    throw std::invalid_argument("TISum operands use different translation groups");
}
}  // namespace detail

inline TISum ti_add(const TISum& a, const TISum& b) {
  detail::check_same_group(a, b);
  return TISum(add(a.rep, b.rep), a.group);
}

inline TISum ti_sub(const TISum& a, const TISum& b) {
  detail::check_same_group(a, b);
  return TISum(sub(a.rep, b.rep), a.group);
}

inline TISum ti_scale(Complex lambda, const TISum& a) { return TISum(scale(lambda, a.rep), a.group); }

inline TISum ti_multiply(const TISum& a, const TISum& b) {
  detail::check_same_group(a, b);
  return TISum(multiply(a.rep, expand_full(b)), a.group);
}

inline TISum ti_commutator(const TISum& a, const TISum& b) {
  detail::check_same_group(a, b);
  return TISum(commutator(a.rep, expand_full(b)), a.group);
}

}  // namespace stabsw
