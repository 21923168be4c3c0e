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
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabsw/errors.hpp"
#include "stabsw/f2.hpp"

namespace stabsw {

using Complex = std::complex<double>;

/// Merged coefficients smaller than this fraction of the largest contribution
/// are treated as roundoff and removed.
inline constexpr double kDropThreshold = 1e-14;

namespace detail {

// A packed Pauli row is `nw` x-words followed by `nw` z-words.

inline bool anticommute(const Word* r1, const Word* r2, std::size_t nw) {
  Word acc = 0;
  for (std::size_t k = 0; k < nw; ++k) acc ^= (r1[k] & r2[nw + k]) ^ (r1[nw + k] & r2[k]);
  return std::popcount(acc) & 1;
}

// Exponent k (mod 4) such that T(r1) T(r2) = i^k T(r1 ^ r2), with
// T(a, b) = i^{a.b} X^a Z^b.
inline int phase_exponent(const Word* r1, const Word* r2, std::size_t nw) {
  int k = 0;
  for (std::size_t w = 0; w < nw; ++w) {
    const Word a1 = r1[w], b1 = r1[nw + w], a2 = r2[w], b2 = r2[nw + w];
    k += 2 * std::popcount(a2 & b1) + std::popcount(a1 & b1) + std::popcount(a2 & b2) -
         std::popcount((a1 ^ a2) & (b1 ^ b2));
  }
  return ((k % 4) + 4) % 4;
}

// c * i^k without floating-point multiplication.
inline Complex mul_ipow(Complex c, int k) {
  switch (k & 3) {
    case 0: return c;
    case 1: return {-c.imag(), c.real()};
    case 2: return -c;
    default: return {c.imag(), -c.real()};
  }
}

inline Complex ipow(int k) { return mul_ipow(Complex(1.0, 0.0), k); }

inline bool row_less(const Word* a, const Word* b, std::size_t rw) {
  return std::lexicographical_compare(a, a + rw, b, b + rw);
}

inline std::uint64_t hash_row(const Word* r, std::size_t rw) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::size_t k = 0; k < rw; ++k) {
    h ^= r[k] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  return h;
}

inline char letter_of(bool x, bool z) {
  static constexpr std::array<char, 4> kLetters{'I', 'X', 'Z', 'Y'};
  return kLetters[(x ? 1 : 0) | (z ? 2 : 0)];
}

inline std::pair<bool, bool> bits_of(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': case '_': return {false, false};
    case 'X': return {true, false};
    case 'Y': return {true, true};
    case 'Z': return {false, true};
    default: throw ParseError(std::string("invalid Pauli letter '") + c + "'");
  }
}

}  // namespace detail

/// A single Pauli string T(a, b) on N qubits, stored as packed x and z words.
class PauliTerm {
 public:
  PauliTerm() = default;
  explicit PauliTerm(std::size_t nqubits)
      : nqubits_(nqubits), bits_(2 * words_for_bits(nqubits), 0) {
    if (nqubits == 0) throw SizeMismatch("PauliTerm needs at least one qubit", 0, 1);
  }
  PauliTerm(std::size_t nqubits, std::span<const Word> words) : PauliTerm(nqubits) {
    if (words.size() != bits_.size()) throw SizeMismatch("PauliTerm word count", words.size(), bits_.size());
    std::copy(words.begin(), words.end(), bits_.begin());
  }

  /// Dense letter string, qubit q at position q ("XIZ" = X on 0, Z on 2).
  static PauliTerm from_string(std::string_view letters) {
    PauliTerm t(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) t.set(q, letters[q]);
    return t;
  }

  /// Sparse form: {{qubit, letter}, ...}.
  static PauliTerm sparse(std::size_t nqubits, std::initializer_list<std::pair<std::size_t, char>> sites) {
    PauliTerm t(nqubits);
    for (auto [q, c] : sites) t.set(q, c);
    return t;
  }

  std::size_t nqubits() const { return nqubits_; }
  std::size_t nwords() const { return bits_.size() / 2; }
  std::span<const Word> words() const { return bits_; }
  std::span<Word> words() { return bits_; }

  bool x(std::size_t q) const { return (bits_[q / kWordBits] >> (q % kWordBits)) & 1U; }
  bool z(std::size_t q) const { return (bits_[nwords() + q / kWordBits] >> (q % kWordBits)) & 1U; }
  char letter(std::size_t q) const { return detail::letter_of(x(q), z(q)); }

  void set(std::size_t q, char c) {
    if (q >= nqubits_) throw SizeMismatch("qubit index out of range", q, nqubits_);
    auto [xb, zb] = detail::bits_of(c);
    const Word mask = Word{1} << (q % kWordBits);
    Word& xw = bits_[q / kWordBits];
    Word& zw = bits_[nwords() + q / kWordBits];
    xw = xb ? (xw | mask) : (xw & ~mask);
    zw = zb ? (zw | mask) : (zw & ~mask);
  }

  std::size_t weight() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < nwords(); ++k) n += std::popcount(bits_[k] | bits_[nwords() + k]);
    return static_cast<std::size_t>(n);
  }
  bool is_identity() const {
    return std::all_of(bits_.begin(), bits_.end(), [](Word w) { return w == 0; });
  }
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t q = 0; q < nqubits_; ++q)
      if (x(q) || z(q)) s.push_back(q);
    return s;
  }

  std::string str() const {
    std::string s(nqubits_, 'I');
    for (std::size_t q = 0; q < nqubits_; ++q) s[q] = letter(q);
    return s;
  }

  /// Compact form listing only non-identity sites, e.g. "Z3 X4".
  std::string sparse_str() const {
    std::string s;
    for (std::size_t q = 0; q < nqubits_; ++q) {
      if (!x(q) && !z(q)) continue;
      if (!s.empty()) s.push_back(' ');
      s.push_back(letter(q));
      s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
  }

  bool commutes_with(const PauliTerm& o) const {
    check_size(o);
    return !detail::anticommute(bits_.data(), o.bits_.data(), nwords());
  }

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
  friend auto operator<=>(const PauliTerm& a, const PauliTerm& b) {
    return std::lexicographical_compare_three_way(a.bits_.begin(), a.bits_.end(), b.bits_.begin(),
                                                  b.bits_.end());
  }

  void check_size(const PauliTerm& o) const {
    if (o.nqubits_ != nqubits_) throw SizeMismatch("Pauli terms on different qubit counts", nqubits_, o.nqubits_);
  }

 private:
  std::size_t nqubits_ = 0;
  std::vector<Word> bits_;
};

/// Phase F with T(r1) T(r2) = F(r1, r2) T(r1 ^ r2); one of {1, i, -1, -i}.
inline Complex phase_f(const PauliTerm& r1, const PauliTerm& r2) {
  r1.check_size(r2);
  return detail::ipow(detail::phase_exponent(r1.words().data(), r2.words().data(), r1.nwords()));
}

/// Product of two strings: returns (T(r1 ^ r2), k) with T(r1) T(r2) = i^k T(r1 ^ r2).
inline std::pair<PauliTerm, int> multiply_terms(const PauliTerm& r1, const PauliTerm& r2) {
  r1.check_size(r2);
  PauliTerm out = r1;
  auto w = out.words();
  auto o = r2.words();
  for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= o[k];
  return {std::move(out), detail::phase_exponent(r1.words().data(), r2.words().data(), r1.nwords())};
}

class TermAccumulator;

/// Operator sum_i c_i T(row_i). Rows are stored contiguously.
///
/// Results of the arithmetic functions below are canonical: rows strictly
/// increasing in lexicographic word order, no duplicates, no dropped-size
/// coefficients. push_back does not maintain that; pass through canonicalize.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t nqubits) : nqubits_(nqubits), nw_(words_for_bits(nqubits)) {
    if (nqubits == 0) throw SizeMismatch("PauliSum needs at least one qubit", 0, 1);
  }

  static PauliSum identity(std::size_t nqubits, Complex c = 1.0) {
    PauliSum s(nqubits);
    s.push_back(PauliTerm(nqubits), c);
    return s;
  }
  static PauliSum from_term(const PauliTerm& t, Complex c = 1.0) {
    PauliSum s(t.nqubits());
    s.push_back(t, c);
    return s;
  }

  std::size_t nqubits() const { return nqubits_; }
  std::size_t nwords() const { return nw_; }
  std::size_t row_words() const { return 2 * nw_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  std::span<const Word> row(std::size_t i) const { return {rows_.data() + i * 2 * nw_, 2 * nw_}; }
  const Word* row_ptr(std::size_t i) const { return rows_.data() + i * 2 * nw_; }
  PauliTerm term(std::size_t i) const { return PauliTerm(nqubits_, row(i)); }
  Complex coeff(std::size_t i) const { return coeffs_[i]; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }

  void push_back(std::span<const Word> r, Complex c) {
    if (r.size() != 2 * nw_) throw SizeMismatch("row width", r.size(), 2 * nw_);
    rows_.insert(rows_.end(), r.begin(), r.end());
    coeffs_.push_back(c);
  }
  void push_back(const PauliTerm& t, Complex c) {
    if (t.nqubits() != nqubits_) throw SizeMismatch("term qubit count", t.nqubits(), nqubits_);
    push_back(t.words(), c);
  }
  void reserve(std::size_t n) {
    rows_.reserve(n * 2 * nw_);
    coeffs_.reserve(n);
  }

  /// Coefficient of string t (0 if absent). Requires canonical form.
  Complex coeff_of(const PauliTerm& t) const {
    std::size_t lo = 0, hi = size();
    const Word* key = t.words().data();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (detail::row_less(row_ptr(mid), key, 2 * nw_)) lo = mid + 1;
      else hi = mid;
    }
    if (lo < size() && std::equal(key, key + 2 * nw_, row_ptr(lo))) return coeffs_[lo];
    return 0.0;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (auto c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  std::string str() const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

  void check_size(const PauliSum& o) const {
    if (o.nqubits_ != nqubits_) throw SizeMismatch("operators on different qubit counts", nqubits_, o.nqubits_);
  }

 private:
  friend class TermAccumulator;
  std::size_t nqubits_ = 0;
  std::size_t nw_ = 0;
  std::vector<Word> rows_;
  std::vector<Complex> coeffs_;
};

/// Hash-merges (row, coefficient) contributions and emits a canonical PauliSum.
///
/// For each row it remembers the largest single contribution, so sums that
/// cancel to roundoff are recognised as zero even when the operator as a
/// whole has small coefficients.
class TermAccumulator {
 public:
  explicit TermAccumulator(std::size_t nqubits, std::size_t expected = 16)
      : nqubits_(nqubits), rw_(2 * words_for_bits(nqubits)) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    table_.assign(cap, 0);
    keys_.reserve(expected * rw_);
    vals_.reserve(expected);
    maxc_.reserve(expected);
  }

  std::size_t nqubits() const { return nqubits_; }
  std::size_t size() const { return vals_.size(); }

  void add(const Word* r, Complex c) {
    const double mag = std::abs(c);
    if (mag == 0.0) return;
    if (2 * (vals_.size() + 1) > table_.size()) grow();
    const std::size_t mask = table_.size() - 1;
    std::size_t slot = detail::hash_row(r, rw_) & mask;
    while (true) {
      const std::uint32_t e = table_[slot];
      if (e == 0) {
        table_[slot] = static_cast<std::uint32_t>(vals_.size() + 1);
        keys_.insert(keys_.end(), r, r + rw_);
        vals_.push_back(c);
        maxc_.push_back(mag);
        return;
      }
      if (std::equal(r, r + rw_, keys_.data() + (e - 1) * rw_)) {
        vals_[e - 1] += c;
        maxc_[e - 1] = std::max(maxc_[e - 1], mag);
        return;
      }
      slot = (slot + 1) & mask;
    }
  }
  void add(std::span<const Word> r, Complex c) { add(r.data(), c); }
  void add(const PauliSum& s, Complex scale = 1.0) {
    s.check_size(PauliSum(nqubits_));
    for (std::size_t i = 0; i < s.size(); ++i) add(s.row_ptr(i), s.coeff(i) * scale);
  }

  PauliSum finish() const {
    double global = 0;
    for (auto& v : vals_) global = std::max(global, std::abs(v));
    std::vector<std::uint32_t> keep;
    keep.reserve(vals_.size());
    for (std::size_t e = 0; e < vals_.size(); ++e) {
      const double mag = std::abs(vals_[e]);
      if (mag <= kDropThreshold * maxc_[e] || mag <= kDropThreshold * global) continue;
      keep.push_back(static_cast<std::uint32_t>(e));
    }
    std::sort(keep.begin(), keep.end(), [&](std::uint32_t a, std::uint32_t b) {
      return detail::row_less(keys_.data() + a * rw_, keys_.data() + b * rw_, rw_);
    });
    PauliSum out(nqubits_);
    out.rows_.resize(keep.size() * rw_);
    out.coeffs_.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      std::copy_n(keys_.data() + keep[i] * rw_, rw_, out.rows_.data() + i * rw_);
      out.coeffs_[i] = vals_[keep[i]];
    }
    return out;
  }

 private:
  void grow() {
    std::vector<std::uint32_t> t(table_.size() * 2, 0);
    const std::size_t mask = t.size() - 1;
    for (std::size_t e = 0; e < vals_.size(); ++e) {
      std::size_t slot = detail::hash_row(keys_.data() + e * rw_, rw_) & mask;
      while (t[slot] != 0) slot = (slot + 1) & mask;
      t[slot] = static_cast<std::uint32_t>(e + 1);
    }
    table_.swap(t);
  }

  std::size_t nqubits_;
  std::size_t rw_;
  std::vector<std::uint32_t> table_;
  std::vector<Word> keys_;
  std::vector<Complex> vals_;
  std::vector<double> maxc_;
};

/// qubit -> rows of a PauliSum acting non-trivially on it (CSR layout).
class SupportIndex {
 public:
  SupportIndex() = default;
  explicit SupportIndex(const PauliSum& s) : nqubits_(s.nqubits()), offsets_(s.nqubits() + 1, 0) {
    const std::size_t nw = s.nwords();
    auto for_each_site = [&](std::size_t i, auto&& fn) {
      const Word* r = s.row_ptr(i);
      for (std::size_t w = 0; w < nw; ++w) {
        Word m = r[w] | r[nw + w];
        while (m) {
          fn(w * kWordBits + static_cast<std::size_t>(std::countr_zero(m)));
          m &= m - 1;
        }
      }
    };
    for (std::size_t i = 0; i < s.size(); ++i) for_each_site(i, [&](std::size_t q) { ++offsets_[q + 1]; });
    for (std::size_t q = 0; q < nqubits_; ++q) offsets_[q + 1] += offsets_[q];
    rows_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < s.size(); ++i)
      for_each_site(i, [&](std::size_t q) { rows_[fill[q]++] = static_cast<std::uint32_t>(i); });
  }

  std::size_t nqubits() const { return nqubits_; }
  std::span<const std::uint32_t> rows_on(std::size_t q) const {
    return {rows_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
  }

 private:
  std::size_t nqubits_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> rows_;
};

namespace detail {

// Calls fn(j) once for every row j of the indexed sum sharing a qubit with row r.
template <typename Fn>
void for_each_overlapping(const Word* r, std::size_t nw, const SupportIndex& idx,
                          std::vector<std::uint32_t>& stamp, std::uint32_t tag, Fn&& fn) {
  for (std::size_t w = 0; w < nw; ++w) {
    Word m = r[w] | r[nw + w];
    while (m) {
      const std::size_t q = w * kWordBits + static_cast<std::size_t>(std::countr_zero(m));
      m &= m - 1;
      for (std::uint32_t j : idx.rows_on(q)) {
        if (stamp[j] == tag) continue;
        stamp[j] = tag;
        fn(j);
      }
    }
  }
}

}  // namespace detail

inline PauliSum canonicalize(const PauliSum& a) {
  TermAccumulator acc(a.nqubits(), a.size());
  acc.add(a);
  return acc.finish();
}

inline PauliSum scale(Complex lambda, const PauliSum& a) {
  PauliSum out = a;
  for (auto& c : out.coeffs()) c *= lambda;
  return canonicalize(out);
}

inline PauliSum add(const PauliSum& a, const PauliSum& b) {
  a.check_size(b);
  TermAccumulator acc(a.nqubits(), a.size() + b.size());
  acc.add(a);
  acc.add(b);
  return acc.finish();
}

inline PauliSum sub(const PauliSum& a, const PauliSum& b) {
  a.check_size(b);
  TermAccumulator acc(a.nqubits(), a.size() + b.size());
  acc.add(a);
  acc.add(b, -1.0);
  return acc.finish();
}

/// Accumulates factor * A * B into acc.
inline void multiply_into(TermAccumulator& acc, const PauliSum& a, const PauliSum& b, Complex factor = 1.0) {
  a.check_size(b);
  const std::size_t nw = a.nwords(), rw = a.row_words();
  std::vector<Word> tmp(rw);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Word* ri = a.row_ptr(i);
    const Complex ci = a.coeff(i) * factor;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Word* rj = b.row_ptr(j);
      for (std::size_t k = 0; k < rw; ++k) tmp[k] = ri[k] ^ rj[k];
      acc.add(tmp.data(), detail::mul_ipow(ci * b.coeff(j), detail::phase_exponent(ri, rj, nw)));
    }
  }
}

inline PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  TermAccumulator acc(a.nqubits(), a.size() * b.size());
  multiply_into(acc, a, b);
  return acc.finish();
}

/// Accumulates factor * [A, B] into acc. If `b_index` is given it must index
/// `b`; only row pairs sharing a qubit are then visited.
inline void commutator_into(TermAccumulator& acc, const PauliSum& a, const PauliSum& b, Complex factor = 1.0,
                            const SupportIndex* b_index = nullptr) {
  a.check_size(b);
  const std::size_t nw = a.nwords(), rw = a.row_words();
  std::vector<Word> tmp(rw);
  auto visit = [&](const Word* ri, Complex ci, std::size_t j) {
    const Word* rj = b.row_ptr(j);
    if (!detail::anticommute(ri, rj, nw)) return;
    for (std::size_t k = 0; k < rw; ++k) tmp[k] = ri[k] ^ rj[k];
    acc.add(tmp.data(), detail::mul_ipow(2.0 * ci * b.coeff(j), detail::phase_exponent(ri, rj, nw)));
  };
  if (b_index == nullptr) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) visit(a.row_ptr(i), a.coeff(i) * factor, j);
    return;
  }
  std::vector<std::uint32_t> stamp(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Word* ri = a.row_ptr(i);
    const Complex ci = a.coeff(i) * factor;
    detail::for_each_overlapping(ri, nw, *b_index, stamp, static_cast<std::uint32_t>(i + 1),
                                 [&](std::size_t j) { visit(ri, ci, j); });
  }
}

inline PauliSum commutator(const PauliSum& a, const PauliSum& b, const SupportIndex* b_index = nullptr) {
  TermAccumulator acc(a.nqubits(), a.size() + b.size());
  if (b_index == nullptr && a.size() * b.size() > 4096) {
    SupportIndex idx(b);
    commutator_into(acc, a, b, 1.0, &idx);
  } else {
    commutator_into(acc, a, b, 1.0, b_index);
  }
  return acc.finish();
}

/// Entry (i, j) is 1 iff row i of A anticommutes with row j of B.
inline BitMatrix commutation_matrix(const PauliSum& a, const PauliSum& b) {
  a.check_size(b);
  BitMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (detail::anticommute(a.row_ptr(i), b.row_ptr(j), a.nwords())) m.set(i, j, true);
  return m;
}

/// Check matrix of A: one row (x bits | z bits) per string.
inline BitMatrix check_matrix(const PauliSum& a) {
  const std::size_t n = a.nqubits();
  BitMatrix m(a.size(), 2 * n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const PauliTerm t = a.term(i);
    for (std::size_t q = 0; q < n; ++q) {
      if (t.x(q)) m.set(i, q, true);
      if (t.z(q)) m.set(i, n + q, true);
    }
  }
  return m;
}

inline PauliTerm term_from_check_row(const BitMatrix& m, std::size_t r) {
  const std::size_t n = m.cols() / 2;
  PauliTerm t(n);
  for (std::size_t q = 0; q < n; ++q) t.set(q, detail::letter_of(m.get(r, q), m.get(r, n + q)));
  return t;
}

inline bool is_anti_hermitian(const PauliSum& a, double tol = 1e-12) {
  const double scale_ref = a.max_abs_coeff();
  return std::all_of(a.coeffs().begin(), a.coeffs().end(),
                     [&](Complex c) { return std::abs(c.real()) <= tol * scale_ref; });
}

inline bool is_hermitian(const PauliSum& a, double tol = 1e-12) {
  const double scale_ref = a.max_abs_coeff();
  return std::all_of(a.coeffs().begin(), a.coeffs().end(),
                     [&](Complex c) { return std::abs(c.imag()) <= tol * scale_ref; });
}

/// Largest |coefficient difference| over the union of strings.
inline double max_coeff_diff(const PauliSum& a, const PauliSum& b) {
  a.check_size(b);
  // Merged by hand: the accumulator's roundoff drop would hide real differences.
  double m = 0;
  PauliSum merged(a.nqubits());
  for (std::size_t i = 0; i < a.size(); ++i) merged.push_back(a.row(i), a.coeff(i));
  for (std::size_t i = 0; i < b.size(); ++i) merged.push_back(b.row(i), -b.coeff(i));
  std::vector<std::size_t> order(merged.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t rw = merged.row_words();
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return detail::row_less(merged.row_ptr(x), merged.row_ptr(y), rw);
  });
  for (std::size_t k = 0; k < order.size();) {
    Complex sum = merged.coeff(order[k]);
    std::size_t l = k + 1;
    while (l < order.size() && std::equal(merged.row_ptr(order[k]), merged.row_ptr(order[k]) + rw,
                                          merged.row_ptr(order[l]))) {
      sum += merged.coeff(order[l]);
      ++l;
    }
    m = std::max(m, std::abs(sum));
    k = l;
  }
  return m;
}

// ---- text format ---------------------------------------------------------

inline std::string format_coeff(Complex c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %.17g", c.real(), c.imag());
  return buf;
}

inline std::string PauliSum::str() const {
  std::string out;
  for (std::size_t i = 0; i < size(); ++i) {
    out += format_coeff(coeffs_[i]);
    out.push_back(' ');
    out += term(i).str();
    out.push_back('\n');
  }
  return out;
}

inline std::string to_text(const PauliSum& a) { return a.str(); }

/// Parses one string in either dense letter form ("XIZ") or sparse form.
/// Sparse tokens may be "3:X", "(3:X)" or "X3", separated by spaces; the
/// sparse form needs nqubits > 0.
inline PauliTerm parse_term(std::string_view text, std::size_t nqubits = 0) {
  std::string s(text);
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && ws(s[b])) ++b;
  s = s.substr(b);
  if (s.empty()) throw ParseError("empty Pauli string");

  const bool dense = std::all_of(s.begin(), s.end(), [](char c) {
    return c == 'I' || c == 'X' || c == 'Y' || c == 'Z' || c == '_';
  });
  if (dense && (nqubits == 0 || s.size() == nqubits)) {
    if (s == "I" && nqubits > 1) return PauliTerm(nqubits);
    return PauliTerm::from_string(s);
  }
  if (nqubits == 0) throw ParseError("sparse Pauli string '" + s + "' needs an explicit qubit count");
  if (s == "I") return PauliTerm(nqubits);

  for (char& c : s)
    if (c == '(' || c == ')' || c == ',' || c == '*') c = ' ';
  PauliTerm t(nqubits);
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    std::size_t q = 0;
    char letter = 0;
    std::size_t pos = 0;
    try {
      if (auto colon = tok.find(':'); colon != std::string::npos) {
        q = std::stoul(tok.substr(0, colon), &pos);
        if (pos != colon || colon + 2 != tok.size()) throw ParseError("bad token");
        letter = tok[colon + 1];
      } else {
        letter = tok[0];
        q = std::stoul(tok.substr(1), &pos);
        if (pos + 1 != tok.size()) throw ParseError("bad token");
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad sparse Pauli token '" + tok + "'");
    }
    if (q >= nqubits) throw ParseError("qubit " + std::to_string(q) + " out of range in '" + tok + "'");
    if (t.x(q) || t.z(q)) throw ParseError("qubit " + std::to_string(q) + " listed twice");
    t.set(q, letter);
  }
  return t;
}

/// Parses the line format `<re> <im> <string>`; blank lines and '#' comments
/// are skipped. The result is canonical.
inline PauliSum parse_pauli_sum(std::string_view text, std::size_t nqubits = 0) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::pair<PauliTerm, Complex>> terms;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    double re = 0, im = 0;
    if (!(ls >> re)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("line " + std::to_string(lineno) + ": expected real part");
    }
    if (!(ls >> im)) throw ParseError("line " + std::to_string(lineno) + ": expected imaginary part");
    std::string rest;
    std::getline(ls, rest);
    PauliTerm t = parse_term(rest, nqubits);
    if (nqubits == 0) nqubits = t.nqubits();
    if (t.nqubits() != nqubits)
      throw ParseError("line " + std::to_string(lineno) + ": string length " + std::to_string(t.nqubits()) +
                       " vs " + std::to_string(nqubits));
    terms.emplace_back(std::move(t), Complex(re, im));
  }
  if (nqubits == 0) throw ParseError("empty operator needs an explicit qubit count");
  PauliSum s(nqubits);
  for (auto& [t, c] : terms) s.push_back(t, c);
  return canonicalize(s);
}

}  // namespace stabsw
