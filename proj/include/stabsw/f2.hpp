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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stabsw/errors.hpp"

namespace stabsw {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for_bits(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

/// Dense row-major matrix over F2 with rows packed into 64-bit words.
///
/// Bits past `cols()` in the last word of a row are always zero, so rows can be
/// compared and combined word-wise.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), bits_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    Word& w = bits_[r * stride_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    w = v ? (w | mask) : (w & ~mask);
  }
  void flip(std::size_t r, std::size_t c) {
    bits_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
  }

  std::span<Word> row(std::size_t r) { return {bits_.data() + r * stride_, stride_}; }
  std::span<const Word> row(std::size_t r) const { return {bits_.data() + r * stride_, stride_}; }

  // row(dst) ^= row(src)
  void xor_row(std::size_t dst, std::size_t src) {
    Word* d = bits_.data() + dst * stride_;
    const Word* s = bits_.data() + src * stride_;
    for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(bits_.begin() + a * stride_, bits_.begin() + (a + 1) * stride_,
                     bits_.begin() + b * stride_);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) {
      const bool va = get(r, a);
      const bool vb = get(r, b);
      if (va != vb) {
        flip(r, a);
        flip(r, b);
      }
    }
  }

  bool row_is_zero(std::size_t r) const {
    auto rr = row(r);
    return std::all_of(rr.begin(), rr.end(), [](Word w) { return w == 0; });
  }
  bool is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](Word w) { return w == 0; });
  }
  std::size_t row_weight(std::size_t r) const {
    std::size_t n = 0;
    for (Word w : row(r)) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// First set column at or after `from` in row r, or cols() if none.
  std::size_t first_set(std::size_t r, std::size_t from = 0) const {
    if (from >= cols_) return cols_;
    const Word* p = bits_.data() + r * stride_;
    std::size_t k = from / kWordBits;
    Word w = p[k] & (~Word{0} << (from % kWordBits));
    while (true) {
      if (w != 0) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++k == stride_) return cols_;
      w = p[k];
    }
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = first_set(r); c < cols_; c = first_set(r, c + 1)) t.set(c, r, true);
    return t;
  }

  BitMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw SizeMismatch("BitMatrix::block out of range", r0 + nr, rows_);
    BitMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        if (get(r0 + r, c0 + c)) b.set(r, c, true);
    return b;
  }

  static BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows()) throw SizeMismatch("hstack row count", a.rows(), b.rows());
    BitMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = a.first_set(r); c < a.cols(); c = a.first_set(r, c + 1)) m.set(r, c, true);
      for (std::size_t c = b.first_set(r); c < b.cols(); c = b.first_set(r, c + 1))
        m.set(r, a.cols() + c, true);
    }
    return m;
  }

  static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols()) throw SizeMismatch("vstack column count", a.cols(), b.cols());
    BitMatrix m(a.rows() + b.rows(), a.cols());
    std::copy(a.bits_.begin(), a.bits_.end(), m.bits_.begin());
    std::copy(b.bits_.begin(), b.bits_.end(), m.bits_.begin() + static_cast<std::ptrdiff_t>(a.bits_.size()));
    return m;
  }

  /// Appends a row given as packed words (length must equal stride()).
  void append_row(std::span<const Word> words) {
    if (words.size() != stride_) throw SizeMismatch("append_row width", words.size(), stride_);
    bits_.insert(bits_.end(), words.begin(), words.end());
    ++rows_;
  }

  std::string str() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) s.push_back(get(r, c) ? '1' : '0');
      s.push_back('\n');
    }
    return s;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
};

/// Matrix product over F2.
inline BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) throw SizeMismatch("F2 product inner dimension", a.cols(), b.rows());
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = a.first_set(i); k < a.cols(); k = a.first_set(i, k + 1)) {
      auto src = b.row(k);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

namespace detail {

// In-place reduced row echelon form; returns pivot columns in order.
inline std::vector<std::size_t> rref(BitMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.xor_row(i, r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(const BitMatrix& m) {
  BitMatrix work = m;
  return detail::rref(work).size();
}

/// Basis (as rows) of { v : m * v^T = 0 }. Has cols() - rank(m) rows.
inline BitMatrix nullspace(const BitMatrix& m) {
  BitMatrix work = m;
  const auto pivots = detail::rref(work);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  BitMatrix basis(0, m.cols());
  std::vector<Word> v(basis.stride());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[f / kWordBits] |= Word{1} << (f % kWordBits);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (work.get(r, f)) v[pivots[r] / kWordBits] |= Word{1} << (pivots[r] % kWordBits);
    basis.append_row(v);
  }
  return basis;
}

/// Inverse of a square invertible matrix over F2.
inline BitMatrix inverse(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw SizeMismatch("inverse of non-square matrix", m.rows(), m.cols());
  const std::size_t n = m.rows();
  BitMatrix work = BitMatrix::hstack(m, BitMatrix::identity(n));
  const auto pivots = detail::rref(work);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw RankDeficiency("inverse", pivots.size(), n);
  return work.block(0, n, n, n);
}

/// Incrementally built span of packed F2 vectors, kept fully reduced so that
/// membership is a single pass over the basis.
class RowBasis {
 public:
  explicit RowBasis(std::size_t nwords) : nwords_(nwords) {}

  std::size_t size() const { return pivots_.size(); }

  /// Reduces v against the basis in place; v is zero afterwards iff it lies in the span.
  void reduce(std::span<Word> v) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if ((v[p / kWordBits] >> (p % kWordBits)) & 1U) {
        const Word* b = rows_.data() + i * nwords_;
        for (std::size_t k = 0; k < nwords_; ++k) v[k] ^= b[k];
      }
    }
  }

  bool contains(std::span<const Word> v) const {
    std::vector<Word> w(v.begin(), v.end());
    reduce(w);
    return std::all_of(w.begin(), w.end(), [](Word x) { return x == 0; });
  }

  /// Adds v if independent; returns whether it was added.
  bool insert(std::span<const Word> v) {
    if (v.size() != nwords_) throw SizeMismatch("RowBasis vector width", v.size(), nwords_);
    std::vector<Word> w(v.begin(), v.end());
    reduce(w);
    std::size_t p = 0;
    while (p < nwords_ && w[p] == 0) ++p;
    if (p == nwords_) return false;
    const std::size_t pivot = p * kWordBits + static_cast<std::size_t>(std::countr_zero(w[p]));
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      Word* b = rows_.data() + i * nwords_;
      if ((b[pivot / kWordBits] >> (pivot % kWordBits)) & 1U)
        for (std::size_t k = 0; k < nwords_; ++k) b[k] ^= w[k];
    }
    rows_.insert(rows_.end(), w.begin(), w.end());
    pivots_.push_back(pivot);
    return true;
  }

 private:
  std::size_t nwords_;
  std::vector<std::size_t> pivots_;
  std::vector<Word> rows_;
};

struct SmithForm {
  BitMatrix P;  // rows x rows, invertible
  BitMatrix Q;  // cols x cols, invertible
};

/// Smith normal form of a full-row-rank matrix: P * m * Q = [I | 0].
///
/// Pivot is the first nonzero column (left to right) among the unreduced rows.
/// Q is accumulated from the elementary column operations as they happen.
inline SmithForm smith_normal_form(const BitMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  if (k < n) throw RankDeficiency("smith_normal_form needs cols >= rows", k, n);
  BitMatrix work = m;
  BitMatrix P = BitMatrix::identity(n);
  BitMatrix Qt = BitMatrix::identity(k);  // row j of Qt is column j of Q

  for (std::size_t r = 0; r < n; ++r) {
    std::size_t pivot_col = k;
    std::size_t pivot_row = n;
    for (std::size_t i = r; i < n; ++i) {
      const std::size_t c = work.first_set(i, r);
      if (c < pivot_col) {
        pivot_col = c;
        pivot_row = i;
      }
    }
    if (pivot_col == k) throw RankDeficiency("smith_normal_form", r, n);

    work.swap_rows(r, pivot_row);
    P.swap_rows(r, pivot_row);
    work.swap_cols(r, pivot_col);
    Qt.swap_rows(r, pivot_col);

    for (std::size_t i = 0; i < n; ++i) {
      if (i != r && work.get(i, r)) {
        work.xor_row(i, r);
        P.xor_row(i, r);
      }
    }
    // Column r now has its only 1 in row r, so clearing row r by column
    // operations leaves every other row untouched.
    for (std::size_t j = work.first_set(r, r + 1); j < k; j = work.first_set(r, j + 1)) {
      work.set(r, j, false);
      Qt.xor_row(j, r);
    }
  }
  return {std::move(P), Qt.transposed()};
}

}  // namespace stabsw
