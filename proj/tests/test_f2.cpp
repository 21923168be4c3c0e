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

#include "stabsw/f2.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace stabsw;

namespace {

BitMatrix from_rows(std::initializer_list<const char*> rows) {
  std::size_t r = 0;
  BitMatrix m(rows.size(), std::string(*rows.begin()).size());
  for (const char* s : rows) {
    for (std::size_t c = 0; s[c]; ++c) m.set(r, c, s[c] == '1');
    ++r;
  }
  return m;
}

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::bernoulli_distribution coin(0.5);
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, coin(rng));
  return m;
}

BitMatrix eye_zero(std::size_t n, std::size_t k) {
  return BitMatrix::hstack(BitMatrix::identity(n), BitMatrix(n, k - n));
}

void expect_valid_smith(const BitMatrix& m) {
  auto snf = smith_normal_form(m);
  EXPECT_EQ(snf.P * m * snf.Q, eye_zero(m.rows(), m.cols()));
  EXPECT_EQ(snf.P * inverse(snf.P), BitMatrix::identity(m.rows()));
  EXPECT_EQ(snf.Q * inverse(snf.Q), BitMatrix::identity(m.cols()));
}

}  // namespace

TEST(f2, get_set_flip) {
  BitMatrix m(3, 70);
  m.set(2, 69, true);
  m.flip(0, 0);
  EXPECT_TRUE(m.get(2, 69));
  EXPECT_TRUE(m.get(0, 0));
  EXPECT_FALSE(m.get(1, 5));
  EXPECT_EQ(m.first_set(2), 69u);
  EXPECT_EQ(m.first_set(1), 70u);
  m.set(2, 69, false);
  EXPECT_TRUE(m.row_is_zero(2));
}

TEST(f2, product_and_transpose) {
  auto a = from_rows({"110", "011"});
  auto b = from_rows({"10", "11", "01"});
  EXPECT_EQ(a * b, from_rows({"01", "10"}));
  EXPECT_EQ(a.transposed(), from_rows({"10", "11", "01"}));
  EXPECT_THROW(a * a, SizeMismatch);
}

TEST(f2, rank) {
  EXPECT_EQ(rank(BitMatrix::identity(7)), 7u);
  EXPECT_EQ(rank(BitMatrix(4, 9)), 0u);
  // {Z0Z1, Z1Z2, Z0Z2} as (x | z) rows.
  EXPECT_EQ(rank(from_rows({"000110", "000011", "000101"})), 2u);
}

TEST(f2, nullspace_examples) {
  EXPECT_EQ(nullspace(BitMatrix::identity(5)).rows(), 0u);
  EXPECT_EQ(nullspace(BitMatrix(3, 4)).rows(), 4u);
  // Strings commuting with Z0Z1: M = Z0Z1 with halves swapped.
  auto m = from_rows({"1100"});
  auto ns = nullspace(m);
  EXPECT_EQ(ns.rows(), 3u);
  // Brute force over the 16 two-qubit strings.
  int count = 0;
  for (int v = 0; v < 16; ++v) count += ((v & 1) + ((v >> 1) & 1)) % 2 == 0;
  EXPECT_EQ(1 << ns.rows(), count);
}

TEST(f2, nullspace_properties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng() % 12, c = 1 + rng() % 80;
    auto m = random_matrix(rng, r, c);
    auto ns = nullspace(m);
    EXPECT_EQ(rank(m) + ns.rows(), c);
    EXPECT_EQ(rank(ns), ns.rows());
    if (ns.rows() > 0) EXPECT_TRUE((m * ns.transposed()).is_zero());
  }
}

TEST(f2, inverse) {
  std::mt19937_64 rng(3);
  int tested = 0;
  while (tested < 20) {
    auto m = random_matrix(rng, 9, 9);
    if (rank(m) < 9) {
      EXPECT_THROW(inverse(m), RankDeficiency);
      continue;
    }
    EXPECT_EQ(m * inverse(m), BitMatrix::identity(9));
    ++tested;
  }
}

TEST(f2, smith_normal_form_examples) {
  auto snf = smith_normal_form(eye_zero(3, 5));
  EXPECT_EQ(snf.P, BitMatrix::identity(3));
  EXPECT_EQ(snf.Q, BitMatrix::identity(5));
  expect_valid_smith(BitMatrix::hstack(BitMatrix(3, 3), BitMatrix::identity(3)));
  // Three-qubit chain: Z0Z1, Z1Z2, Z2.
  expect_valid_smith(from_rows({"000110", "000011", "000001"}));
}

TEST(f2, smith_normal_form_random) {
  std::mt19937_64 rng(5);
  int tested = 0;
  while (tested < 100) {
    const std::size_t r = 1 + rng() % 10;
    auto m = random_matrix(rng, r, r + rng() % 70);
    if (rank(m) < r) continue;
    expect_valid_smith(m);
    ++tested;
  }
}

TEST(f2, smith_normal_form_rank_deficient) {
  try {
    smith_normal_form(from_rows({"000110", "000011", "000101"}));
    FAIL();
  } catch (const RankDeficiency& e) {
    EXPECT_EQ(e.rank(), 2u);
  }
}

TEST(f2, row_basis) {
  RowBasis b(1);
  Word v1 = 0b011, v2 = 0b110, v3 = 0b101;
  EXPECT_TRUE(b.insert(std::span<const Word>(&v1, 1)));
  EXPECT_TRUE(b.insert(std::span<const Word>(&v2, 1)));
  EXPECT_FALSE(b.insert(std::span<const Word>(&v3, 1)));
  EXPECT_TRUE(b.contains(std::span<const Word>(&v3, 1)));
  EXPECT_EQ(b.size(), 2u);
}
