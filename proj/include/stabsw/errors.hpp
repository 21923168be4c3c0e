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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stabsw {

/// Operands live on different numbers of qubits, or matrix shapes disagree.
class SizeMismatch : public std::invalid_argument {
 public:
  SizeMismatch(const std::string& what, std::size_t lhs, std::size_t rhs)
      : std::invalid_argument(what + ": " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
        lhs_(lhs),
        rhs_(rhs) {}
  std::size_t lhs() const { return lhs_; }
  std::size_t rhs() const { return rhs_; }

 private:
  std::size_t lhs_;
  std::size_t rhs_;
};

/// A matrix (or generator set) has lower F2 rank than required.
class RankDeficiency : public std::runtime_error {
 public:
  RankDeficiency(const std::string& what, std::size_t rank, std::size_t required)
      : std::runtime_error(what + ": rank " + std::to_string(rank) + ", need " +
                           std::to_string(required)),
        rank_(rank),
        required_(required) {}
  std::size_t rank() const { return rank_; }
  std::size_t required() const { return required_; }

 private:
  std::size_t rank_;
  std::size_t required_;
};

/// Two strings that must commute do not. Indices refer to the caller's lists.
class CommutationError : public std::runtime_error {
 public:
  CommutationError(const std::string& what, std::size_t first, std::size_t second)
      : std::runtime_error(what + " (" + std::to_string(first) + ", " + std::to_string(second) +
                           ")"),
        first_(first),
        second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Invalid stabilizer Hamiltonian input (sign, phase, frustration).
class HamiltonianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a perturbation order produces more terms than the configured cap.
class TermCapExceeded : public std::runtime_error {
 public:
  TermCapExceeded(std::size_t order, std::size_t count, std::size_t cap)
      : std::runtime_error("order " + std::to_string(order) + " produced " +
                           std::to_string(count) + " terms (cap " + std::to_string(cap) + ")"),
        order_(order),
        count_(count),
        cap_(cap) {}
  std::size_t order() const { return order_; }
  std::size_t count() const { return count_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t order_;
  std::size_t count_;
  std::size_t cap_;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace stabsw
