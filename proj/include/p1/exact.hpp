// SPDX-License-Identifier: Apache-2.0
//
// Exact linear algebra over the rationals (GMP).

#ifndef P1_EXACT_HPP
#define P1_EXACT_HPP

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "p1/model.hpp"

namespace p1 {

using Rational = mpq_class;
using Integer = mpz_class;

/// Dense row-major rational matrix.
struct RationalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  explicit RationalMatrix(const IntMatrix& m);

  Rational& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Row echelon data of a matrix: the pivot columns found by elimination in
/// natural order and therefore the rank.
struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

Echelon echelon(RationalMatrix m);

std::size_t exact_rank(const IntMatrix& m);

/// Indices of a maximal linearly independent set of rows, chosen greedily in
/// the given preference order (every row index must appear once).
std::vector<std::size_t> independent_rows(const IntMatrix& m, const std::vector<std::size_t>& order);

/// Same for columns, natural order.
std::vector<std::size_t> independent_columns(const IntMatrix& m);

/// Divides by the gcd of the entries; zero stays zero.
void make_primitive(std::vector<Integer>& v);

}  // namespace p1

#endif  // P1_EXACT_HPP
