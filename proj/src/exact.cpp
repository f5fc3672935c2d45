// SPDX-License-Identifier: Apache-2.0

#include "p1/exact.hpp"

#include <numeric>
#include <stdexcept>

namespace p1 {

RationalMatrix::RationalMatrix(const IntMatrix& m) : rows(m.rows), cols(m.cols), data(m.rows * m.cols) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = Rational(static_cast<long>(m.data[k]));
}

Echelon echelon(RationalMatrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t piv = row;
    while (piv < m.rows && m(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != row) {
      for (std::size_t c = col; c < m.cols; ++c) std::swap(m(row, c), m(piv, c));
    }
    for (std::size_t r = row + 1; r < m.rows; ++r) {
      if (m(r, col) == 0) continue;
      const Rational f = m(r, col) / m(row, col);
      for (std::size_t c = col; c < m.cols; ++c) m(r, c) -= f * m(row, c);
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  e.rank = row;
  return e;
}

std::size_t exact_rank(const IntMatrix& m) { return echelon(RationalMatrix(m)).rank; }

std::vector<std::size_t> independent_rows(const IntMatrix& m, const std::vector<std::size_t>& order) {
  if (order.size() != m.rows) throw std::invalid_argument("row order must list every row");
  // Transpose with rows in preference order; pivot columns are then the
  // greedy independent rows.
  RationalMatrix t(m.cols, m.rows);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c = 0; c < m.cols; ++c) t(c, k) = Rational(static_cast<long>(m(order[k], c)));
  }
  const Echelon e = echelon(std::move(t));
  std::vector<std::size_t> out;
  out.reserve(e.rank);
  for (std::size_t k : e.pivot_cols) out.push_back(order[k]);
  return out;
}

std::vector<std::size_t> independent_columns(const IntMatrix& m) {
  return echelon(RationalMatrix(m)).pivot_cols;
}

void make_primitive(std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

}  // namespace p1
