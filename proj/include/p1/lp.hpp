// SPDX-License-Identifier: Apache-2.0
//
// Exact two-phase simplex over the rationals.  Small dense problems only:
// every LP in this library has at most a few hundred columns.

#ifndef P1_LP_HPP
#define P1_LP_HPP

#include <vector>

#include "p1/exact.hpp"

namespace p1 {

/// maximize c'x subject to A x = b, x >= 0.
struct RationalLP {
  RationalMatrix a;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

/// Bland's rule throughout, so the solver always terminates.
LpSolution solve(const RationalLP& lp);

}  // namespace p1

#endif  // P1_LP_HPP
