#include <doctest.h>

#include "p1/exact.hpp"
#include "p1/lp.hpp"
#include "support.hpp"

using namespace p1;
using p1::test::digits;

TEST_CASE("exact rank") {
  CHECK(exact_rank(digits({"12", "24"})) == 1);
  CHECK(exact_rank(digits({"100", "010", "001"})) == 3);
  CHECK(exact_rank(IntMatrix(3, 4)) == 0);
  // Rank is the same for the printed Z_4 in either row order.
  CHECK(exact_rank(p1::test::golden_z4_printed()) == 13);
}

TEST_CASE("independent rows follow the preference order") {
  const auto m = digits({"110", "220", "011", "121"});
  const auto rows = independent_rows(m, {1, 0, 2, 3});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == 1);
  CHECK(rows[1] == 2);
  const auto cols = independent_columns(m);
  CHECK(cols.size() == 2);
}

TEST_CASE("primitive vectors") {
  std::vector<Integer> v = {Integer(6), Integer(-9), Integer(0), Integer(15)};
  make_primitive(v);
  CHECK(v[0] == 2);
  CHECK(v[1] == -3);
  CHECK(v[3] == 5);
  std::vector<Integer> z = {Integer(0), Integer(0)};
  make_primitive(z);
  CHECK(z[0] == 0);
}

namespace {

RationalLP lp_of(const std::vector<std::vector<int>>& a, const std::vector<int>& b, const std::vector<int>& c) {
  RationalLP lp;
  lp.a = RationalMatrix(a.size(), c.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t k = 0; k < c.size(); ++k) lp.a(r, k) = a[r][k];
  }
  for (int v : b) lp.b.emplace_back(v);
  for (int v : c) lp.c.emplace_back(v);
  return lp;
}

}  // namespace

TEST_CASE("simplex: optimal") {
  // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6.  Optimum at (8/5, 6/5).
  const auto sol = solve(lp_of({{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {1, 1, 0, 0}));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == Rational(14, 5));
  CHECK(sol.x[0] == Rational(8, 5));
  CHECK(sol.x[1] == Rational(6, 5));
}

TEST_CASE("simplex: infeasible and unbounded") {
  CHECK(solve(lp_of({{1, 1}}, {-1}, {0, 0})).status == LpStatus::Infeasible);
  CHECK(solve(lp_of({{1, -1}}, {1}, {1, 0})).status == LpStatus::Unbounded);
}

TEST_CASE("simplex: degenerate problem terminates") {
  // A classic cycling example for Dantzig's rule, in equality form.
  const auto sol = solve(lp_of({{1, -11, -5, 18, 1, 0, 0}, {1, -3, -1, 2, 0, 1, 0}, {1, 0, 0, 0, 0, 0, 1}},
                               {0, 0, 1}, {10, -57, -9, -24, 0, 0, 0}));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == 1);
}
