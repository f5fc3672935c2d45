// SPDX-License-Identifier: Apache-2.0
//
// Exact polyhedral geometry of the marginal cone C_A = cone(A): relative
// interior membership, facial sets, facets by double description, and the
// polytope of observable marginals.  Everything here is rational; no
// floating point.

#ifndef P1_GEOMETRY_HPP
#define P1_GEOMETRY_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "p1/exact.hpp"
#include "p1/model.hpp"

namespace p1 {

/// The target is not a nonnegative combination of the columns.
class InfeasibleStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConeMembership { Interior, Boundary, Outside };

std::vector<Rational> to_rational(const SufficientStatistic& t);

/// Solves max tau s.t. A u + tau A1 = t, u >= 0, 0 <= tau <= 1.  Interior
/// iff tau* > 0, i.e. t = A s for some strictly positive s.
ConeMembership cone_membership(const IntMatrix& a, std::span<const Rational> t);
ConeMembership cone_membership(const DesignMatrix& a, const SufficientStatistic& t);

/// Throws InfeasibleStatistic when t is outside the cone.
bool in_relative_interior(const DesignMatrix& a, const SufficientStatistic& t);

struct FacialSet {
  std::vector<std::size_t> indices;  // sorted column indices
  /// c with c.a_i = 0 on the set and c.a_i < 0 off it; empty for the full set.
  std::vector<Rational> witness;

  bool contains(std::size_t col) const;
  bool is_full(std::size_t cols) const { return indices.size() == cols; }
};

/// Support union of all nonnegative solutions of A s = t, found by repeated
/// support-maximizing LPs.  The witness is computed and checked exactly.
FacialSet facial_set(const IntMatrix& a, std::span<const Rational> t);
FacialSet facial_set(const DesignMatrix& a, const SufficientStatistic& t);

bool verify_witness(const IntMatrix& a, const FacialSet& f);

/// Inequalities c.x >= 0, one per facet, integer primitive.
struct ConeDescription {
  IntMatrix generators;  // one generator per column
  std::vector<std::vector<Integer>> facets;
  std::size_t dim = 0;  // linear dimension (rank)
};

enum class InsertionOrder { MaxCutoff, MinCutoff, Lex };

struct ConeOptions {
  std::size_t max_columns = 40;
  std::size_t max_rays = 2'000'000;
  InsertionOrder order = InsertionOrder::Lex;
};

/// Facets of the pointed cone spanned by the columns, by the double
/// description method run in a row basis of the column space.  Normals are
/// supported on that row basis.
ConeDescription cone_facets(const IntMatrix& generators, const ConeOptions& opts = {});
ConeDescription cone_facets(const DesignMatrix& a, const ConeOptions& opts = {});

/// rank(A).
std::size_t cone_dim(const DesignMatrix& a);
/// Dimension of conv(columns); every design matrix has its columns on an
/// affine hyperplane, so this is rank - 1.
std::size_t affine_dim(const DesignMatrix& a);

/// conv(points): facets are (c0, c) with c0 + c.x >= 0.
struct PolytopeDescription {
  std::vector<SufficientStatistic> vertices;
  std::vector<std::vector<Integer>> facets;
  std::size_t dim = 0;  // affine dimension
};

PolytopeDescription hull_of_marginals(const std::vector<SufficientStatistic>& points,
                                      const ConeOptions& opts = {.max_columns = 4096});

/// Checks the Minkowski face decomposition of P_A over the per-dyad summands
/// conv(A_ij): the minimum of every facet functional over P_A is the sum of
/// the per-dyad minima, and the observable points on the facet are exactly
/// the sums of per-dyad minimizers.  Returns the number of facets that pass.
std::size_t minkowski_face_check(const DesignMatrix& a, const PolytopeDescription& hull);

struct ZeroPattern {
  enum class Kind { RowMargin, ColumnMargin, Structural, Other };
  Kind kind = Kind::Other;
  std::vector<Integer> normal;  // facet of cone(A_n), 2n entries
  int n = 0;
  std::vector<int> zero;        // n*n, 1 where the entry is forced to 0

  /// Incidence-matrix display: 'x' on the diagonal, '0' forced zeros.
  std::string render() const;
};

std::string_view zero_pattern_kind_name(ZeroPattern::Kind k);

/// Facets of cone(A_n) read as patterns of zeros of the adjacency matrix.
std::vector<ZeroPattern> zero_pattern_facets(int n, const ConeOptions& opts = {.max_columns = 256});

}  // namespace p1

#endif  // P1_GEOMETRY_HPP
