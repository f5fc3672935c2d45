// SPDX-License-Identifier: Apache-2.0

#include "p1/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

#include "p1/lp.hpp"

namespace p1 {

std::vector<Rational> to_rational(const SufficientStatistic& t) {
  std::vector<Rational> out;
  out.reserve(t.t.size());
  for (auto v : t.t) out.emplace_back(static_cast<long>(v));
  return out;
}

ConeMembership cone_membership(const IntMatrix& a, std::span<const Rational> t) {
  if (t.size() != a.rows) throw std::invalid_argument("statistic length does not match the matrix");
  const std::size_t m = a.cols;
  // columns: u_0..u_{m-1}, tau, sigma
  RationalLP lp;
  lp.a = RationalMatrix(a.rows + 1, m + 2);
  lp.b.assign(a.rows + 1, Rational(0));
  lp.c.assign(m + 2, Rational(0));
  for (std::size_t r = 0; r < a.rows; ++r) {
    long sum = 0;
    for (std::size_t c = 0; c < m; ++c) {
      lp.a(r, c) = static_cast<long>(a(r, c));
      sum += static_cast<long>(a(r, c));
    }
    lp.a(r, m) = sum;
    lp.b[r] = t[r];
  }
  lp.a(a.rows, m) = 1;
  lp.a(a.rows, m + 1) = 1;
  lp.b[a.rows] = 1;
  lp.c[m] = 1;
  const LpSolution sol = solve(lp);
  if (sol.status == LpStatus::Infeasible) return ConeMembership::Outside;
  return sol.objective > 0 ? ConeMembership::Interior : ConeMembership::Boundary;
}

ConeMembership cone_membership(const DesignMatrix& a, const SufficientStatistic& t) {
  const auto rt = to_rational(t);
  return cone_membership(a.entries(), rt);
}

bool in_relative_interior(const DesignMatrix& a, const SufficientStatistic& t) {
  switch (cone_membership(a, t)) {
    case ConeMembership::Interior:
      return true;
    case ConeMembership::Boundary:
      return false;
    case ConeMembership::Outside:
      break;
  }
  throw InfeasibleStatistic("statistic is not in the marginal cone");
}

bool FacialSet::contains(std::size_t col) const {
  return std::binary_search(indices.begin(), indices.end(), col);
}

namespace {

Rational dot_column(const IntMatrix& a, std::size_t col, std::span<const Rational> c) {
  Rational s = 0;
  for (std::size_t r = 0; r < a.rows; ++r) {
    if (a(r, col) != 0) s += c[r] * static_cast<long>(a(r, col));
  }
  return s;
}

std::vector<Rational> find_witness(const IntMatrix& a, const std::vector<bool>& in_face) {
  const std::size_t d = a.rows;
  const std::size_t m = a.cols;
  std::size_t off = 0;
  for (bool b : in_face) off += b ? 0 : 1;
  // columns: c+ (d), c- (d), one slack per column outside the face;
  // minimize the l1 norm of c.
  RationalLP lp;
  lp.a = RationalMatrix(m, 2 * d + off);
  lp.b.assign(m, Rational(0));
  lp.c.assign(2 * d + off, Rational(0));
  for (std::size_t k = 0; k < 2 * d; ++k) lp.c[k] = -1;
  std::size_t slack = 2 * d;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t r = 0; r < d; ++r) {
      lp.a(i, r) = static_cast<long>(a(r, i));
      lp.a(i, d + r) = -static_cast<long>(a(r, i));
    }
    if (!in_face[i]) {
      lp.a(i, slack++) = 1;
      lp.b[i] = -1;
    }
  }
  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw std::logic_error("no separating functional for a facial set");
  std::vector<Rational> c(d);
  for (std::size_t r = 0; r < d; ++r) c[r] = sol.x[r] - sol.x[d + r];
  return c;
}

}  // namespace

FacialSet facial_set(const IntMatrix& a, std::span<const Rational> t) {
  if (t.size() != a.rows) throw std::invalid_argument("statistic length does not match the matrix");
  const std::size_t m = a.cols;
  std::vector<bool> found(m, false);
  bool first = true;
  for (;;) {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < m; ++i) {
      if (!found[i]) open.push_back(i);
    }
    if (open.empty()) break;
    const std::size_t u = open.size();
    // columns: s (m), y (u), w (u) with s_i - y_i - w_i = 0, v (u) with y_i + v_i = 1
    RationalLP lp;
    lp.a = RationalMatrix(a.rows + 2 * u, m + 3 * u);
    lp.b.assign(a.rows + 2 * u, Rational(0));
    lp.c.assign(m + 3 * u, Rational(0));
    for (std::size_t r = 0; r < a.rows; ++r) {
      for (std::size_t c = 0; c < m; ++c) lp.a(r, c) = static_cast<long>(a(r, c));
      lp.b[r] = t[r];
    }
    for (std::size_t k = 0; k < u; ++k) {
      const std::size_t r1 = a.rows + 2 * k;
      const std::size_t r2 = r1 + 1;
      lp.a(r1, open[k]) = 1;
      lp.a(r1, m + k) = -1;
      lp.a(r1, m + u + k) = -1;
      lp.a(r2, m + k) = 1;
      lp.a(r2, m + 2 * u + k) = 1;
      lp.b[r2] = 1;
      lp.c[m + k] = 1;
    }
    const LpSolution sol = solve(lp);
    if (sol.status == LpStatus::Infeasible) {
      if (first) throw InfeasibleStatistic("statistic is not in the marginal cone");
      throw std::logic_error("facial set LP became infeasible");
    }
    first = false;
    if (sol.objective == 0) break;
    for (std::size_t i = 0; i < m; ++i) {
      if (sol.x[i] > 0) found[i] = true;
    }
  }

  FacialSet f;
  for (std::size_t i = 0; i < m; ++i) {
    if (found[i]) f.indices.push_back(i);
  }
  if (f.indices.size() < m) {
    f.witness = find_witness(a, found);
    if (!verify_witness(a, f)) throw std::logic_error("facial set witness failed verification");
  }
  return f;
}

FacialSet facial_set(const DesignMatrix& a, const SufficientStatistic& t) {
  const auto rt = to_rational(t);
  return facial_set(a.entries(), rt);
}

bool verify_witness(const IntMatrix& a, const FacialSet& f) {
  if (f.is_full(a.cols)) return f.witness.empty();
  if (f.witness.size() != a.rows) return false;
  for (std::size_t i = 0; i < a.cols; ++i) {
    const Rational v = dot_column(a, i, f.witness);
    if (f.contains(i) ? v != 0 : v >= 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Double description

namespace {

class ZeroSets {
 public:
  explicit ZeroSets(std::size_t bits) : words_((bits + 63) / 64) {}

  std::size_t words() const { return words_; }
  std::size_t size() const { return data_.size() / words_; }
  std::uint64_t* at(std::size_t k) { return data_.data() + k * words_; }
  const std::uint64_t* at(std::size_t k) const { return data_.data() + k * words_; }
  std::uint64_t* push() {
    data_.resize(data_.size() + words_, 0);
    return at(size() - 1);
  }
  void clear() { data_.clear(); }
  void swap(ZeroSets& o) noexcept { data_.swap(o.data_); }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> data_;
};

void set_bit(std::uint64_t* z, std::size_t b) { z[b / 64] |= std::uint64_t{1} << (b % 64); }

Integer dot(const IntMatrix& g, std::size_t row, const std::vector<Integer>& ray) {
  Integer s = 0;
  for (std::size_t k = 0; k < ray.size(); ++k) {
    const long v = static_cast<long>(g(row, k));
    if (v != 0) s += ray[k] * v;
  }
  return s;
}

// Columns of B^-1 for the square nonsingular matrix B, scaled to primitive
// integer vectors.
std::vector<std::vector<Integer>> inverse_columns(const IntMatrix& b) {
  const std::size_t r = b.rows;
  RationalMatrix aug(r, 2 * r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) aug(i, j) = static_cast<long>(b(i, j));
    aug(i, r + i) = 1;
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && aug(piv, col) == 0) ++piv;
    if (piv == r) throw std::logic_error("initial basis is singular");
    if (piv != col) {
      for (std::size_t c = 0; c < 2 * r; ++c) std::swap(aug(col, c), aug(piv, c));
    }
    const Rational p = aug(col, col);
    for (std::size_t c = 0; c < 2 * r; ++c) aug(col, c) /= p;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || aug(i, col) == 0) continue;
      const Rational f = aug(i, col);
      for (std::size_t c = 0; c < 2 * r; ++c) aug(i, c) -= f * aug(col, c);
    }
  }
  std::vector<std::vector<Integer>> out(r, std::vector<Integer>(r));
  for (std::size_t k = 0; k < r; ++k) {
    Integer l = 1;
    for (std::size_t i = 0; i < r; ++i) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), aug(i, r + k).get_den_mpz_t());
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Rational v = aug(i, r + k) * Rational(l);
      out[k][i] = v.get_num();
    }
    make_primitive(out[k]);
  }
  return out;
}

}  // namespace

ConeDescription cone_facets(const IntMatrix& gens, const ConeOptions& opts) {
  const std::size_t d = gens.rows;
  const std::size_t m = gens.cols;
  if (m > opts.max_columns) {
    throw CapacityError("cone has " + std::to_string(m) + " generators, cap is " +
                        std::to_string(opts.max_columns));
  }
  ConeDescription out;
  out.generators = gens;

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  const std::vector<std::size_t> basis_rows = independent_rows(gens, order);
  const std::size_t r = basis_rows.size();
  out.dim = r;
  if (r == 0) return out;

  IntMatrix g(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < r; ++k) g(i, k) = gens(basis_rows[k], i);
  }

  std::vector<std::size_t> gorder(m);
  std::iota(gorder.begin(), gorder.end(), 0);
  const std::vector<std::size_t> start = independent_rows(g, gorder);
  IntMatrix b(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k) b(i, k) = g(start[i], k);
  }

  std::vector<std::vector<Integer>> rays = inverse_columns(b);
  ZeroSets zs(m);
  for (std::size_t k = 0; k < r; ++k) {
    std::uint64_t* z = zs.push();
    for (std::size_t l = 0; l < r; ++l) {
      if (l != k) set_bit(z, start[l]);
    }
  }

  std::vector<bool> done(m, false);
  for (auto s : start) done[s] = true;
  const int need = static_cast<int>(r) - 2;
  const std::size_t w = zs.words();

  for (std::size_t step = r; step < m; ++step) {
    std::size_t q = m;
    if (opts.order == InsertionOrder::Lex) {
      for (std::size_t i = 0; i < m && q == m; ++i) {
        if (!done[i]) q = i;
      }
    } else {
      std::size_t best = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (done[i]) continue;
        std::size_t neg = 0;
        for (const auto& ray : rays) neg += dot(g, i, ray) < 0 ? 1 : 0;
        const bool better = q == m || (opts.order == InsertionOrder::MaxCutoff ? neg > best : neg < best);
        if (better) {
          q = i;
          best = neg;
        }
      }
    }
    done[q] = true;

    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> plus, minus;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      val[k] = dot(g, q, rays[k]);
      if (val[k] > 0) plus.push_back(k);
      if (val[k] < 0) minus.push_back(k);
    }
    if (minus.empty()) {
      for (std::size_t k = 0; k < rays.size(); ++k) {
        if (val[k] == 0) set_bit(zs.at(k), q);
      }
      continue;
    }

    std::vector<std::vector<Integer>> next;
    ZeroSets nz(m);
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (val[k] < 0) continue;
      std::uint64_t* z = nz.push();
      std::copy(zs.at(k), zs.at(k) + w, z);
      if (val[k] == 0) set_bit(z, q);
      next.push_back(rays[k]);
    }

    std::vector<std::uint64_t> common(w);
    for (auto p : plus) {
      for (auto n : minus) {
        int count = 0;
        for (std::size_t x = 0; x < w; ++x) {
          common[x] = zs.at(p)[x] & zs.at(n)[x];
          count += std::popcount(common[x]);
        }
        if (count < need) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == n) continue;
          const std::uint64_t* zk = zs.at(k);
          bool superset = true;
          for (std::size_t x = 0; x < w && superset; ++x) superset = (zk[x] & common[x]) == common[x];
          if (superset) adjacent = false;
        }
        if (!adjacent) continue;
        std::vector<Integer> ray(r);
        const Integer cp = val[p];
        const Integer cn = -val[n];
        for (std::size_t k = 0; k < r; ++k) ray[k] = cp * rays[n][k] + cn * rays[p][k];
        make_primitive(ray);
        std::uint64_t* z = nz.push();
        std::copy(common.begin(), common.end(), z);
        set_bit(z, q);
        next.push_back(std::move(ray));
        if (next.size() > opts.max_rays) throw CapacityError("double description exceeded the ray cap");
      }
    }
    rays.swap(next);
    zs.swap(nz);
  }

  out.facets.reserve(rays.size());
  for (const auto& ray : rays) {
    std::vector<Integer> full(d, Integer(0));
    for (std::size_t k = 0; k < r; ++k) full[basis_rows[k]] = ray[k];
    out.facets.push_back(std::move(full));
  }
  std::sort(out.facets.begin(), out.facets.end());
  return out;
}

ConeDescription cone_facets(const DesignMatrix& a, const ConeOptions& opts) {
  return cone_facets(a.entries(), opts);
}

std::size_t cone_dim(const DesignMatrix& a) { return exact_rank(a.entries()); }

std::size_t affine_dim(const DesignMatrix& a) {
  const std::size_t r = cone_dim(a);
  return r == 0 ? 0 : r - 1;
}

// ---------------------------------------------------------------------------
// Polytope of observable marginals

PolytopeDescription hull_of_marginals(const std::vector<SufficientStatistic>& input,
                                      const ConeOptions& opts) {
  std::vector<SufficientStatistic> points = input;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  PolytopeDescription out;
  if (points.empty()) return out;
  if (points.size() > opts.max_columns) {
    throw CapacityError("hull has " + std::to_string(points.size()) + " points, cap is " +
                        std::to_string(opts.max_columns));
  }
  const std::size_t d = points.front().size();
  const std::size_t m = points.size();
  IntMatrix h(d + 1, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (points[i].size() != d) throw std::invalid_argument("points differ in length");
    h(0, i) = 1;
    for (std::size_t r = 0; r < d; ++r) h(r + 1, i) = points[i].t[r];
  }
  ConeDescription cone = cone_facets(h, opts);
  out.dim = cone.dim - 1;
  // A single point (dimension 0) has no facets.
  if (out.dim > 0) out.facets = std::move(cone.facets);

  // Vertex test: p_k is a vertex iff it is not a convex combination of the
  // other points.
  for (std::size_t k = 0; k < m; ++k) {
    if (m == 1) {
      out.vertices.push_back(points[k]);
      break;
    }
    RationalLP lp;
    lp.a = RationalMatrix(d + 1, m - 1);
    lp.b.assign(d + 1, Rational(0));
    lp.c.assign(m - 1, Rational(0));
    std::size_t col = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      for (std::size_t r = 0; r <= d; ++r) lp.a(r, col) = static_cast<long>(h(r, j));
      ++col;
    }
    for (std::size_t r = 0; r <= d; ++r) lp.b[r] = static_cast<long>(h(r, k));
    if (solve(lp).status == LpStatus::Infeasible) out.vertices.push_back(points[k]);
  }
  return out;
}

std::size_t minkowski_face_check(const DesignMatrix& a, const PolytopeDescription& hull) {
  const std::size_t d = a.rows();
  const std::size_t dyads = dyad_count(a.n());
  std::size_t passed = 0;
  for (const auto& f : hull.facets) {
    if (f.size() != d + 1) throw std::invalid_argument("facet length does not match the design matrix");
    // c.x >= -c0 on P; per dyad, minimize c over the four columns.
    Integer total = 0;
    std::vector<std::vector<std::size_t>> argmin(dyads);
    std::vector<Integer> mins(dyads);
    for (std::size_t y = 0; y < dyads; ++y) {
      for (std::size_t k = 0; k < kConfigsPerDyad; ++k) {
        const std::size_t col = a.column_of(y, static_cast<DyadConfig>(k));
        if (col == DesignMatrix::npos) continue;
        Integer v = 0;
        for (std::size_t r = 0; r < d; ++r) v += f[r + 1] * static_cast<long>(a(r, col));
        if (argmin[y].empty() || v < mins[y]) {
          mins[y] = v;
          argmin[y].assign(1, col);
        } else if (v == mins[y]) {
          argmin[y].push_back(col);
        }
      }
      total += mins[y];
    }
    if (total != -f[0]) continue;

    // Sums of per-dyad minimizers.
    std::set<std::vector<std::int64_t>> sums;
    std::vector<std::size_t> pick(dyads, 0);
    for (;;) {
      std::vector<std::int64_t> s(d, 0);
      for (std::size_t y = 0; y < dyads; ++y) {
        const std::size_t col = argmin[y][pick[y]];
        for (std::size_t r = 0; r < d; ++r) s[r] += a(r, col);
      }
      sums.insert(std::move(s));
      std::size_t y = 0;
      while (y < dyads && ++pick[y] == argmin[y].size()) pick[y++] = 0;
      if (y == dyads) break;
    }
    bool ok = true;
    for (const auto& v : hull.vertices) {
      Integer e = f[0];
      for (std::size_t r = 0; r < d; ++r) e += f[r + 1] * static_cast<long>(v.t[r]);
      const bool on_face = e == 0;
      if (on_face != (sums.count(v.t) > 0)) {
        ok = false;
        break;
      }
    }
    if (ok) ++passed;
  }
  return passed;
}

// ---------------------------------------------------------------------------
// Zero patterns of cone(A_n)

std::string_view zero_pattern_kind_name(ZeroPattern::Kind k) {
  switch (k) {
    case ZeroPattern::Kind::RowMargin:
      return "row-margin";
    case ZeroPattern::Kind::ColumnMargin:
      return "column-margin";
    case ZeroPattern::Kind::Structural:
      return "structural";
    case ZeroPattern::Kind::Other:
      break;
  }
  return "other";
}

std::string ZeroPattern::render() const {
  std::ostringstream os;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > 0) os << ' ';
      if (i == j) {
        os << 'x';
      } else {
        os << (zero[static_cast<std::size_t>(i * n + j)] ? '0' : '.');
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

ZeroPattern::Kind classify_pattern(int n, const std::vector<int>& zero) {
  auto cell = [&](int i, int j) { return zero[static_cast<std::size_t>(i * n + j)] != 0; };
  for (int i = 0; i < n; ++i) {
    bool row = true;
    bool col = true;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        if (cell(a, b) != (a == i)) row = false;
        if (cell(a, b) != (b == i)) col = false;
      }
    }
    if (row) return ZeroPattern::Kind::RowMargin;
    if (col) return ZeroPattern::Kind::ColumnMargin;
  }
  // Structural: every off-diagonal entry inside an (n-1)-subset, nothing else.
  for (int out = 0; out < n; ++out) {
    bool match = true;
    for (int a = 0; a < n && match; ++a) {
      for (int b = 0; b < n && match; ++b) {
        if (a == b) continue;
        if (cell(a, b) != (a != out && b != out)) match = false;
      }
    }
    if (match) return ZeroPattern::Kind::Structural;
  }
  return ZeroPattern::Kind::Other;
}

}  // namespace

std::vector<ZeroPattern> zero_pattern_facets(int n, const ConeOptions& opts) {
  const DesignMatrix b = common_submatrix(n);
  const ConeDescription cone = cone_facets(b, opts);
  const std::vector<Dyad> dyads = dyads_of(n);
  std::vector<ZeroPattern> out;
  out.reserve(cone.facets.size());
  for (const auto& f : cone.facets) {
    ZeroPattern z;
    z.n = n;
    z.normal = f;
    z.zero.assign(static_cast<std::size_t>(n * n), 0);
    for (std::size_t col = 0; col < b.cols(); ++col) {
      Integer v = 0;
      for (std::size_t r = 0; r < b.rows(); ++r) v += f[r] * static_cast<long>(b(r, col));
      if (v <= 0) continue;
      const ColumnLabel& l = b.col_labels()[col];
      const Dyad dy = dyads[l.dyad];
      const bool forward = l.config == DyadConfig::Out;
      const int from = forward ? dy.i : dy.j;
      const int to = forward ? dy.j : dy.i;
      z.zero[static_cast<std::size_t>(from * n + to)] = 1;
    }
    z.kind = classify_pattern(n, z.zero);
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace p1
