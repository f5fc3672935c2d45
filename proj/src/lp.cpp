// SPDX-License-Identifier: Apache-2.0

#include "p1/lp.hpp"

#include <stdexcept>

namespace p1 {

namespace {

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t ncols) : m_(m), w_(ncols + 1), t_(m * w_), obj_(w_), basis_(m) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r * w_ + c]; }
  Rational& rhs(std::size_t r) { return t_[r * w_ + w_ - 1]; }
  Rational& obj(std::size_t c) { return obj_[c]; }
  Rational& obj_value() { return obj_[w_ - 1]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return w_ - 1; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t e) {
    const Rational p = at(r, e);
    for (std::size_t c = 0; c < w_; ++c) {
      if (at(r, c) != 0) at(r, c) /= p;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational f = at(i, e);
      if (f == 0) continue;
      for (std::size_t c = 0; c < w_; ++c) {
        if (at(r, c) != 0) at(i, c) -= f * at(r, c);
      }
    }
    const Rational f = obj_[e];
    if (f != 0) {
      for (std::size_t c = 0; c < w_; ++c) {
        if (at(r, c) != 0) obj_[c] -= f * at(r, c);
      }
    }
    basis_[r] = e;
    ++pivots_;
  }

  void remove_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r * w_),
             t_.begin() + static_cast<std::ptrdiff_t>((r + 1) * w_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  /// Maximizes with objective row obj = c_B B^-1 A - c; only columns below
  /// `limit` may enter.  Returns false when unbounded.
  bool optimize(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t c = 0; c < limit; ++c) {
        if (obj_[c] < 0) {
          enter = c;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (at(r, enter) <= 0) continue;
        Rational ratio = rhs(r) / at(r, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::size_t pivots() const { return pivots_; }

 private:
  std::size_t m_;
  std::size_t w_;
  std::vector<Rational> t_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const RationalLP& lp) {
  const std::size_t m = lp.a.rows;
  const std::size_t nv = lp.a.cols;
  if (lp.b.size() != m || lp.c.size() != nv) throw std::invalid_argument("LP dimensions do not match");

  Tableau tab(m, nv + m);
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = lp.b[r] < 0;
    for (std::size_t c = 0; c < nv; ++c) tab.at(r, c) = flip ? Rational(-lp.a(r, c)) : lp.a(r, c);
    tab.at(r, nv + r) = 1;
    tab.rhs(r) = flip ? Rational(-lp.b[r]) : lp.b[r];
    tab.basis()[r] = nv + r;
  }

  // Phase 1: maximize -sum(artificials).
  for (std::size_t c = 0; c < nv; ++c) {
    Rational s = 0;
    for (std::size_t r = 0; r < m; ++r) s -= tab.at(r, c);
    tab.obj(c) = s;
  }
  {
    Rational s = 0;
    for (std::size_t r = 0; r < m; ++r) s -= tab.rhs(r);
    tab.obj_value() = s;
  }
  tab.optimize(nv);

  LpSolution out;
  if (tab.obj_value() < 0) {
    out.status = LpStatus::Infeasible;
    out.pivots = tab.pivots();
    return out;
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basis()[r] < nv) {
      ++r;
      continue;
    }
    std::size_t e = nv;
    for (std::size_t c = 0; c < nv; ++c) {
      if (tab.at(r, c) != 0) {
        e = c;
        break;
      }
    }
    if (e == nv) {
      tab.remove_row(r);
    } else {
      tab.pivot(r, e);
      ++r;
    }
  }

  // Phase 2 objective row.
  for (std::size_t c = 0; c < tab.cols(); ++c) tab.obj(c) = 0;
  tab.obj_value() = 0;
  for (std::size_t c = 0; c < nv; ++c) tab.obj(c) = -lp.c[c];
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    const std::size_t bv = tab.basis()[r];
    const Rational cb = lp.c[bv];
    if (cb == 0) continue;
    for (std::size_t c = 0; c < tab.cols(); ++c) {
      if (tab.at(r, c) != 0) tab.obj(c) += cb * tab.at(r, c);
    }
    tab.obj_value() += cb * tab.rhs(r);
  }

  if (!tab.optimize(nv)) {
    out.status = LpStatus::Unbounded;
    out.pivots = tab.pivots();
    return out;
  }
  out.status = LpStatus::Optimal;
  out.objective = tab.obj_value();
  out.x.assign(nv, Rational(0));
  for (std::size_t r = 0; r < tab.rows(); ++r) out.x[tab.basis()[r]] = tab.rhs(r);
  out.pivots = tab.pivots();
  return out;
}

}  // namespace p1
