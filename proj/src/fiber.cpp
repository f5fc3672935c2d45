// SPDX-License-Identifier: Apache-2.0

#include "p1/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace p1 {

namespace {

void require_full(const DesignMatrix& a) {
  if (a.form() != MatrixForm::Full) throw std::invalid_argument("fibers need a Full design matrix");
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::string state_key(const std::vector<DyadConfig>& x) {
  return std::string(reinterpret_cast<const char*>(x.data()), x.size());
}

}  // namespace

Fiber enumerate_fiber(const DesignMatrix& a, const SufficientStatistic& t) {
  require_full(a);
  const int n = a.n();
  if (n > kMaxEnumerationNodes) {
    throw CapacityError("fiber enumeration is limited to n <= " + std::to_string(kMaxEnumerationNodes) +
                        "; use the fiber walk for larger networks");
  }
  if (t.size() != a.rows()) throw std::invalid_argument("statistic length does not match the matrix");
  const std::size_t d = dyad_count(n);
  const std::size_t rows = a.rows();

  // Suffix bounds on what the remaining dyads can still add to each row.
  std::vector<std::int64_t> lo((d + 1) * rows, 0), hi((d + 1) * rows, 0);
  for (std::size_t k = d; k-- > 0;) {
    for (std::size_t r = 0; r < rows; ++r) {
      std::int64_t mn = a(r, k * kConfigsPerDyad), mx = mn;
      for (std::size_t c = 1; c < kConfigsPerDyad; ++c) {
        mn = std::min(mn, a(r, k * kConfigsPerDyad + c));
        mx = std::max(mx, a(r, k * kConfigsPerDyad + c));
      }
      lo[k * rows + r] = lo[(k + 1) * rows + r] + mn;
      hi[k * rows + r] = hi[(k + 1) * rows + r] + mx;
    }
  }

  Fiber out{t, {}};
  std::vector<std::int64_t> s(rows, 0);
  std::vector<DyadConfig> x(d, DyadConfig::Null);
  auto feasible = [&](std::size_t k) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (s[r] + lo[k * rows + r] > t.t[r] || s[r] + hi[k * rows + r] < t.t[r]) return false;
    }
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == d) {
      out.members.emplace_back(n, x);
      return;
    }
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
      const std::size_t col = k * kConfigsPerDyad + c;
      for (std::size_t r = 0; r < rows; ++r) s[r] += a(r, col);
      if (feasible(k + 1)) {
        x[k] = static_cast<DyadConfig>(c);
        self(self, k + 1);
      }
      for (std::size_t r = 0; r < rows; ++r) s[r] -= a(r, col);
    }
  };
  if (feasible(0)) dfs(dfs, 0);
  return out;
}

CompiledMove::CompiledMove(const MarkovMove& m) {
  for (std::size_t dy = 0; dy * kConfigsPerDyad < m.delta.size(); ++dy) {
    int plus = -1, minus = -1, touched = 0;
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
      const int v = m.delta[dy * kConfigsPerDyad + c];
      if (v == 0) continue;
      ++touched;
      if (v == 1 && plus < 0) {
        plus = static_cast<int>(c);
      } else if (v == -1 && minus < 0) {
        minus = static_cast<int>(c);
      } else {
        usable_ = false;
      }
    }
    if (touched == 0) continue;
    if (touched != 2 || plus < 0 || minus < 0) usable_ = false;
    if (usable_) {
      steps_.push_back({static_cast<std::uint32_t>(dy), static_cast<DyadConfig>(minus), static_cast<DyadConfig>(plus)});
    }
  }
  if (steps_.empty()) usable_ = false;
}

bool CompiledMove::applies(const std::vector<DyadConfig>& x, int direction) const {
  if (!usable_) return false;
  for (const auto& s : steps_) {
    if (x[s.dyad] != (direction > 0 ? s.minus : s.plus)) return false;
  }
  return true;
}

void CompiledMove::apply(std::vector<DyadConfig>& x, int direction) const {
  for (const auto& s : steps_) x[s.dyad] = direction > 0 ? s.plus : s.minus;
}

Connectivity check_connectivity(const Fiber& fiber, const std::vector<MarkovMove>& moves) {
  const std::size_t size = fiber.members.size();
  std::unordered_map<std::string, std::size_t> where;
  where.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) where.emplace(state_key(fiber.members[i].configs()), i);
  std::vector<CompiledMove> compiled;
  for (const auto& m : moves) {
    CompiledMove cm(m);
    if (cm.usable()) compiled.push_back(std::move(cm));
  }
  UnionFind uf(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (const auto& cm : compiled) {
      for (int dir : {1, -1}) {
        if (!cm.applies(fiber.members[i].configs(), dir)) continue;
        auto y = fiber.members[i].configs();
        cm.apply(y, dir);
        if (auto it = where.find(state_key(y)); it != where.end()) uf.unite(i, it->second);
      }
    }
  }
  std::unordered_map<std::size_t, std::size_t> slot;
  Connectivity out;
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t root = uf.find(i);
    auto [it, fresh] = slot.emplace(root, out.components.size());
    if (fresh) out.components.emplace_back();
    out.components[it->second].push_back(i);
  }
  std::stable_sort(out.components.begin(), out.components.end(),
                   [](const auto& l, const auto& r) { return l.size() > r.size(); });
  out.connected = out.components.size() <= 1;
  return out;
}

std::vector<MarkovMove> moves_for_fiber(const DesignMatrix& a, const SufficientStatistic& t,
                                        const std::vector<MarkovMove>& moves) {
  require_full(a);
  const std::size_t rows = a.rows();
  const std::size_t d = a.cols() / kConfigsPerDyad;
  // Per dyad and row: the least and largest entry over the four configs.
  std::vector<std::int64_t> lo(d * rows), hi(d * rows), lo_all(rows, 0), hi_all(rows, 0);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t r = 0; r < rows; ++r) {
      std::int64_t mn = a(r, k * kConfigsPerDyad), mx = mn;
      for (std::size_t c = 1; c < kConfigsPerDyad; ++c) {
        mn = std::min(mn, a(r, k * kConfigsPerDyad + c));
        mx = std::max(mx, a(r, k * kConfigsPerDyad + c));
      }
      lo[k * rows + r] = mn;
      hi[k * rows + r] = mx;
      lo_all[r] += mn;
      hi_all[r] += mx;
    }
  }
  // Fixing the touched dyads to one side of the move must leave t reachable
  // by the free dyads; a failure on either side rules the move out.
  std::vector<std::int64_t> fixed(rows), smin(rows), smax(rows);
  auto side_fits = [&](const MarkovMove& m, int sign) {
    std::fill(fixed.begin(), fixed.end(), 0);
    smin = lo_all;
    smax = hi_all;
    for (std::size_t k = 0; k < d; ++k) {
      bool touched = false;
      for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
        const int v = sign * m.delta[k * kConfigsPerDyad + c];
        if (v == 0) continue;
        touched = true;
        if (v > 0) {
          for (std::size_t r = 0; r < rows; ++r) fixed[r] += a(r, k * kConfigsPerDyad + c) * v;
        }
      }
      if (!touched) continue;
      for (std::size_t r = 0; r < rows; ++r) {
        smin[r] -= lo[k * rows + r];
        smax[r] -= hi[k * rows + r];
      }
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (fixed[r] + smin[r] > t.t[r] || fixed[r] + smax[r] < t.t[r]) return false;
    }
    return true;
  };
  std::vector<MarkovMove> out;
  for (const auto& m : moves) {
    if (m.delta.size() != a.cols()) throw std::invalid_argument("move does not match the matrix");
    if (side_fits(m, 1) && side_fits(m, -1)) out.push_back(m);
  }
  return out;
}

bool gf_exceeds(double gf_y, double gf_x, bool ties_count) {
  if (std::isinf(gf_x) || std::isinf(gf_y)) return ties_count ? gf_y >= gf_x : gf_y > gf_x;
  const double tol = 1e-9 * std::max(1.0, std::abs(gf_x));
  return ties_count ? gf_y >= gf_x - tol : gf_y > gf_x + tol;
}

WalkReport walk_gof(const DesignMatrix& a, const Network& x, const std::vector<MarkovMove>& moves,
                    const WalkOptions& opts) {
  require_full(a);
  const auto fit = fit_mle(a, sufficient_statistic(a, x));
  return walk_gof(a, x, fit.p_hat, moves, opts);
}

WalkReport walk_gof(const DesignMatrix& a, const Network& x, const ProbabilityVector& p_hat,
                    const std::vector<MarkovMove>& moves, const WalkOptions& opts) {
  require_full(a);
  if (opts.steps == 0) throw std::invalid_argument("the walk needs K >= 1 steps");
  if (opts.thinning == 0) throw std::invalid_argument("thinning must be at least 1");
  if (moves.empty()) throw std::invalid_argument("the walk needs a nonempty move set");
  const SufficientStatistic t = sufficient_statistic(a, x);
  std::vector<CompiledMove> compiled;
  if (opts.prune_to_fiber) {
    for (const auto& m : moves_for_fiber(a, t, moves)) compiled.emplace_back(m);
  } else {
    for (const auto& m : moves) compiled.emplace_back(m);
  }

  const double gf_x = gof_statistic(x, p_hat, opts.stat);
  std::mt19937_64 rng(opts.seed);
  WalkReport rep;
  rep.moves_used = compiled.size();
  if (compiled.empty()) compiled.emplace_back(moves.front());  // nothing can act: the chain stays put
  std::uniform_int_distribution<std::size_t> pick(0, 2 * compiled.size() - 1);

  rep.steps = opts.steps;
  rep.seed = opts.seed;
  rep.move_set_hash = move_set_hash(moves);
  rep.observed_gf = gf_x;

  std::vector<DyadConfig> state = x.configs();
  double gf_state = gf_x;
  bool exceeds = gf_exceeds(gf_state, gf_x, opts.ties_count);
  std::unordered_map<std::string, std::uint64_t> visits;
  std::uint64_t* here = &visits[state_key(state)];
  std::uint64_t accepted = 0;
  const std::uint64_t total = opts.burn_in + opts.steps * opts.thinning;

  for (std::uint64_t step = 1; step <= total; ++step) {
    const std::size_t u = pick(rng);
    const auto& cm = compiled[u / 2];
    const int dir = (u % 2 == 0) ? 1 : -1;
    if (cm.applies(state, dir)) {
      cm.apply(state, dir);
      ++accepted;
      const Network next(x.n(), state);
      if (opts.verify_closure && sufficient_statistic(a, next) != t) {
        throw std::logic_error("walk left the fiber; a move is not in the kernel of A");
      }
      gf_state = gof_statistic(next, p_hat, opts.stat);
      exceeds = gf_exceeds(gf_state, gf_x, opts.ties_count);
      here = &visits[state_key(state)];
    }
    if (step <= opts.burn_in || (step - opts.burn_in) % opts.thinning != 0) continue;
    if (exceeds) ++rep.exceed_count;
    ++*here;
  }

  rep.alpha_hat = static_cast<double>(rep.exceed_count) / static_cast<double>(rep.steps);
  rep.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  rep.distinct_states_visited = visits.size();
  if (opts.record_visits) {
    for (const auto& [key, count] : visits) {
      std::vector<DyadConfig> cfg(key.size());
      std::copy(key.begin(), key.end(), reinterpret_cast<char*>(cfg.data()));
      rep.visits.emplace_back(Network(x.n(), std::move(cfg)), count);
    }
    std::sort(rep.visits.begin(), rep.visits.end());
  }
  return rep;
}

Rational exact_alpha(const Fiber& fiber, const ProbabilityVector& p_hat, const Network& x, GofKind stat,
                     bool ties_count) {
  if (fiber.members.empty()) throw std::invalid_argument("empty fiber");
  const double gf_x = gof_statistic(x, p_hat, stat);
  long count = 0;
  for (const auto& y : fiber.members) {
    if (gf_exceeds(gof_statistic(y, p_hat, stat), gf_x, ties_count)) ++count;
  }
  Rational r(Integer(count), Integer(static_cast<unsigned long>(fiber.members.size())));
  r.canonicalize();
  return r;
}

Rational exact_alpha(const DesignMatrix& a, const Network& x, GofKind stat, bool ties_count) {
  const auto t = sufficient_statistic(a, x);
  const Fiber fiber = enumerate_fiber(a, t);
  const auto fit = fit_mle(a, t);
  return exact_alpha(fiber, fit.p_hat, x, stat, ties_count);
}

}  // namespace p1
