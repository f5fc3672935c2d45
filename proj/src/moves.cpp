// SPDX-License-Identifier: Apache-2.0

#include "p1/moves.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace p1 {

std::string_view move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::Cycle:
      return "cycle";
    case MoveKind::T:
      return "T";
    case MoveKind::Q:
      return "Q";
    case MoveKind::Walk:
      return "walk";
    case MoveKind::Lift:
      return "lift";
    case MoveKind::Overlap:
      break;
  }
  return "overlap";
}

int MarkovMove::degree() const {
  int d = 0;
  for (int v : delta) d += v > 0 ? v : 0;
  return d;
}

bool MarkovMove::is_zero() const {
  return std::all_of(delta.begin(), delta.end(), [](int v) { return v == 0; });
}

bool MarkovMove::is_balanced() const {
  for (std::size_t y = 0; y * kConfigsPerDyad < delta.size(); ++y) {
    int s = 0;
    for (std::size_t k = 0; k < kConfigsPerDyad; ++k) s += delta[y * kConfigsPerDyad + k];
    if (s != 0) return false;
  }
  return true;
}

bool MarkovMove::is_applicable_shape() const {
  if (is_zero()) return false;
  for (std::size_t y = 0; y * kConfigsPerDyad < delta.size(); ++y) {
    int plus = 0, minus = 0, other = 0;
    for (std::size_t k = 0; k < kConfigsPerDyad; ++k) {
      const int v = delta[y * kConfigsPerDyad + k];
      if (v == 1) ++plus;
      else if (v == -1) ++minus;
      else if (v != 0) ++other;
    }
    if (other != 0) return false;
    if (plus + minus == 0) continue;
    if (plus != 1 || minus != 1) return false;
  }
  return true;
}

std::vector<std::size_t> MarkovMove::support_dyads() const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y * kConfigsPerDyad < delta.size(); ++y) {
    for (std::size_t k = 0; k < kConfigsPerDyad; ++k) {
      if (delta[y * kConfigsPerDyad + k] != 0) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

MarkovMove MarkovMove::negated() const {
  MarkovMove m = *this;
  for (int& v : m.delta) v = -v;
  return m;
}

std::vector<int> MarkovMove::canonical() const {
  std::vector<int> neg(delta.size());
  std::transform(delta.begin(), delta.end(), neg.begin(), [](int v) { return -v; });
  return std::min(delta, neg);
}

namespace {

std::string coord_str(int n, std::size_t coord) {
  const auto dyads = dyads_of(n);
  const Dyad d = dyads[coord / kConfigsPerDyad];
  std::ostringstream os;
  os << d.i + 1 << '-' << d.j + 1 << ':' << config_code(static_cast<DyadConfig>(coord % kConfigsPerDyad));
  return os.str();
}

}  // namespace

std::string MarkovMove::str() const {
  std::ostringstream os;
  os << degree() << " +";
  for (int sign : {1, -1}) {
    if (sign < 0) os << " -";
    for (std::size_t c = 0; c < delta.size(); ++c) {
      for (int k = 0; k < delta[c] * sign; ++k) os << ' ' << coord_str(n, c);
    }
  }
  return os.str();
}

MarkovMove MarkovMove::parse(int n, const std::string& line) {
  std::istringstream is(line);
  MarkovMove m(n, MoveKind::Cycle);
  int deg = 0;
  if (!(is >> deg)) throw std::invalid_argument("move line must start with its degree");
  std::string tok;
  int sign = 0;
  while (is >> tok) {
    if (tok == "+") {
      sign = 1;
      continue;
    }
    if (tok == "-") {
      sign = -1;
      continue;
    }
    if (sign == 0) throw std::invalid_argument("move entry before '+': " + tok);
    int i = 0, j = 0;
    char dash = 0, colon = 0;
    std::string code;
    std::istringstream ts(tok);
    if (!(ts >> i >> dash >> j >> colon >> code) || dash != '-' || colon != ':' || i < 1 || j < 1 || i == j ||
        i > n || j > n) {
      throw std::invalid_argument("bad move entry: " + tok);
    }
    const std::size_t y = dyad_index(n, i - 1, j - 1);
    DyadConfig c = parse_config_code(code);
    if (i > j) c = config_from_bits(in_bit(c), out_bit(c));
    m.at(y, c) += sign;
  }
  if (m.degree() != deg) throw std::invalid_argument("move degree does not match its entries");
  m.origin = "parsed";
  return m;
}

// ---------------------------------------------------------------------------
// Cycles of G_n

std::string CycleSpec::str() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < alphas.size(); ++k) os << 'a' << alphas[k] + 1 << 'b' << betas[k] + 1;
  return os.str();
}

namespace {

std::size_t edge_coord(int n, int from, int to) {
  const std::size_t y = dyad_index(n, from, to);
  const DyadConfig c = from < to ? DyadConfig::Out : DyadConfig::In;
  return y * kConfigsPerDyad + static_cast<std::size_t>(c);
}

struct CycleSearch {
  int n;
  std::size_t max_len;
  std::vector<int> alphas, betas;
  std::vector<bool> used_a, used_b;
  std::vector<CycleSpec> out;

  void from_alpha(int a) {
    for (int b = 0; b < n; ++b) {
      if (b == a || used_b[b]) continue;
      used_b[b] = true;
      betas.push_back(b);
      // close back to the start
      const int s = alphas.front();
      if (alphas.size() >= 2 && b != s && betas.front() < b) out.push_back({alphas, betas});
      if (2 * (alphas.size() + 1) <= max_len) {
        for (int a2 = s + 1; a2 < n; ++a2) {
          if (a2 == b || used_a[a2]) continue;
          used_a[a2] = true;
          alphas.push_back(a2);
          from_alpha(a2);
          alphas.pop_back();
          used_a[a2] = false;
        }
      }
      betas.pop_back();
      used_b[b] = false;
    }
  }
};

}  // namespace

std::vector<CycleSpec> enumerate_cycles(int n, std::size_t max_length) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  CycleSearch s{n, max_length == 0 ? static_cast<std::size_t>(2 * n) : max_length, {}, {}, {}, {}, {}};
  s.used_a.assign(n, false);
  s.used_b.assign(n, false);
  for (int a = 0; a < n; ++a) {
    s.used_a[a] = true;
    s.alphas.assign(1, a);
    s.from_alpha(a);
    s.used_a[a] = false;
  }
  std::stable_sort(s.out.begin(), s.out.end(), [](const CycleSpec& x, const CycleSpec& y) {
    if (x.length() != y.length()) return x.length() < y.length();
    return std::tie(x.alphas, x.betas) < std::tie(y.alphas, y.betas);
  });
  return s.out;
}

MarkovMove cycle_move(int n, const CycleSpec& c) {
  if (c.alphas.size() != c.betas.size() || c.alphas.size() < 2) throw std::invalid_argument("malformed cycle");
  MarkovMove m(n, MoveKind::Cycle);
  const std::size_t k = c.alphas.size();
  for (std::size_t i = 0; i < k; ++i) {
    m.delta[edge_coord(n, c.alphas[i], c.betas[i])] += 1;
    m.delta[edge_coord(n, c.alphas[(i + 1) % k], c.betas[i])] -= 1;
  }
  m.origin = "C[" + c.str() + "]";
  return m;
}

std::vector<MarkovMove> t_generators(int n, ReciprocationVariant variant) {
  if (variant != ReciprocationVariant::Zero) {
    throw InvalidVariant("T generators exist only without reciprocation");
  }
  std::vector<MarkovMove> out;
  const auto dyads = dyads_of(n);
  for (std::size_t y = 0; y < dyads.size(); ++y) {
    MarkovMove m(n, MoveKind::T);
    m.at(y, DyadConfig::Out) = 1;
    m.at(y, DyadConfig::In) = 1;
    m.at(y, DyadConfig::Mutual) = -1;
    m.at(y, DyadConfig::Null) = -1;
    m.origin = "T[" + std::to_string(dyads[y].i + 1) + std::to_string(dyads[y].j + 1) + "]";
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MarkovMove> q_generators(int n) {
  std::vector<MarkovMove> out;
  auto mutual = [n](int a, int b) { return dyad_index(n, a, b) * kConfigsPerDyad + 3; };
  auto pair_str = [](int a, int b) { return std::to_string(a + 1) + std::to_string(b + 1); };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          // the three perfect matchings of {i,j,k,l}
          const int match[3][4] = {{i, j, k, l}, {i, k, j, l}, {i, l, j, k}};
          for (int x = 0; x < 3; ++x) {
            for (int w = x + 1; w < 3; ++w) {
              MarkovMove m(n, MoveKind::Q);
              m.delta[mutual(match[x][0], match[x][1])] += 1;
              m.delta[mutual(match[x][2], match[x][3])] += 1;
              m.delta[mutual(match[w][0], match[w][1])] -= 1;
              m.delta[mutual(match[w][2], match[w][3])] -= 1;
              m.origin = "Q[" + pair_str(match[x][0], match[x][1]) + "|" + pair_str(match[x][2], match[x][3]) +
                         ">" + pair_str(match[w][0], match[w][1]) + "|" + pair_str(match[w][2], match[w][3]) + "]";
              out.push_back(std::move(m));
            }
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Even closed walks of K_n

std::string_view walk_kind_name(WalkSpec::Kind k) {
  switch (k) {
    case WalkSpec::Kind::EvenCycle:
      return "even-cycle";
    case WalkSpec::Kind::SharedVertex:
      return "shared-vertex";
    case WalkSpec::Kind::Joined:
      break;
  }
  return "joined";
}

namespace {

using EdgeMultiset = std::vector<std::pair<int, int>>;

bool vertex_balanced(int n, const EdgeMultiset& plus, const EdgeMultiset& minus) {
  std::vector<int> deg(n, 0);
  for (auto [a, b] : plus) {
    ++deg[a];
    ++deg[b];
  }
  for (auto [a, b] : minus) {
    --deg[a];
    --deg[b];
  }
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 0; });
}

// No proper nonempty sub-binomial u+ | f+, u- | f- is balanced.
bool primitive_walk(int n, const EdgeMultiset& plus, const EdgeMultiset& minus) {
  const std::size_t p = plus.size(), q = minus.size();
  for (std::uint32_t sp = 0; sp < (1u << p); ++sp) {
    for (std::uint32_t sq = 0; sq < (1u << q); ++sq) {
      if (sp == 0 && sq == 0) continue;
      if (sp == (1u << p) - 1 && sq == (1u << q) - 1) continue;
      EdgeMultiset a, b;
      for (std::size_t k = 0; k < p; ++k) {
        if (sp >> k & 1u) a.push_back(plus[k]);
      }
      for (std::size_t k = 0; k < q; ++k) {
        if (sq >> k & 1u) b.push_back(minus[k]);
      }
      if (vertex_balanced(n, a, b)) return false;
    }
  }
  return true;
}

WalkSpec::Kind classify_walk(const std::vector<int>& walk) {
  std::set<int> verts(walk.begin(), walk.end());
  std::set<std::pair<int, int>> edges;
  bool repeated = false;
  for (std::size_t k = 0; k < walk.size(); ++k) {
    const int a = walk[k], b = walk[(k + 1) % walk.size()];
    repeated |= !edges.insert({std::min(a, b), std::max(a, b)}).second;
  }
  if (verts.size() == walk.size()) return WalkSpec::Kind::EvenCycle;
  if (!repeated && verts.size() + 1 == walk.size()) return WalkSpec::Kind::SharedVertex;
  return WalkSpec::Kind::Joined;
}

struct WalkSearch {
  int n;
  std::size_t max_edges;
  std::vector<int> walk;
  std::set<std::vector<int>> seen;
  std::vector<std::pair<WalkSpec, MarkovMove>> out;

  void close() {
    const std::size_t len = walk.size();
    MarkovMove m(n, MoveKind::Walk);
    for (std::size_t k = 0; k < len; ++k) {
      const int a = walk[k], b = walk[(k + 1) % len];
      m.delta[dyad_index(n, a, b) * kConfigsPerDyad + 3] += (k % 2 == 0) ? 1 : -1;
    }
    if (m.is_zero()) return;
    if (!seen.insert(m.canonical()).second) return;
    EdgeMultiset plus, minus;
    const auto dyads = dyads_of(n);
    for (std::size_t y = 0; y < dyads.size(); ++y) {
      const int v = m.delta[y * kConfigsPerDyad + 3];
      for (int c = 0; c < std::abs(v); ++c) (v > 0 ? plus : minus).push_back({dyads[y].i, dyads[y].j});
    }
    if (!primitive_walk(n, plus, minus)) return;
    std::ostringstream os;
    os << "W[";
    for (int v : walk) os << v + 1;
    os << "]";
    m.origin = os.str();
    out.push_back({WalkSpec{walk, classify_walk(walk)}, std::move(m)});
  }

  void extend() {
    const int last = walk.back();
    if (walk.size() >= 4 && walk.size() % 2 == 0 && last != walk.front()) close();
    if (walk.size() == max_edges) return;
    for (int v = walk.front(); v < n; ++v) {
      if (v == last) continue;
      walk.push_back(v);
      extend();
      walk.pop_back();
    }
  }
};

}  // namespace

std::vector<std::pair<WalkSpec, MarkovMove>> enumerate_walks(int n, std::size_t max_edges) {
  WalkSearch s{n, max_edges, {}, {}, {}};
  for (int v = 0; v < n; ++v) {
    s.walk.assign(1, v);
    s.extend();
  }
  std::stable_sort(s.out.begin(), s.out.end(), [](const auto& x, const auto& y) {
    return x.second.degree() < y.second.degree();
  });
  return s.out;
}

std::vector<MarkovMove> walk_moves(int n, std::size_t max_edges) {
  std::vector<MarkovMove> out;
  for (auto& [spec, m] : enumerate_walks(n, max_edges)) out.push_back(std::move(m));
  return out;
}

// ---------------------------------------------------------------------------
// Lifting and overlaps

namespace {

void lift_in_place(MarkovMove& m, Pad pad) {
  const std::size_t padc = pad == Pad::Null ? 0 : 3;
  for (std::size_t y = 0; y * kConfigsPerDyad < m.delta.size(); ++y) {
    int s = 0;
    for (std::size_t k = 0; k < kConfigsPerDyad; ++k) s += m.delta[y * kConfigsPerDyad + k];
    m.delta[y * kConfigsPerDyad + padc] -= s;
  }
}

// Out+In on one side of a dyad is a Mutual edge when there is no
// reciprocation effect.
void rewrite_pairs(std::vector<int>& side) {
  for (std::size_t y = 0; y * kConfigsPerDyad < side.size(); ++y) {
    int* d = side.data() + y * kConfigsPerDyad;
    const int pairs = std::min(d[1], d[2]);
    d[1] -= pairs;
    d[2] -= pairs;
    d[3] += pairs;
  }
}

MarkovMove combine(const MarkovMove& f, const MarkovMove& g, bool rewrite) {
  if (f.n != g.n) throw std::invalid_argument("moves on different node counts");
  const auto fs = f.support_dyads();
  const auto gs = g.support_dyads();
  std::vector<std::size_t> common;
  std::set_intersection(fs.begin(), fs.end(), gs.begin(), gs.end(), std::back_inserter(common));
  if (common.empty()) throw std::invalid_argument("overlap needs a shared dyad");

  std::vector<int> pos(f.delta.size(), 0), neg(f.delta.size(), 0);
  for (const MarkovMove* m : {&f, &g}) {
    for (std::size_t c = 0; c < m->delta.size(); ++c) {
      if (c % kConfigsPerDyad == 0) continue;  // drop (0,0) padding
      const int v = m->delta[c];
      if (v > 0) pos[c] += v;
      if (v < 0) neg[c] -= v;
    }
  }
  if (rewrite) {
    rewrite_pairs(pos);
    rewrite_pairs(neg);
  }
  MarkovMove out(f.n, MoveKind::Overlap);
  for (std::size_t c = 0; c < pos.size(); ++c) out.delta[c] = pos[c] - neg[c];
  lift_in_place(out, Pad::Null);
  if (out.is_zero()) throw EmptyMove("overlap cancels completely");
  out.parents = {f.origin, g.origin};
  out.origin = std::string(rewrite ? "X(" : "S(") + f.origin + "," + g.origin + ")";
  return out;
}

// Non-(0,0) positive degree.
int simple_degree(const MarkovMove& m) {
  int d = 0;
  for (std::size_t c = 0; c < m.delta.size(); ++c) {
    if (c % kConfigsPerDyad != 0 && m.delta[c] > 0) d += m.delta[c];
  }
  return d;
}

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};


struct SparseMove {
  std::vector<std::pair<std::size_t, int>> entries;  // (0,0) entries dropped
  std::vector<std::size_t> dyads;                    // full support, sorted
  std::uint64_t mask = 0;                            // dyads < 64
};

SparseMove sparse_of(const MarkovMove& m) {
  SparseMove s;
  for (std::size_t c = 0; c < m.delta.size(); ++c) {
    if (m.delta[c] == 0) continue;
    const std::size_t y = c / kConfigsPerDyad;
    if (s.dyads.empty() || s.dyads.back() != y) s.dyads.push_back(y);
    if (y < 64) s.mask |= std::uint64_t{1} << y;
    if (c % kConfigsPerDyad != 0) s.entries.push_back({c, m.delta[c]});
  }
  return s;
}

bool share_dyad(const SparseMove& f, const SparseMove& g) {
  if (f.mask & g.mask) return true;
  if ((f.dyads.empty() || f.dyads.back() < 64) && (g.dyads.empty() || g.dyads.back() < 64)) return false;
  std::size_t i = 0, j = 0;
  while (i < f.dyads.size() && j < g.dyads.size()) {
    if (f.dyads[i] == g.dyads[j]) return true;
    if (f.dyads[i] < g.dyads[j]) ++i;
    else ++j;
  }
  return false;
}

// Same arithmetic as combine() on sparse inputs; pos and neg are zero on
// entry and on exit.  Returns false on full cancellation.
bool combine_sparse(const SparseMove& f, const SparseMove& g, int sign, bool rewrite, std::vector<int>& pos,
                    std::vector<int>& neg, std::vector<std::size_t>& touched, std::vector<int>& out) {
  touched.clear();
  std::set_union(f.dyads.begin(), f.dyads.end(), g.dyads.begin(), g.dyads.end(), std::back_inserter(touched));
  for (auto [c, v] : f.entries) {
    if (v > 0) pos[c] += v;
    else neg[c] -= v;
  }
  for (auto [c, v0] : g.entries) {
    const int v = sign * v0;
    if (v > 0) pos[c] += v;
    else neg[c] -= v;
  }
  out.assign(pos.size(), 0);
  bool any = false;
  for (auto y : touched) {
    int* p = pos.data() + y * kConfigsPerDyad;
    int* q = neg.data() + y * kConfigsPerDyad;
    if (rewrite) {
      const int a = std::min(p[1], p[2]);
      p[1] -= a;
      p[2] -= a;
      p[3] += a;
      const int b = std::min(q[1], q[2]);
      q[1] -= b;
      q[2] -= b;
      q[3] += b;
    }
    int s = 0;
    for (std::size_t k = 1; k < kConfigsPerDyad; ++k) {
      const int v = p[k] - q[k];
      out[y * kConfigsPerDyad + k] = v;
      s += v;
      any |= v != 0;
      p[k] = 0;
      q[k] = 0;
    }
    out[y * kConfigsPerDyad] = -s;
  }
  return any;
}

// Sign-normalized sparse form: first nonzero entry negative, then
// (coordinate, value) pairs.  Equal keys <=> equal canonical deltas.
std::vector<int> sparse_key(const std::vector<int>& delta) {
  std::vector<int> key;
  int sign = 0;
  for (std::size_t c = 0; c < delta.size(); ++c) {
    if (delta[c] == 0) continue;
    if (sign == 0) sign = delta[c] < 0 ? 1 : -1;
    key.push_back(static_cast<int>(c));
    key.push_back(sign * delta[c]);
  }
  return key;
}

}  // namespace

MarkovMove lift_move(const MarkovMove& q, Pad pad) {
  if (q.is_balanced()) {
    if (q.is_zero()) throw EmptyMove("empty move");
    return q;
  }
  MarkovMove m = q;
  lift_in_place(m, pad);
  if (m.is_zero()) throw EmptyMove("lift cancels completely");
  m.kind = MoveKind::Lift;
  m.parents = {q.origin};
  m.origin = std::string(pad == Pad::Null ? "L00(" : "L11(") + q.origin + ")";
  return m;
}

MarkovMove overlap(const MarkovMove& f, const MarkovMove& g, ReciprocationVariant variant) {
  return combine(f, g, variant == ReciprocationVariant::Zero);
}

bool in_kernel(const DesignMatrix& a, const MarkovMove& m) {
  if (m.delta.size() != a.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * m.delta[c];
    if (s != 0) return false;
  }
  return true;
}

std::vector<MarkovMove> generate_move_set(int n, ReciprocationVariant variant, const MoveSetOptions& opts) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (opts.depth < 1) throw std::invalid_argument("depth must be at least 1");
  // Every variant's kernel lies in the Zero kernel: moves are built there and
  // the variant's own kernel is applied as a filter at the end.
  const DesignMatrix z = build_design_matrix(n, ReciprocationVariant::Zero);
  const DesignMatrix a = build_design_matrix(n, variant);
  const bool filter = variant != ReciprocationVariant::Zero;

  std::vector<MarkovMove> raw;
  for (const auto& c : enumerate_cycles(n, opts.max_cycle_length)) raw.push_back(cycle_move(n, c));
  for (auto& q : q_generators(n)) raw.push_back(std::move(q));
  if (n >= 3) {
    for (auto& w : walk_moves(n, opts.walk_max_edges)) raw.push_back(std::move(w));
  }

  std::unordered_map<std::vector<int>, std::size_t, VectorHash> index;
  std::vector<MarkovMove> all;
  std::vector<SparseMove> sparse;
  auto add = [&](MarkovMove m, std::vector<int> key) -> bool {
    if (index.count(key)) return false;
    index.emplace(std::move(key), all.size());
    sparse.push_back(sparse_of(m));
    all.push_back(std::move(m));
    return true;
  };

  std::vector<std::size_t> base;
  for (const auto& q : raw) {
    MarkovMove src = q;
    // the Out+In -> Mutual rewrite applies to single moves as well
    std::vector<int> pos(q.delta.size()), neg(q.delta.size());
    for (std::size_t c = 0; c < q.delta.size(); ++c) {
      pos[c] = std::max(q.delta[c], 0);
      neg[c] = std::max(-q.delta[c], 0);
    }
    rewrite_pairs(pos);
    rewrite_pairs(neg);
    for (std::size_t c = 0; c < q.delta.size(); ++c) src.delta[c] = pos[c] - neg[c];
    if (src.is_zero()) continue;
    for (Pad pad : {Pad::Null, Pad::Mutual}) {
      if (pad == Pad::Mutual && (!opts.mutual_lifts || src.is_balanced())) continue;
      MarkovMove m;
      try {
        m = lift_move(src, pad);
      } catch (const EmptyMove&) {
        continue;
      }
      if (!in_kernel(z, m)) {
        if (pad == Pad::Null) throw std::logic_error("lifted move " + m.origin + " is not in the kernel");
        continue;
      }
      const std::size_t before = all.size();
      auto key = sparse_key(m.delta);
      if (add(std::move(m), std::move(key))) base.push_back(before);
    }
  }

  std::vector<std::size_t> partners;
  for (auto b : base) {
    if (simple_degree(all[b]) <= opts.overlap_max_degree) partners.push_back(b);
  }
  const std::size_t coords = 4 * dyad_count(n);
  std::vector<int> pos(coords, 0), neg(coords, 0), delta;
  std::vector<std::size_t> touched;
  std::vector<std::size_t> frontier = base;
  for (int level = 2; level <= opts.depth; ++level) {
    std::vector<std::size_t> next;
    for (auto fi : frontier) {
      for (auto gi : partners) {
        if (!share_dyad(sparse[fi], sparse[gi])) continue;
        for (int sign : {1, -1}) {
          for (bool rewrite : {true, false}) {
            if (!combine_sparse(sparse[fi], sparse[gi], sign, rewrite, pos, neg, touched, delta)) continue;
            int deg = 0;
            for (int v : delta) deg += v > 0 ? v : 0;
            if (deg > opts.result_max_degree) continue;
            auto key = sparse_key(delta);
            if (index.count(key)) continue;
            MarkovMove m(n, MoveKind::Overlap);
            m.delta = delta;
            const std::string g = sign > 0 ? all[gi].origin : "-" + all[gi].origin;
            m.parents = {all[fi].origin, g};
            m.origin = std::string(rewrite ? "X(" : "S(") + all[fi].origin + "," + g + ")";
            if (!in_kernel(z, m)) throw std::logic_error("overlap " + m.origin + " is not in the kernel");
            const std::size_t before = all.size();
            if (add(std::move(m), std::move(key))) next.push_back(before);
          }
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<MarkovMove> out;
  for (auto& m : all) {
    if (!m.is_applicable_shape()) continue;
    if (filter && !in_kernel(a, m)) continue;
    const auto key = m.canonical();
    if (key != m.delta) m = m.negated();
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<Network> apply(const Network& x, const MarkovMove& m, int direction) {
  if (x.n() != m.n) throw std::invalid_argument("move and network have different node counts");
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  std::vector<DyadConfig> configs = x.configs();
  for (std::size_t y = 0; y < configs.size(); ++y) {
    int plus = -1, minus = -1, touched = 0;
    for (std::size_t k = 0; k < kConfigsPerDyad; ++k) {
      const int v = direction * m.delta[y * kConfigsPerDyad + k];
      if (v == 0) continue;
      ++touched;
      if (v == 1) plus = static_cast<int>(k);
      else if (v == -1) minus = static_cast<int>(k);
      else return std::nullopt;
    }
    if (touched == 0) continue;
    if (touched != 2 || plus < 0 || minus < 0) return std::nullopt;
    if (configs[y] != static_cast<DyadConfig>(minus)) return std::nullopt;
    configs[y] = static_cast<DyadConfig>(plus);
  }
  return Network(x.n(), std::move(configs));
}

std::uint64_t move_set_hash(const std::vector<MarkovMove>& moves) {
  std::vector<std::vector<int>> keys;
  keys.reserve(moves.size());
  for (const auto& m : moves) keys.push_back(m.canonical());
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& k : keys) {
    for (int x : k) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace p1
