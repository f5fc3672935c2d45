#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "p1/moves.hpp"
#include "support.hpp"

using namespace p1;
using p1::test::binomial;
using V = ReciprocationVariant;

namespace {

/// Cycles of G_n by length, counted by plain DFS from the smallest vertex
/// (each cycle is found once per direction).
std::map<std::size_t, std::size_t> brute_force_cycles(int n) {
  const int v = 2 * n;
  auto adjacent = [n](int a, int b) {
    if ((a < n) == (b < n)) return false;
    const int i = a < n ? a : b;
    const int j = (a < n ? b : a) - n;
    return i != j;
  };
  std::map<std::size_t, std::size_t> twice;
  std::vector<int> path;
  std::vector<bool> used(v, false);
  std::function<void(int)> dfs = [&](int cur) {
    for (int nxt = path[0] + 1; nxt < v; ++nxt) {
      if (!adjacent(cur, nxt) || used[nxt]) continue;
      used[nxt] = true;
      path.push_back(nxt);
      dfs(nxt);
      path.pop_back();
      used[nxt] = false;
    }
    if (path.size() >= 4 && adjacent(cur, path[0])) ++twice[path.size()];
  };
  for (int s = 0; s < v; ++s) {
    path = {s};
    used.assign(v, false);
    used[s] = true;
    dfs(s);
  }
  for (auto& [len, c] : twice) c /= 2;
  return twice;
}

bool in_nonlambda_kernel(int n, V v, const MarkovMove& m) {
  const auto a = p1::test::oracle_design(n, v);
  const auto prod = p1::test::dense_multiply(a, m.delta);
  for (std::size_t r = dyad_count(n); r < a.rows; ++r) {
    if (prod[r] != 0) return false;
  }
  return true;
}

bool in_full_kernel(int n, V v, const MarkovMove& m) {
  const auto prod = p1::test::dense_multiply(p1::test::oracle_design(n, v), m.delta);
  return std::all_of(prod.begin(), prod.end(), [](auto x) { return x == 0; });
}

}  // namespace

TEST_CASE("cycles of G_n against brute force") {
  CHECK(enumerate_cycles(3).size() == 1);
  CHECK(enumerate_cycles(3, 6).front().length() == 6);
  for (int n = 3; n <= 5; ++n) {
    std::map<std::size_t, std::size_t> ours;
    for (const auto& c : enumerate_cycles(n)) ++ours[c.length()];
    CHECK(ours == brute_force_cycles(n));
  }
  CHECK(enumerate_cycles(4, 4).size() == 6);
}

TEST_CASE("cycle binomials") {
  const auto cubic = binomial(3, {{1, 2, "01"}, {1, 3, "10"}, {2, 3, "01"}}, {{1, 2, "10"}, {1, 3, "01"}, {2, 3, "10"}});
  const auto six = cycle_move(3, enumerate_cycles(3).front());
  CHECK(six.canonical() == cubic.canonical());

  // A 4-cycle a_i b_k a_j b_l gives p_ik(1,0) p_jl(1,0) - p_il(1,0) p_jk(1,0).
  const auto quad = cycle_move(4, CycleSpec{{0, 1}, {2, 3}});
  CHECK(quad.canonical() == binomial(4, {{1, 3, "10"}, {2, 4, "10"}}, {{2, 3, "10"}, {1, 4, "10"}}).canonical());

  const CycleSpec ten{{0, 1, 4, 3, 2}, {3, 2, 0, 1, 4}};
  const auto five = binomial(5, {{1, 4, "10"}, {1, 5, "01"}, {2, 3, "10"}, {2, 4, "01"}, {3, 5, "10"}},
                             {{1, 4, "01"}, {1, 5, "10"}, {2, 3, "01"}, {2, 4, "10"}, {3, 5, "01"}});
  CHECK(cycle_move(5, ten).canonical() == five.canonical());
  std::vector<MarkovMove> all;
  for (const auto& c : enumerate_cycles(5)) all.push_back(cycle_move(5, c));
  CHECK(p1::test::contains(all, five));
  for (const auto& m : all) CHECK(in_nonlambda_kernel(5, V::Zero, m));
}

TEST_CASE("T generators") {
  const auto t2 = t_generators(2);
  REQUIRE(t2.size() == 1);
  const auto z2 = binomial(2, {{1, 2, "10"}, {1, 2, "01"}}, {{1, 2, "11"}, {1, 2, "00"}});
  CHECK(t2[0].canonical() == z2.canonical());
  for (int n = 2; n <= 6; ++n) {
    const auto t = t_generators(n);
    CHECK(t.size() == dyad_count(n));
    for (const auto& m : t) CHECK(in_full_kernel(n, V::Zero, m));
  }
  CHECK_THROWS_AS(t_generators(3, V::Constant), InvalidVariant);
}

TEST_CASE("Q generators") {
  CHECK(q_generators(3).empty());
  const auto q4 = q_generators(4);
  CHECK(p1::test::contains(q4, binomial(4, {{1, 2, "11"}, {3, 4, "11"}}, {{1, 3, "11"}, {2, 4, "11"}})));
  for (int n = 4; n <= 6; ++n) {
    for (const auto& q : q_generators(n)) {
      CHECK(in_nonlambda_kernel(n, V::EdgeDependent, q));
      CHECK(in_nonlambda_kernel(n, V::Constant, q));
      CHECK_FALSE(in_full_kernel(n, V::Zero, q));
      CHECK(in_full_kernel(n, V::Zero, lift_move(q)));
      CHECK(in_full_kernel(n, V::EdgeDependent, lift_move(q)));
    }
  }
}

TEST_CASE("even closed walks") {
  std::set<std::vector<int>> walks4, q4;
  for (const auto& m : walk_moves(4, 4)) walks4.insert(m.canonical());
  for (const auto& m : q_generators(4)) q4.insert(m.canonical());
  CHECK(walks4 == q4);

  bool found = false;
  for (const auto& [spec, m] : enumerate_walks(5, 6)) {
    CHECK(in_nonlambda_kernel(5, V::EdgeDependent, m));
    if (spec.kind == WalkSpec::Kind::SharedVertex) {
      found = true;
      CHECK(m.degree() == 3);
      for (std::size_t c = 0; c < m.delta.size(); ++c) {
        if (m.delta[c] != 0) CHECK(c % 4 == 3);
      }
    }
  }
  CHECK(found);
}

TEST_CASE("lifting") {
  const auto raw = binomial(4, {{1, 4, "01"}, {2, 3, "01"}}, {{1, 3, "01"}, {2, 4, "01"}});
  const auto printed = binomial(4, {{1, 3, "00"}, {2, 4, "00"}, {1, 4, "01"}, {2, 3, "01"}},
                                {{1, 3, "01"}, {2, 4, "01"}, {1, 4, "00"}, {2, 3, "00"}});
  const auto lifted = lift_move(raw);
  CHECK(lifted.canonical() == printed.canonical());
  CHECK(lifted.is_balanced());
  CHECK(lifted.is_applicable_shape());
  CHECK(lifted.degree() == 4);
  const auto mutual = lift_move(raw, Pad::Mutual);
  CHECK(mutual.is_balanced());
  CHECK(in_full_kernel(4, V::Zero, mutual));
  CHECK(lift_move(printed).canonical() == printed.canonical());
  CHECK_THROWS_AS(lift_move(MarkovMove(4, MoveKind::Cycle)), EmptyMove);
}

TEST_CASE("overlaps") {
  // Reverse the 3-cycle 1 -> 2 -> 3 -> 1, then swap heads of 1->3, 2->4.
  const auto rev = binomial(4, {{1, 2, "01"}, {2, 3, "01"}, {1, 3, "10"}}, {{1, 2, "10"}, {2, 3, "10"}, {1, 3, "01"}});
  const auto swap = binomial(4, {{1, 4, "10"}, {2, 3, "10"}}, {{1, 3, "10"}, {2, 4, "10"}});
  const auto printed = binomial(4, {{1, 2, "10"}, {1, 3, "11"}, {2, 3, "10"}, {2, 4, "10"}},
                                {{1, 2, "01"}, {1, 3, "10"}, {1, 4, "10"}, {2, 3, "11"}});
  CHECK(overlap(rev, swap, V::Zero).canonical() == p1::test::null_lift(printed).canonical());

  const auto f = binomial(4, {{1, 2, "10"}, {1, 3, "01"}, {2, 3, "10"}}, {{1, 2, "01"}, {1, 3, "10"}, {2, 3, "01"}});
  const auto g = binomial(4, {{1, 4, "01"}, {2, 3, "01"}}, {{1, 3, "01"}, {2, 4, "01"}});
  const auto worked = binomial(4, {{1, 2, "10"}, {1, 3, "01"}, {1, 4, "01"}, {2, 3, "11"}},
                               {{1, 2, "01"}, {1, 3, "11"}, {2, 3, "01"}, {2, 4, "01"}});
  const auto fg = overlap(f, g, V::Zero);
  CHECK(fg.canonical() == p1::test::null_lift(worked).canonical());
  CHECK(in_full_kernel(4, V::Zero, fg));
  CHECK(fg.is_applicable_shape());

  CHECK_THROWS_AS(overlap(f, f.negated(), V::Zero), EmptyMove);
  const auto far = binomial(5, {{4, 5, "10"}}, {{4, 5, "01"}});
  const auto near = binomial(5, {{1, 2, "10"}}, {{1, 2, "01"}});
  CHECK_THROWS_AS(overlap(near, far, V::Zero), std::invalid_argument);
}

TEST_CASE("printed generators are in the generated sets") {
  std::map<std::tuple<int, V, int>, std::vector<MarkovMove>> cache;
  auto set_for = [&](int n, V v, int depth) -> const std::vector<MarkovMove>& {
    auto key = std::make_tuple(n, v, depth);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, generate_move_set(n, v, {.depth = depth})).first;
    return it->second;
  };
  auto all = p1::test::golden_moves();
  for (auto& g : p1::test::golden_moves_extra()) all.push_back(g);
  for (const auto& g : all) {
    INFO(g.name);
    CHECK(in_full_kernel(g.n, g.variant, g.move));
    CHECK(g.move.is_applicable_shape());
    CHECK(p1::test::contains(set_for(g.n, g.variant, g.depth), g.move));
  }
}

TEST_CASE("small move sets") {
  const auto e3 = generate_move_set(3, V::EdgeDependent, {.depth = 1});
  REQUIRE(e3.size() == 1);
  const auto cubic = binomial(3, {{1, 2, "10"}, {2, 3, "10"}, {1, 3, "01"}}, {{1, 2, "01"}, {2, 3, "01"}, {1, 3, "10"}});
  CHECK(e3[0].canonical() == cubic.canonical());
  const auto c3 = generate_move_set(3, V::Constant, {.depth = 1});
  REQUIRE(c3.size() == 1);
  CHECK(c3[0].canonical() == cubic.canonical());
  CHECK_THROWS_AS(generate_move_set(3, V::Zero, {.depth = 0}), std::invalid_argument);
}

TEST_CASE("generated moves are kernel vectors with one +1 and one -1 per dyad") {
  for (int n = 3; n <= 5; ++n) {
    for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
      const auto moves = generate_move_set(n, v);
      CHECK_FALSE(moves.empty());
      std::set<std::vector<int>> keys;
      for (const auto& m : moves) {
        CHECK(in_full_kernel(n, v, m));
        CHECK(m.is_balanced());
        CHECK(m.is_applicable_shape());
        keys.insert(m.canonical());
      }
      CHECK(keys.size() == moves.size());
    }
  }
}

TEST_CASE("moves preserve the statistic wherever they apply") {
  for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
    const auto a = build_design_matrix(4, v);
    const auto moves = generate_move_set(4, v);
    std::size_t applied = 0;
    for_each_network(4, 0, network_count(4), [&](const Network& x) {
      const auto t = sufficient_statistic(a, x);
      for (const auto& m : moves) {
        for (int dir : {1, -1}) {
          if (auto y = apply(x, m, dir)) {
            ++applied;
            if (!(sufficient_statistic(a, *y) == t)) FAIL("statistic changed");
            if (!(apply(*y, m, -dir) == std::optional<Network>(x))) FAIL("move not reversible");
          }
        }
      }
    });
    CHECK(applied > 0);
  }
  const auto x = p1::test::one_hot_network(3, "0 0 1 0 0 1 0 0 0 0 1 0");
  const auto y = p1::test::one_hot_network(3, "0 1 0 0 0 0 1 0 0 1 0 0");
  const auto m = generate_move_set(3, V::Zero).front();
  const auto fwd = apply(x, m, 1), back = apply(x, m, -1);
  CHECK((fwd == std::optional<Network>(y) || back == std::optional<Network>(y)));
}

TEST_CASE("text form round trips") {
  for (const auto& m : generate_move_set(4, V::Zero)) {
    const auto back = MarkovMove::parse(4, m.str());
    CHECK(back.delta == m.delta);
  }
  CHECK_THROWS_AS(MarkovMove::parse(3, "2 + 1-2:10 - 1-2:01"), std::invalid_argument);
  CHECK_THROWS_AS(MarkovMove::parse(3, "1 + 1-4:10 - 1-2:01"), std::invalid_argument);
}

TEST_CASE("move set hash ignores order and sign") {
  auto moves = generate_move_set(4, V::EdgeDependent);
  const auto h = move_set_hash(moves);
  std::reverse(moves.begin(), moves.end());
  moves[0] = moves[0].negated();
  CHECK(move_set_hash(moves) == h);
  moves.pop_back();
  CHECK(move_set_hash(moves) != h);
}
