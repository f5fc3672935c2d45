#include <doctest.h>

#include <map>
#include <set>

#include "p1/census.hpp"
#include "p1/fiber.hpp"
#include "support.hpp"

using namespace p1;
using V = ReciprocationVariant;

namespace {

const Network kCycleA = p1::test::one_hot_network(3, "0 0 1 0 0 1 0 0 0 0 1 0");
const Network kCycleB = p1::test::one_hot_network(3, "0 1 0 0 0 0 1 0 0 1 0 0");

/// Fiber by scanning the whole sample space.
std::vector<Network> scan_fiber(const DesignMatrix& a, const SufficientStatistic& t) {
  std::vector<Network> out;
  for_each_network(a.n(), 0, network_count(a.n()), [&](const Network& x) {
    if (sufficient_statistic(a, x) == t) out.push_back(x);
  });
  return out;
}

}  // namespace

TEST_CASE("the 3-cycle fiber") {
  const auto z3 = build_design_matrix(3, V::Zero);
  const auto f = enumerate_fiber(z3, sufficient_statistic(z3, kCycleA));
  REQUIRE(f.members.size() == 2);
  CHECK(std::set<Network>(f.members.begin(), f.members.end()) == std::set<Network>{kCycleA, kCycleB});
  const auto moves = generate_move_set(3, V::Zero);
  CHECK(check_connectivity(f, moves).connected);
  CHECK_FALSE(check_connectivity(f, {}).connected);
  CHECK(check_connectivity(f, {}).components.size() == 2);
}

TEST_CASE("fiber enumeration against a full scan") {
  for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
    const auto a = build_design_matrix(4, v);
    for (std::uint64_t idx : {0ULL, 17ULL, 1234ULL, 2931ULL, 4095ULL}) {
      const auto x = Network::from_index(4, idx);
      const auto t = sufficient_statistic(a, x);
      CHECK(enumerate_fiber(a, t).members == scan_fiber(a, t));
    }
  }
  CHECK_THROWS_AS(enumerate_fiber(build_design_matrix(6, V::Zero), SufficientStatistic{}), CapacityError);
}

TEST_CASE("fiber sizes partition the n = 4 sample space") {
  for (auto v : {V::Zero, V::Constant}) {
    std::uint64_t total = 0;
    const auto fibers = all_fibers(4, v, 2);
    for (const auto& f : fibers) total += f.members.size();
    CHECK(total == 4096);
    CHECK(fibers.size() == (v == V::Zero ? 2656u : 3150u));
  }
}

TEST_CASE("pruned moves never act inside the fiber") {
  for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
    const auto a = build_design_matrix(4, v);
    const auto moves = generate_move_set(4, v);
    std::size_t dropped_total = 0;
    for (const auto& f : all_fibers(4, v, 2)) {
      if (f.members.size() < 2) continue;
      const auto kept = moves_for_fiber(a, f.t, moves);
      std::set<std::vector<int>> kept_keys;
      for (const auto& m : kept) kept_keys.insert(m.canonical());
      for (const auto& m : moves) {
        if (kept_keys.count(m.canonical())) continue;
        ++dropped_total;
        for (const auto& x : f.members) {
          if (apply(x, m, 1) || apply(x, m, -1)) FAIL("pruned move acts on a fiber member");
        }
      }
    }
    CHECK(dropped_total > 0);
  }
}

TEST_CASE("compiled moves agree with apply") {
  const auto moves = generate_move_set(4, V::Zero);
  for (std::uint64_t idx = 0; idx < 4096; idx += 37) {
    const auto x = Network::from_index(4, idx);
    for (const auto& m : moves) {
      const CompiledMove cm(m);
      for (int dir : {1, -1}) {
        const auto y = apply(x, m, dir);
        CHECK(cm.applies(x.configs(), dir) == y.has_value());
        if (y) {
          auto c = x.configs();
          cm.apply(c, dir);
          CHECK(Network(4, c) == *y);
        }
      }
    }
  }
}

TEST_CASE("gf comparison") {
  CHECK(gf_exceeds(2.0, 1.0));
  CHECK_FALSE(gf_exceeds(1.0, 1.0));
  CHECK(gf_exceeds(1.0, 1.0, true));
  CHECK_FALSE(gf_exceeds(1.0 + 1e-14, 1.0));
  CHECK_FALSE(gf_exceeds(0.5, 1.0, true));
}

TEST_CASE("exact alpha") {
  const auto z3 = build_design_matrix(3, V::Zero);
  for (auto k : {GofKind::PearsonStandard, GofKind::PearsonPaper, GofKind::LikelihoodRatio}) {
    CHECK(exact_alpha(z3, kCycleA, k) == 0);
    CHECK(exact_alpha(z3, kCycleB, k) == 0);
    CHECK(exact_alpha(z3, kCycleA, k, true) == 1);
  }
  // A second pass over a full scan of the sample space.
  const auto a = build_design_matrix(4, V::Zero);
  for (std::uint64_t idx : {1234ULL, 2931ULL, 3003ULL}) {
    const auto x = Network::from_index(4, idx);
    const auto t = sufficient_statistic(a, x);
    const auto members = scan_fiber(a, t);
    const auto fit = fit_mle(a, t);
    const double gx = gof_statistic(x, fit.p_hat, GofKind::PearsonStandard);
    std::size_t above = 0;
    for (const auto& y : members) above += gf_exceeds(gof_statistic(y, fit.p_hat, GofKind::PearsonStandard), gx);
    Rational want(static_cast<long>(above), static_cast<long>(members.size()));
    want.canonicalize();
    CHECK(exact_alpha(a, x) == want);
  }
}

TEST_CASE("walk on the 3-cycle fiber") {
  const auto z3 = build_design_matrix(3, V::Zero);
  const auto moves = generate_move_set(3, V::Zero);
  WalkOptions o;
  o.steps = 100'000;
  o.record_visits = true;
  const auto r = walk_gof(z3, kCycleA, moves, o);
  CHECK(r.alpha_hat == 0.0);
  CHECK(r.exceed_count == 0);
  CHECK(r.steps == 100'000);
  CHECK(r.distinct_states_visited == 2);
  REQUIRE(r.visits.size() == 2);
  const double freq = static_cast<double>(r.visits[0].second) / static_cast<double>(r.steps);
  CHECK(freq == doctest::Approx(0.5).epsilon(0.04));
  CHECK(std::abs(freq - 0.5) <= 0.02);
  CHECK(r.move_set_hash == move_set_hash(moves));

  const auto again = walk_gof(z3, kCycleA, moves, o);
  CHECK(again.visits == r.visits);
  o.seed = 99;
  CHECK(walk_gof(z3, kCycleA, moves, o).visits != r.visits);
}

TEST_CASE("walk argument checks") {
  const auto z3 = build_design_matrix(3, V::Zero);
  const auto moves = generate_move_set(3, V::Zero);
  WalkOptions o;
  o.steps = 0;
  CHECK_THROWS_AS(walk_gof(z3, kCycleA, moves, o), std::invalid_argument);
  o.steps = 10;
  o.thinning = 0;
  CHECK_THROWS_AS(walk_gof(z3, kCycleA, moves, o), std::invalid_argument);
  CHECK_THROWS_AS(walk_gof(z3, kCycleA, std::vector<MarkovMove>{}, WalkOptions{}), std::invalid_argument);
}

TEST_CASE("walk estimates on a few n = 4 fibers") {
  const auto a = build_design_matrix(4, V::Zero);
  const auto moves = generate_move_set(4, V::Zero);
  for (std::uint64_t idx : {1234ULL, 2931ULL}) {
    const auto x = Network::from_index(4, idx);
    const double exact = exact_alpha(a, x).get_d();
    WalkOptions o;
    o.steps = 50'000;
    const auto r = walk_gof(a, x, moves, o);
    CHECK(std::abs(r.alpha_hat - exact) <= 0.05);
    CHECK(r.moves_used <= moves.size());
  }
}
