#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "p1/census.hpp"
#include "p1/inference.hpp"
#include "support.hpp"

using namespace p1;
using V = ReciprocationVariant;

namespace {

const Network kCycle = p1::test::one_hot_network(3, "0 0 1 0 0 1 0 0 0 0 1 0");

ProbabilityVector uniform(int n) {
  ProbabilityVector p;
  p.n = n;
  p.p.assign(4 * dyad_count(n), 0.25);
  return p;
}

std::set<SufficientStatistic> observable(const DesignMatrix& a) {
  std::set<SufficientStatistic> s;
  for_each_network(a.n(), 0, network_count(a.n()), [&](const Network& x) { s.insert(sufficient_statistic(a, x)); });
  return s;
}

}  // namespace

TEST_CASE("log likelihood is the log of the product") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  ProbabilityVector p;
  p.n = 4;
  for (std::size_t d = 0; d < dyad_count(4); ++d) {
    double w[4], s = 0;
    for (double& x : w) s += (x = u(rng));
    for (double x : w) p.p.push_back(x / s);
  }
  for (std::uint64_t idx : {0ULL, 5ULL, 999ULL, 4095ULL}) {
    const auto x = Network::from_index(4, idx);
    double prod = 1.0;
    for (std::size_t d = 0; d < x.dyads(); ++d) prod *= p.at(d, x.config(d));
    CHECK(std::exp(log_likelihood(p, x)) == doctest::Approx(prod).epsilon(1e-12));
  }
  p.p[0] = 0.0;
  CHECK(std::isinf(log_likelihood(p, Network(4))));
}

TEST_CASE("goodness-of-fit statistics at the uniform fit") {
  const auto p = uniform(3);
  CHECK(gof_statistic(kCycle, p, GofKind::PearsonStandard) == doctest::Approx(9.0));
  CHECK(gof_statistic(kCycle, p, GofKind::PearsonPaper) == doctest::Approx(36.0));
  CHECK(gof_statistic(kCycle, p, GofKind::LikelihoodRatio) == doctest::Approx(3.0 * std::log(4.0)));
  const auto other = p1::test::one_hot_network(3, "0 1 0 0 0 0 1 0 0 1 0 0");
  for (auto k : {GofKind::PearsonStandard, GofKind::PearsonPaper, GofKind::LikelihoodRatio}) {
    CHECK(gof_statistic(other, p, k) == doctest::Approx(gof_statistic(kCycle, p, k)));
    CHECK(parse_gof_kind(gof_kind_name(k)) == k);
  }
  auto q = p;
  q.p[2] = 0.0;  // the observed (0,1) of dyad {1,2}
  CHECK(std::isinf(gof_statistic(kCycle, q, GofKind::PearsonStandard)));
  CHECK_THROWS_AS(parse_gof_kind("chi"), std::invalid_argument);
}

TEST_CASE("the interior n = 3 statistic fits to all 0.25") {
  const auto z3 = build_design_matrix(3, V::Zero);
  for (auto method : {MleMethod::Newton, MleMethod::Scaling}) {
    const auto r = fit_mle(z3, sufficient_statistic(z3, kCycle), {.method = method});
    CHECK(r.exists);
    CHECK(r.zeta_hat.has_value());
    CHECK(r.moment_residual <= 1e-8);
    for (double x : r.p_hat.p) CHECK(std::abs(x - 0.25) <= 1e-8);
  }
}

TEST_CASE("refit from random parameters recovers the probabilities") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.7);
  for (int n : {3, 4, 5}) {
    for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
      const auto a = build_design_matrix(n, v);
      ParameterVector zeta;
      zeta.values.resize(a.rows() - a.lambda_rows());
      for (auto& z : zeta.values) z = g(rng);
      const auto p = probabilities_from_parameters(a, zeta);
      std::vector<double> t(a.rows(), 0.0);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) t[r] += a(r, c) * p.p[c];
      }
      FacialSet full;
      for (std::size_t c = 0; c < a.cols(); ++c) full.indices.push_back(c);
      const auto fit = fit_on_face(a, t, full);
      CHECK(fit.moment_residual <= 1e-8);
      for (std::size_t c = 0; c < a.cols(); ++c) CHECK(std::abs(fit.p_hat.p[c] - p.p[c]) <= 1e-6);
      // The fitted parameters reproduce the fitted probabilities.
      REQUIRE(fit.zeta_hat.has_value());
      const auto back = probabilities_from_parameters(a, *fit.zeta_hat);
      for (std::size_t c = 0; c < a.cols(); ++c) CHECK(std::abs(back.p[c] - fit.p_hat.p[c]) <= 1e-9);
    }
  }
}

TEST_CASE("extended MLE of the empty network") {
  const auto z3 = build_design_matrix(3, V::Zero);
  const auto r = extended_mle(z3, sufficient_statistic(z3, Network(3)));
  CHECK_FALSE(r.exists);
  CHECK_FALSE(r.zeta_hat.has_value());
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(r.p_hat.at(d, DyadConfig::Null) == doctest::Approx(1.0));
    CHECK(r.p_hat.at(d, DyadConfig::Mutual) == 0.0);
  }
}

TEST_CASE("extended MLE support equals the facial set on every n = 3 boundary statistic") {
  for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
    const auto a = build_design_matrix(3, v);
    std::size_t boundary = 0;
    for (const auto& t : observable(a)) {
      const auto r = fit_mle(a, t);
      CHECK(r.moment_residual <= 1e-8);
      if (r.exists) continue;
      ++boundary;
      const auto face = facial_set(a, t);
      std::vector<std::size_t> support;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (r.p_hat.p[c] > 1e-9) support.push_back(c);
      }
      CHECK(support == face.indices);
      CHECK(r.facial_set.indices == face.indices);
    }
    CHECK(boundary == (v == V::Zero ? 62u : observable(a).size()));
  }
}

TEST_CASE("statistics outside the cone are rejected") {
  const auto z3 = build_design_matrix(3, V::Zero);
  auto t = sufficient_statistic(z3, Network(3));
  t.t[3] = 5;
  CHECK_THROWS_AS(fit_mle(z3, t), InfeasibleStatistic);
}

TEST_CASE("moment residual") {
  const auto z3 = build_design_matrix(3, V::Zero);
  const auto t = sufficient_statistic(z3, kCycle);
  std::vector<double> td(t.t.begin(), t.t.end());
  CHECK(moment_residual(z3, uniform(3), td) == doctest::Approx(0.0));
  td[0] += 0.5;
  CHECK(moment_residual(z3, uniform(3), td) == doctest::Approx(0.5));
}
