// SPDX-License-Identifier: Apache-2.0
//
// Likelihood, goodness-of-fit statistics and (extended) maximum likelihood
// estimation by solving the moment equations A p = t.

#ifndef P1_INFERENCE_HPP
#define P1_INFERENCE_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "p1/geometry.hpp"
#include "p1/model.hpp"

namespace p1 {

/// Sum over dyads of log p at the observed configuration; -inf when one of
/// them has probability 0.
double log_likelihood(const ProbabilityVector& p, const Network& x);

enum class GofKind {
  PearsonStandard,  // sum (x - p)^2 / p
  PearsonPaper,     // sum (x - p)^2 / p^2
  LikelihoodRatio,  // sum x log(x / p), no factor 2
};

std::string_view gof_kind_name(GofKind k);
GofKind parse_gof_kind(std::string_view name);

/// Coordinates with p = 0 and x = 0 are skipped; p = 0 with x = 1 gives +inf.
double gof_statistic(const Network& x, const ProbabilityVector& p_hat, GofKind kind);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

enum class MleMethod { Newton, Scaling };

struct MleOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  MleMethod method = MleMethod::Newton;
};

struct MleResult {
  ProbabilityVector p_hat;
  /// Absent for the extended MLE (some parameters are at -infinity).
  std::optional<ParameterVector> zeta_hat;
  bool exists = false;
  FacialSet facial_set;
  double moment_residual = 0.0;
  int iterations = 0;
  /// Non-lambda rows pinned to 0 to fix the gauge of zeta.
  std::vector<std::string> gauge;
};

/// MLE if t is in the relative interior of cone(A), the extended MLE
/// otherwise.  Throws InfeasibleStatistic when t is outside the cone.
MleResult fit_mle(const DesignMatrix& a, const SufficientStatistic& t, const MleOptions& opts = {});

/// Same, but reports exists=false through the extended fit explicitly.
MleResult extended_mle(const DesignMatrix& a, const SufficientStatistic& t, const MleOptions& opts = {});

/// Solves the moment equations restricted to the columns of `face` for a
/// real target (which must be in the relative interior of that face).
MleResult fit_on_face(const DesignMatrix& a, std::span<const double> t, const FacialSet& face,
                      const MleOptions& opts = {});

/// sup-norm of A p - t.
double moment_residual(const DesignMatrix& a, const ProbabilityVector& p, std::span<const double> t);

}  // namespace p1

#endif  // P1_INFERENCE_HPP
