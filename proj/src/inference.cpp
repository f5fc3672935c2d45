// SPDX-License-Identifier: Apache-2.0

#include "p1/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "p1/exact.hpp"

namespace p1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_n(const Network& x, const ProbabilityVector& p) {
  if (p.n != x.n() || p.p.size() != x.dyads() * kConfigsPerDyad) {
    throw std::invalid_argument("network and probability vector sizes differ");
  }
}

// Gauge preference for the free parameters: the rows listed first are kept.
std::vector<std::size_t> gauge_order(const DesignMatrix& a) {
  const auto& labels = a.row_labels();
  std::vector<std::size_t> first, late;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r].kind == RowLabel::Kind::Lambda) first.push_back(r);
  }
  auto take = [&](RowLabel::Kind kind, bool node_one) {
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r].kind != kind) continue;
      const bool is_one = labels[r].i == 0;
      if (kind == RowLabel::Kind::Theta || kind == RowLabel::Kind::Rho || is_one == node_one) {
        (node_one ? late : first).push_back(r);
      }
    }
  };
  take(RowLabel::Kind::Theta, false);
  take(RowLabel::Kind::Rho, false);
  take(RowLabel::Kind::RhoNode, false);
  take(RowLabel::Kind::Alpha, false);
  take(RowLabel::Kind::Beta, false);
  take(RowLabel::Kind::Alpha, true);
  take(RowLabel::Kind::Beta, true);
  take(RowLabel::Kind::RhoNode, true);
  first.insert(first.end(), late.begin(), late.end());
  return first;
}

// Log-linear model restricted to a set of columns, parametrized by an
// identifiable subset of the non-lambda rows.
class FaceModel {
 public:
  FaceModel(const DesignMatrix& a, const FacialSet& face, std::span<const double> t) : a_(a), t_(t.begin(), t.end()) {
    const std::size_t d = dyad_count(a.n());
    allowed_.assign(d, {});
    for (std::size_t col : face.indices) allowed_[col / kConfigsPerDyad].push_back(col);
    for (const auto& cols : allowed_) {
      if (cols.empty()) throw std::invalid_argument("face leaves a dyad without columns");
    }
    IntMatrix sub(a.rows(), face.indices.size());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t k = 0; k < face.indices.size(); ++k) sub(r, k) = a(r, face.indices[k]);
    }
    const std::size_t lam = a.lambda_rows();
    auto kept = independent_rows(sub, gauge_order(a));
    std::sort(kept.begin(), kept.end());
    for (std::size_t r : kept) {
      if (r >= lam) free_.push_back(r);
    }
    for (std::size_t r = lam; r < a.rows(); ++r) {
      if (!std::binary_search(free_.begin(), free_.end(), r)) pinned_.push_back(r);
    }
    zeta_.assign(free_.size(), 0.0);
    p_.assign(d * kConfigsPerDyad, 0.0);
  }

  std::size_t dim() const { return free_.size(); }
  const std::vector<std::size_t>& pinned() const { return pinned_; }
  const std::vector<double>& zeta() const { return zeta_; }
  const std::vector<double>& p() const { return p_; }

  // Recomputes p for zeta and returns the log-likelihood sum_r zeta_r t_r - sum_d log Z_d.
  double evaluate(const std::vector<double>& zeta) {
    double value = 0.0;
    for (std::size_t k = 0; k < free_.size(); ++k) value += zeta[k] * t_[free_[k]];
    for (const auto& cols : allowed_) {
      double eta[kConfigsPerDyad];
      double top = -kInf;
      for (std::size_t m = 0; m < cols.size(); ++m) {
        double s = 0.0;
        for (std::size_t k = 0; k < free_.size(); ++k) s += zeta[k] * static_cast<double>(a_(free_[k], cols[m]));
        eta[m] = s;
        top = std::max(top, s);
      }
      double z = 0.0;
      for (std::size_t m = 0; m < cols.size(); ++m) {
        eta[m] = std::exp(eta[m] - top);
        z += eta[m];
      }
      for (std::size_t m = 0; m < cols.size(); ++m) p_[cols[m]] = eta[m] / z;
      value -= top + std::log(z);
    }
    return value;
  }

  double set(std::vector<double> zeta) {
    zeta_ = std::move(zeta);
    return evaluate(zeta_);
  }

  Eigen::VectorXd gradient() const {
    Eigen::VectorXd g(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) {
      double s = 0.0;
      for (const auto& cols : allowed_) {
        for (std::size_t c : cols) s += static_cast<double>(a_(free_[k], c)) * p_[c];
      }
      g[static_cast<Eigen::Index>(k)] = t_[free_[k]] - s;
    }
    return g;
  }

  // Fisher information: sum over dyads of the covariance of the free rows.
  Eigen::MatrixXd information() const {
    const auto q = static_cast<Eigen::Index>(free_.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd mean(q), col(q);
    for (const auto& cols : allowed_) {
      mean.setZero();
      for (std::size_t c : cols) {
        for (Eigen::Index k = 0; k < q; ++k) col[k] = static_cast<double>(a_(free_[static_cast<std::size_t>(k)], c));
        mean += p_[c] * col;
        h.noalias() += p_[c] * col * col.transpose();
      }
      h.noalias() -= mean * mean.transpose();
    }
    return h;
  }

  double residual() const { return moment_residual_raw(); }

  ParameterVector full_zeta() const {
    const std::size_t lam = a_.lambda_rows();
    ParameterVector out{std::vector<double>(a_.rows() - lam, 0.0)};
    for (std::size_t k = 0; k < free_.size(); ++k) out.values[free_[k] - lam] = zeta_[k];
    return out;
  }

 private:
  double moment_residual_raw() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < a_.rows(); ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < a_.cols(); ++c) {
        if (const auto v = a_(r, c); v != 0) s += static_cast<double>(v) * p_[c];
      }
      worst = std::max(worst, std::abs(s - t_[r]));
    }
    return worst;
  }

  const DesignMatrix& a_;
  std::vector<double> t_;
  std::vector<std::vector<std::size_t>> allowed_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> pinned_;
  std::vector<double> zeta_;
  std::vector<double> p_;
};

// Backtracking: halve the step until the objective does not decrease.
bool line_search(FaceModel& model, double& value, const std::vector<double>& dir) {
  const std::vector<double> start = model.zeta();
  const double slack = 1e-13 * std::max(1.0, std::abs(value));
  double step = 1.0;
  for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
    std::vector<double> trial(start);
    for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += step * dir[k];
    const double v = model.evaluate(trial);
    if (std::isfinite(v) && v >= value - slack) {
      model.set(std::move(trial));
      value = v;
      return true;
    }
  }
  model.set(start);
  return false;
}

int run_newton(FaceModel& model, const MleOptions& opts) {
  double value = model.set(model.zeta());
  for (int it = 0; it < opts.max_iter; ++it) {
    if (model.residual() <= opts.tol) return it;
    const Eigen::VectorXd g = model.gradient();
    const Eigen::MatrixXd h = model.information();
    Eigen::VectorXd step = h.ldlt().solve(g);
    if (!step.allFinite()) step = g;
    std::vector<double> dir(step.data(), step.data() + step.size());
    if (!line_search(model, value, dir)) {
      // Fall back to plain gradient ascent for this iteration.
      std::vector<double> gd(g.data(), g.data() + g.size());
      if (!line_search(model, value, gd)) return -1;
    }
  }
  return model.residual() <= opts.tol ? opts.max_iter : -1;
}

// Coordinate-wise scaling: one-dimensional Newton updates row by row.
int run_scaling(FaceModel& model, const MleOptions& opts) {
  double value = model.set(model.zeta());
  const std::size_t q = model.dim();
  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    if (model.residual() <= opts.tol) return sweep;
    for (std::size_t k = 0; k < q; ++k) {
      const Eigen::VectorXd g = model.gradient();
      const double hk = model.information()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      if (hk <= 0.0) continue;
      std::vector<double> dir(q, 0.0);
      dir[k] = g[static_cast<Eigen::Index>(k)] / hk;
      line_search(model, value, dir);
    }
  }
  return model.residual() <= opts.tol ? opts.max_iter : -1;
}

std::vector<double> to_double(const SufficientStatistic& t) {
  return std::vector<double>(t.t.begin(), t.t.end());
}

}  // namespace

double log_likelihood(const ProbabilityVector& p, const Network& x) {
  require_same_n(x, p);
  double s = 0.0;
  for (std::size_t d = 0; d < x.dyads(); ++d) {
    const double v = p.at(d, x.config(d));
    if (v <= 0.0) return -kInf;
    s += std::log(v);
  }
  return s;
}

std::string_view gof_kind_name(GofKind k) {
  switch (k) {
    case GofKind::PearsonStandard: return "pearson";
    case GofKind::PearsonPaper: return "pearson-paper";
    case GofKind::LikelihoodRatio: return "lr";
  }
  return "?";
}

GofKind parse_gof_kind(std::string_view name) {
  for (auto k : {GofKind::PearsonStandard, GofKind::PearsonPaper, GofKind::LikelihoodRatio}) {
    if (name == gof_kind_name(k)) return k;
  }
  throw std::invalid_argument("unknown statistic '" + std::string(name) + "'");
}

double gof_statistic(const Network& x, const ProbabilityVector& p_hat, GofKind kind) {
  require_same_n(x, p_hat);
  double s = 0.0;
  for (std::size_t d = 0; d < x.dyads(); ++d) {
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
      const double obs = x.config(d) == static_cast<DyadConfig>(c) ? 1.0 : 0.0;
      const double p = p_hat.p[d * kConfigsPerDyad + c];
      if (p <= 0.0) {
        if (obs > 0.0) return kInf;
        continue;
      }
      switch (kind) {
        case GofKind::PearsonStandard: s += (obs - p) * (obs - p) / p; break;
        case GofKind::PearsonPaper: s += (obs - p) * (obs - p) / (p * p); break;
        case GofKind::LikelihoodRatio:
          if (obs > 0.0) s += -std::log(p);
          break;
      }
    }
  }
  return s;
}

double moment_residual(const DesignMatrix& a, const ProbabilityVector& p, std::span<const double> t) {
  if (t.size() != a.rows() || p.p.size() != a.cols()) throw std::invalid_argument("size mismatch");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += static_cast<double>(a(r, c)) * p.p[c];
    worst = std::max(worst, std::abs(s - t[r]));
  }
  return worst;
}

MleResult fit_on_face(const DesignMatrix& a, std::span<const double> t, const FacialSet& face,
                      const MleOptions& opts) {
  if (a.form() != MatrixForm::Full) throw std::invalid_argument("fitting needs a Full design matrix");
  if (t.size() != a.rows()) throw std::invalid_argument("statistic length does not match the matrix");
  FaceModel model(a, face, t);
  const int iters = opts.method == MleMethod::Newton ? run_newton(model, opts) : run_scaling(model, opts);
  if (iters < 0) {
    throw ConvergenceError("moment equations not solved within " + std::to_string(opts.max_iter) + " iterations",
                           model.residual(), opts.max_iter);
  }
  MleResult out;
  out.p_hat = ProbabilityVector{a.n(), model.p()};
  out.exists = face.is_full(a.cols());
  out.facial_set = face;
  out.moment_residual = model.residual();
  out.iterations = iters;
  for (std::size_t r : model.pinned()) out.gauge.push_back(a.row_labels()[r].str());
  if (out.exists) out.zeta_hat = model.full_zeta();
  return out;
}

MleResult fit_mle(const DesignMatrix& a, const SufficientStatistic& t, const MleOptions& opts) {
  if (a.form() != MatrixForm::Full) throw std::invalid_argument("fitting needs a Full design matrix");
  const FacialSet face = facial_set(a, t);
  return fit_on_face(a, to_double(t), face, opts);
}

MleResult extended_mle(const DesignMatrix& a, const SufficientStatistic& t, const MleOptions& opts) {
  return fit_mle(a, t, opts);
}

}  // namespace p1
