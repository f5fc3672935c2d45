// SPDX-License-Identifier: Apache-2.0

#include "p1/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace p1 {

namespace {

void require_nodes(int n) {
  if (n < 2) throw std::invalid_argument("node count must be at least 2, got " + std::to_string(n));
}

}  // namespace

std::string_view config_code(DyadConfig c) {
  switch (c) {
    case DyadConfig::Null: return "00";
    case DyadConfig::Out: return "10";
    case DyadConfig::In: return "01";
    case DyadConfig::Mutual: return "11";
  }
  return "??";
}

DyadConfig parse_config_code(std::string_view code) {
  if (code == "00") return DyadConfig::Null;
  if (code == "10") return DyadConfig::Out;
  if (code == "01") return DyadConfig::In;
  if (code == "11") return DyadConfig::Mutual;
  throw std::invalid_argument("bad dyad config code '" + std::string(code) + "'");
}

std::string_view variant_name(ReciprocationVariant v) {
  switch (v) {
    case ReciprocationVariant::Zero: return "zero";
    case ReciprocationVariant::Constant: return "constant";
    case ReciprocationVariant::EdgeDependent: return "edge";
  }
  return "?";
}

ReciprocationVariant parse_variant(std::string_view name) {
  if (name == "zero") return ReciprocationVariant::Zero;
  if (name == "constant") return ReciprocationVariant::Constant;
  if (name == "edge" || name == "edge-dependent") return ReciprocationVariant::EdgeDependent;
  throw std::invalid_argument("unknown reciprocation variant '" + std::string(name) + "'");
}

std::size_t dyad_count(int n) {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

std::size_t dyad_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) {
    throw std::invalid_argument("invalid dyad {" + std::to_string(i) + "," + std::to_string(j) + "}");
  }
  // dyads before row i: sum_{k<i} (n-1-k)
  const auto si = static_cast<std::size_t>(i);
  const auto sn = static_cast<std::size_t>(n);
  return si * (2 * sn - si - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

std::vector<Dyad> dyads_of(int n) {
  std::vector<Dyad> out;
  out.reserve(dyad_count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

Network::Network(int n) : n_(n), configs_(dyad_count(n), DyadConfig::Null) { require_nodes(n); }

Network::Network(int n, std::vector<DyadConfig> configs) : n_(n), configs_(std::move(configs)) {
  require_nodes(n);
  if (configs_.size() != dyad_count(n)) {
    throw std::invalid_argument("network on " + std::to_string(n) + " nodes needs " +
                                std::to_string(dyad_count(n)) + " dyad configs");
  }
}

Network Network::from_index(int n, std::uint64_t index) {
  require_nodes(n);
  const std::size_t d = dyad_count(n);
  if (d < 32 && index >= network_count(n)) throw std::out_of_range("network index out of range");
  std::vector<DyadConfig> cfg(d);
  for (std::size_t k = d; k-- > 0;) {
    cfg[k] = static_cast<DyadConfig>(index & 3u);
    index >>= 2;
  }
  return Network(n, std::move(cfg));
}

Network Network::from_one_hot(int n, std::span<const int> x) {
  require_nodes(n);
  const std::size_t d = dyad_count(n);
  if (x.size() != d * kConfigsPerDyad) throw std::invalid_argument("one-hot vector has wrong length");
  std::vector<DyadConfig> cfg(d);
  for (std::size_t k = 0; k < d; ++k) {
    int ones = 0;
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
      const int v = x[k * kConfigsPerDyad + c];
      if (v != 0 && v != 1) throw std::invalid_argument("one-hot vector entries must be 0 or 1");
      if (v == 1) {
        cfg[k] = static_cast<DyadConfig>(c);
        ++ones;
      }
    }
    if (ones != 1) throw std::invalid_argument("dyad block " + std::to_string(k) + " is not one-hot");
  }
  return Network(n, std::move(cfg));
}

Network Network::from_adjacency(int n, std::span<const int> adj) {
  require_nodes(n);
  const auto sn = static_cast<std::size_t>(n);
  if (adj.size() != sn * sn) throw std::invalid_argument("adjacency matrix must be n x n");
  std::vector<DyadConfig> cfg;
  cfg.reserve(dyad_count(n));
  for (std::size_t i = 0; i < sn; ++i) {
    if (adj[i * sn + i] != 0) throw std::invalid_argument("adjacency matrix must have a zero diagonal");
    for (std::size_t j = i + 1; j < sn; ++j) {
      const int a = adj[i * sn + j];
      const int b = adj[j * sn + i];
      if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
        throw std::invalid_argument("adjacency matrix entries must be 0 or 1");
      }
      cfg.push_back(config_from_bits(a, b));
    }
  }
  return Network(n, std::move(cfg));
}

DyadConfig Network::config(int i, int j) const { return configs_[dyad_index(n_, i, j)]; }

Network Network::with_config(std::size_t dyad, DyadConfig c) const {
  Network out = *this;
  out.configs_.at(dyad) = c;
  return out;
}

std::uint64_t Network::index() const {
  if (configs_.size() > 32) throw std::overflow_error("network index does not fit in 64 bits");
  std::uint64_t idx = 0;
  for (DyadConfig c : configs_) idx = (idx << 2) | static_cast<std::uint64_t>(c);
  return idx;
}

std::vector<int> Network::one_hot() const {
  std::vector<int> x(configs_.size() * kConfigsPerDyad, 0);
  for (std::size_t k = 0; k < configs_.size(); ++k) {
    x[k * kConfigsPerDyad + static_cast<std::size_t>(configs_[k])] = 1;
  }
  return x;
}

std::vector<int> Network::adjacency() const {
  const auto sn = static_cast<std::size_t>(n_);
  std::vector<int> adj(sn * sn, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < sn; ++i) {
    for (std::size_t j = i + 1; j < sn; ++j, ++k) {
      adj[i * sn + j] = out_bit(configs_[k]);
      adj[j * sn + i] = in_bit(configs_[k]);
    }
  }
  return adj;
}

bool Network::has_edge(int from, int to) const {
  const DyadConfig c = config(from, to);
  return from < to ? out_bit(c) == 1 : in_bit(c) == 1;
}

std::uint64_t network_count(int n) {
  require_nodes(n);
  const std::size_t d = dyad_count(n);
  if (d >= 32) throw std::overflow_error("4^C(n,2) does not fit in 64 bits");
  return std::uint64_t{1} << (2 * d);
}

void for_each_network(int n, std::uint64_t first, std::uint64_t last,
                      const std::function<void(const Network&)>& fn) {
  if (first >= last) return;
  Network x = Network::from_index(n, first);
  std::vector<DyadConfig> cfg = x.configs();
  for (std::uint64_t idx = first; idx < last; ++idx) {
    fn(x);
    // odometer increment, last dyad fastest
    for (std::size_t k = cfg.size(); k-- > 0;) {
      const auto v = static_cast<std::uint8_t>(cfg[k]);
      if (v < 3) {
        cfg[k] = static_cast<DyadConfig>(v + 1);
        break;
      }
      cfg[k] = DyadConfig::Null;
    }
    if (idx + 1 < last) x = Network(n, cfg);
  }
}

std::string RowLabel::str() const {
  switch (kind) {
    case Kind::Lambda: return "lambda_" + std::to_string(i + 1) + std::to_string(j + 1);
    case Kind::Alpha: return "alpha_" + std::to_string(i + 1);
    case Kind::Beta: return "beta_" + std::to_string(i + 1);
    case Kind::Theta: return "theta";
    case Kind::Rho: return "rho";
    case Kind::RhoNode: return "rho_" + std::to_string(i + 1);
  }
  return "?";
}

std::vector<std::int64_t> IntMatrix::column(std::size_t c) const {
  std::vector<std::int64_t> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<std::int64_t> IntMatrix::row(std::size_t r) const {
  return {data.begin() + static_cast<std::ptrdiff_t>(r * cols),
          data.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)};
}

std::vector<std::int64_t> IntMatrix::multiply(std::span<const std::int64_t> v) const {
  if (v.size() != cols) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<std::int64_t> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

DesignMatrix::DesignMatrix(int n, ReciprocationVariant variant, MatrixForm form, IntMatrix entries,
                           std::vector<RowLabel> rows, std::vector<ColumnLabel> cols)
    : n_(n),
      variant_(variant),
      form_(form),
      entries_(std::move(entries)),
      row_labels_(std::move(rows)),
      col_labels_(std::move(cols)) {
  if (row_labels_.size() != entries_.rows || col_labels_.size() != entries_.cols) {
    throw std::invalid_argument("design matrix labels do not match its shape");
  }
}

std::size_t DesignMatrix::column_of(std::size_t dyad, DyadConfig c) const {
  switch (form_) {
    case MatrixForm::Full: return dyad * 4 + static_cast<std::size_t>(c);
    case MatrixForm::Simplified:
      return c == DyadConfig::Null ? npos : dyad * 3 + static_cast<std::size_t>(c) - 1;
    case MatrixForm::CommonSubmatrix:
      if (c == DyadConfig::Out) return dyad * 2;
      if (c == DyadConfig::In) return dyad * 2 + 1;
      return npos;
  }
  return npos;
}

std::size_t DesignMatrix::lambda_rows() const {
  return form_ == MatrixForm::Full ? dyad_count(n_) : 0;
}

DesignMatrix build_design_matrix(int n, ReciprocationVariant variant, MatrixForm form) {
  require_nodes(n);
  if (form == MatrixForm::CommonSubmatrix) return common_submatrix(n);

  using Kind = RowLabel::Kind;
  const bool full = form == MatrixForm::Full;
  const auto dyads = dyads_of(n);

  std::vector<RowLabel> rows;
  if (full) {
    for (const auto& d : dyads) rows.push_back({Kind::Lambda, d.i, d.j});
  }
  const std::size_t alpha0 = rows.size();
  for (int i = 0; i < n; ++i) rows.push_back({Kind::Alpha, i, -1});
  const std::size_t beta0 = rows.size();
  for (int i = 0; i < n; ++i) rows.push_back({Kind::Beta, i, -1});
  const std::size_t theta = rows.size();
  rows.push_back({Kind::Theta, -1, -1});
  std::size_t rho = 0;
  std::size_t rho_node0 = 0;
  if (variant != ReciprocationVariant::Zero) {
    rho = rows.size();
    rows.push_back({Kind::Rho, -1, -1});
  }
  if (variant == ReciprocationVariant::EdgeDependent) {
    rho_node0 = rows.size();
    for (int i = 0; i < n; ++i) rows.push_back({Kind::RhoNode, i, -1});
  }

  std::vector<ColumnLabel> cols;
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    for (std::size_t c = full ? 0 : 1; c < kConfigsPerDyad; ++c) {
      cols.push_back({k, static_cast<DyadConfig>(c)});
    }
  }

  IntMatrix m(rows.size(), cols.size());
  for (std::size_t col = 0; col < cols.size(); ++col) {
    const auto [k, cfg] = cols[col];
    const auto i = static_cast<std::size_t>(dyads[k].i);
    const auto j = static_cast<std::size_t>(dyads[k].j);
    const int a = out_bit(cfg);
    const int b = in_bit(cfg);
    if (full) m(k, col) = 1;
    m(alpha0 + i, col) += a;
    m(alpha0 + j, col) += b;
    m(beta0 + i, col) += b;
    m(beta0 + j, col) += a;
    m(theta, col) = a + b;
    const int both = std::min(a, b);
    if (variant != ReciprocationVariant::Zero) m(rho, col) = both;
    if (variant == ReciprocationVariant::EdgeDependent) {
      m(rho_node0 + i, col) = both;
      m(rho_node0 + j, col) = both;
    }
  }
  return DesignMatrix(n, variant, form, std::move(m), std::move(rows), std::move(cols));
}

DesignMatrix common_submatrix(int n) {
  require_nodes(n);
  using Kind = RowLabel::Kind;
  std::vector<RowLabel> rows;
  for (int i = 0; i < n; ++i) rows.push_back({Kind::Alpha, i, -1});
  for (int i = 0; i < n; ++i) rows.push_back({Kind::Beta, i, -1});

  const auto dyads = dyads_of(n);
  std::vector<ColumnLabel> cols;
  IntMatrix m(rows.size(), 2 * dyads.size());
  const auto sn = static_cast<std::size_t>(n);
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    const auto i = static_cast<std::size_t>(dyads[k].i);
    const auto j = static_cast<std::size_t>(dyads[k].j);
    cols.push_back({k, DyadConfig::Out});
    m(i, 2 * k) = 1;
    m(sn + j, 2 * k) = 1;
    cols.push_back({k, DyadConfig::In});
    m(j, 2 * k + 1) = 1;
    m(sn + i, 2 * k + 1) = 1;
  }
  return DesignMatrix(n, ReciprocationVariant::Zero, MatrixForm::CommonSubmatrix, std::move(m),
                      std::move(rows), std::move(cols));
}

std::uint64_t SufficientStatistic::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : t) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

SufficientStatistic sufficient_statistic(const DesignMatrix& a, const Network& x) {
  if (a.n() != x.n()) throw std::invalid_argument("design matrix and network have different node counts");
  if (a.form() == MatrixForm::CommonSubmatrix) {
    throw std::invalid_argument("sufficient statistics need a Full or Simplified design matrix");
  }
  SufficientStatistic s;
  s.t.assign(a.rows(), 0);
  const auto& m = a.entries();
  for (std::size_t k = 0; k < x.dyads(); ++k) {
    const std::size_t col = a.column_of(k, x.config(k));
    if (col == DesignMatrix::npos) continue;
    for (std::size_t r = 0; r < m.rows; ++r) s.t[r] += m(r, col);
  }
  return s;
}

ProbabilityVector probabilities_from_parameters(const DesignMatrix& a, const ParameterVector& zeta) {
  if (a.form() != MatrixForm::Full) throw std::invalid_argument("probabilities need a Full design matrix");
  const std::size_t lam = a.lambda_rows();
  if (zeta.values.size() != a.rows() - lam) {
    throw std::invalid_argument("parameter vector must have one entry per non-lambda row");
  }
  for (double v : zeta.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("parameter vector has a non-finite entry");
  }
  const std::size_t d = dyad_count(a.n());
  ProbabilityVector out{a.n(), std::vector<double>(d * kConfigsPerDyad)};
  const auto& m = a.entries();
  for (std::size_t k = 0; k < d; ++k) {
    double eta[kConfigsPerDyad];
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) {
      const std::size_t col = k * kConfigsPerDyad + c;
      double s = 0.0;
      for (std::size_t r = lam; r < m.rows; ++r) s += static_cast<double>(m(r, col)) * zeta.values[r - lam];
      eta[c] = s;
      top = std::max(top, s);
    }
    double z = 0.0;
    for (double& e : eta) {
      e = std::exp(e - top);
      z += e;
    }
    for (std::size_t c = 0; c < kConfigsPerDyad; ++c) out.p[k * kConfigsPerDyad + c] = eta[c] / z;
  }
  return out;
}

}  // namespace p1
