// SPDX-License-Identifier: Apache-2.0
//
// Core domain types of the p1 directed random graph model: dyad
// configurations, networks, design matrices and the parameter-to-probability
// map.

#ifndef P1_MODEL_HPP
#define P1_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace p1 {

/// One of the four observable states of an unordered pair {i<j}.  The
/// numeric value is the serialization order (0,0),(1,0),(0,1),(1,1); the
/// first bit means "i sends to j", the second "j sends to i".
enum class DyadConfig : std::uint8_t { Null = 0, Out = 1, In = 2, Mutual = 3 };

inline constexpr std::size_t kConfigsPerDyad = 4;

constexpr int out_bit(DyadConfig c) { return static_cast<int>(c) & 1; }
constexpr int in_bit(DyadConfig c) { return (static_cast<int>(c) >> 1) & 1; }
constexpr DyadConfig config_from_bits(int a, int b) {
  return static_cast<DyadConfig>((a & 1) | ((b & 1) << 1));
}

/// "00", "10", "01" or "11".
std::string_view config_code(DyadConfig c);
DyadConfig parse_config_code(std::string_view code);

enum class ReciprocationVariant { Zero, Constant, EdgeDependent };

std::string_view variant_name(ReciprocationVariant v);
ReciprocationVariant parse_variant(std::string_view name);

/// Dyad {i<j} with 0-based node ids.
struct Dyad {
  int i = 0;
  int j = 0;
  friend bool operator==(const Dyad&, const Dyad&) = default;
};

std::size_t dyad_count(int n);
/// Lexicographic position of {i,j}; order of i and j does not matter.
std::size_t dyad_index(int n, int i, int j);
/// All dyads of K_n in lexicographic order.
std::vector<Dyad> dyads_of(int n);

/// A point of the sample space: one configuration per dyad.
class Network {
 public:
  Network() = default;
  /// Empty network on n nodes.
  explicit Network(int n);
  Network(int n, std::vector<DyadConfig> configs);

  static Network from_index(int n, std::uint64_t index);
  /// 0/1 vector of length 4*C(n,2), exactly one 1 per dyad block.
  static Network from_one_hot(int n, std::span<const int> x);
  /// n x n 0/1 adjacency matrix with zero diagonal, row-major.
  static Network from_adjacency(int n, std::span<const int> adj);

  int n() const { return n_; }
  std::size_t dyads() const { return configs_.size(); }
  DyadConfig config(std::size_t dyad) const { return configs_[dyad]; }
  /// Stored configuration of the dyad {i,j}, in either argument order.
  DyadConfig config(int i, int j) const;
  const std::vector<DyadConfig>& configs() const { return configs_; }

  Network with_config(std::size_t dyad, DyadConfig c) const;

  /// Base-4 index in enumeration order (first dyad most significant).
  std::uint64_t index() const;
  std::vector<int> one_hot() const;
  std::vector<int> adjacency() const;
  bool has_edge(int from, int to) const;

  friend bool operator==(const Network&, const Network&) = default;
  /// Same order as index() for equal n.
  friend auto operator<=>(const Network& a, const Network& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    return a.configs_ <=> b.configs_;
  }

 private:
  int n_ = 0;
  std::vector<DyadConfig> configs_;
};

/// 4^{C(n,2)}; throws std::overflow_error when it does not fit in 64 bits.
std::uint64_t network_count(int n);

/// Calls fn(network) for every index in [first, last) in enumeration order.
/// Disjoint ranges may be consumed from different threads.
void for_each_network(int n, std::uint64_t first, std::uint64_t last,
                      const std::function<void(const Network&)>& fn);

enum class MatrixForm { Full, Simplified, CommonSubmatrix };

struct RowLabel {
  enum class Kind { Lambda, Alpha, Beta, Theta, Rho, RhoNode };
  Kind kind = Kind::Theta;
  int i = -1;  // node id (Alpha, Beta, RhoNode) or first node of a Lambda dyad
  int j = -1;  // second node of a Lambda dyad
  std::string str() const;
  friend bool operator==(const RowLabel&, const RowLabel&) = default;
};

struct ColumnLabel {
  std::size_t dyad = 0;
  DyadConfig config = DyadConfig::Null;
  friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
};

/// Dense row-major integer matrix.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::vector<std::int64_t> column(std::size_t c) const;
  std::vector<std::int64_t> row(std::size_t r) const;
  std::vector<std::int64_t> multiply(std::span<const std::int64_t> v) const;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

class DesignMatrix {
 public:
  DesignMatrix(int n, ReciprocationVariant variant, MatrixForm form, IntMatrix entries,
               std::vector<RowLabel> rows, std::vector<ColumnLabel> cols);

  int n() const { return n_; }
  ReciprocationVariant variant() const { return variant_; }
  MatrixForm form() const { return form_; }
  const IntMatrix& entries() const { return entries_; }
  std::size_t rows() const { return entries_.rows; }
  std::size_t cols() const { return entries_.cols; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }
  const std::vector<RowLabel>& row_labels() const { return row_labels_; }
  const std::vector<ColumnLabel>& col_labels() const { return col_labels_; }

  /// Column of (dyad, config), or npos when the form drops it.
  std::size_t column_of(std::size_t dyad, DyadConfig c) const;
  /// Number of leading lambda rows (C(n,2) for Full, 0 otherwise).
  std::size_t lambda_rows() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int n_;
  ReciprocationVariant variant_;
  MatrixForm form_;
  IntMatrix entries_;
  std::vector<RowLabel> row_labels_;
  std::vector<ColumnLabel> col_labels_;
};

/// Full form rows: lambda_{ij} (lex), alpha_1..n, beta_1..n, theta, then rho
/// rows; columns dyads lex and within a dyad (0,0),(1,0),(0,1),(1,1).
/// Simplified drops the lambda rows and every (0,0) column.
DesignMatrix build_design_matrix(int n, ReciprocationVariant variant,
                                 MatrixForm form = MatrixForm::Full);

/// Incidence matrix of G_n = K_{n,n} minus the diagonal, 2n x n(n-1): rows
/// alpha_1..n, beta_1..n, per dyad columns (1,0) then (0,1).
DesignMatrix common_submatrix(int n);

struct SufficientStatistic {
  std::vector<std::int64_t> t;

  std::size_t size() const { return t.size(); }
  /// FNV-1a over the entries; display only.
  std::uint64_t hash() const;
  friend bool operator==(const SufficientStatistic&, const SufficientStatistic&) = default;
  friend auto operator<=>(const SufficientStatistic&, const SufficientStatistic&) = default;
};

/// t = A x for a Full (or Simplified) design matrix.
SufficientStatistic sufficient_statistic(const DesignMatrix& a, const Network& x);

/// Real parameters indexed by the non-lambda rows of a Full design matrix.
struct ParameterVector {
  std::vector<double> values;
};

/// Per-dyad probability blocks, 4 entries per dyad in config order.
struct ProbabilityVector {
  int n = 0;
  std::vector<double> p;

  double at(std::size_t dyad, DyadConfig c) const {
    return p[dyad * kConfigsPerDyad + static_cast<std::size_t>(c)];
  }
};

/// Per-dyad softmax of <zeta, column restricted to the non-lambda rows>; the
/// lambda values are the implied normalizing constants.
ProbabilityVector probabilities_from_parameters(const DesignMatrix& a,
                                                const ParameterVector& zeta);

class InvalidVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace p1

#endif  // P1_MODEL_HPP
