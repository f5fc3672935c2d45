// Shared helpers for the unit tests and the acceptance runner.  The oracles
// here are written from the model definition and do not call the library's
// own builders.

#ifndef P1_TESTS_SUPPORT_HPP
#define P1_TESTS_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "p1/model.hpp"
#include "p1/moves.hpp"

namespace p1::test {

/// Parses rows of 0/1/2 digits ("0112") into an IntMatrix.
inline IntMatrix digits(const std::vector<std::string>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c] - '0';
  }
  return m;
}

/// Full design matrix straight from the parametrization
///   p_ij(a,b) -> lambda_ij alpha_i^a alpha_j^b beta_i^b beta_j^a theta^{a+b} rho^{min(a,b)}
/// with rho_i rho_j for the edge-dependent variant.
inline IntMatrix oracle_design(int n, ReciprocationVariant v) {
  const int d = n * (n - 1) / 2;
  int rows = d + 2 * n + 1;
  if (v != ReciprocationVariant::Zero) rows += 1;
  if (v == ReciprocationVariant::EdgeDependent) rows += n;
  IntMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(4 * d));
  int col = 0, dy = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++dy) {
      for (int code = 0; code < 4; ++code, ++col) {
        const int a = code & 1, b = code >> 1;
        m(dy, col) = 1;
        m(d + i, col) += a;
        m(d + j, col) += b;
        m(d + n + i, col) += b;
        m(d + n + j, col) += a;
        m(d + 2 * n, col) = a + b;
        if (v != ReciprocationVariant::Zero) m(d + 2 * n + 1, col) = std::min(a, b);
        if (v == ReciprocationVariant::EdgeDependent) {
          m(d + 2 * n + 2 + i, col) = std::min(a, b);
          m(d + 2 * n + 2 + j, col) = std::min(a, b);
        }
      }
    }
  }
  return m;
}

inline std::vector<std::int64_t> dense_multiply(const IntMatrix& a, const std::vector<int>& x) {
  std::vector<std::int64_t> out(a.rows, 0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) out[r] += a(r, c) * x[c];
  }
  return out;
}

struct Var {
  int i;  // 1-based
  int j;
  const char* code;
};

/// Binomial + prod(plus) - prod(minus) as a coordinate vector.
inline MarkovMove binomial(int n, const std::vector<Var>& plus, const std::vector<Var>& minus) {
  MarkovMove m(n, MoveKind::Cycle);
  auto put = [&](const Var& v, int s) {
    int i = v.i, j = v.j;
    std::string code = v.code;
    if (i > j) {
      std::swap(i, j);
      std::swap(code[0], code[1]);
    }
    m.at(dyad_index(n, i - 1, j - 1), parse_config_code(code)) += s;
  };
  for (const auto& v : plus) put(v, 1);
  for (const auto& v : minus) put(v, -1);
  return m;
}

/// Adds (0,0) factors on the short side of every unbalanced dyad.
inline MarkovMove null_lift(MarkovMove m) {
  for (std::size_t d = 0; d < dyad_count(m.n); ++d) {
    int s = 0;
    for (int c = 0; c < 4; ++c) s += m.delta[4 * d + c];
    m.delta[4 * d] -= s;
  }
  return m;
}

inline bool contains(const std::vector<MarkovMove>& moves, const MarkovMove& m) {
  const auto key = m.canonical();
  return std::any_of(moves.begin(), moves.end(), [&](const MarkovMove& x) { return x.canonical() == key; });
}

/// Networks "0 0 1 0 0 1 ..." written as one-hot blocks per dyad.
inline Network one_hot_network(int n, const std::string& bits) {
  std::istringstream in(bits);
  std::vector<int> x;
  int b;
  while (in >> b) x.push_back(b);
  return Network::from_one_hot(n, x);
}

/// Golden matrices transcribed from the printed examples.
inline IntMatrix golden_z2() { return digits({"1111", "0101", "0011", "0011", "0101", "0112"}); }

inline IntMatrix golden_e2() {
  return digits({"1111", "0101", "0011", "0011", "0101", "0112", "0001", "0001", "0001"});
}

inline IntMatrix golden_e3_simplified() {
  return digits({"101101000", "011000101", "000011011", "011011000", "101000011", "000101101", "112112112",
                 "001001001", "001001000", "001000001", "000001001"});
}

/// Rows as printed: the theta row sits right after the six lambda rows.
inline IntMatrix golden_z4_printed() {
  return digits({
      "111100000000000000000000", "000011110000000000000000", "000000001111000000000000",
      "000000000000111100000000", "000000000000000011110000", "000000000000000000001111",
      "011201120112011201120112", "010101010101000000000000", "001100000000010101010000",
      "000000110000001100000101", "000000000011000000110011", "001100110011000000000000",
      "010100000000001100110000", "000001010000010100000011", "000000000101000001010101",
  });
}

/// Printed row order -> library row order (lambda, alpha, beta, theta).
inline IntMatrix z4_library_order(const IntMatrix& printed) {
  std::vector<std::size_t> order = {0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13, 14, 6};
  IntMatrix out(printed.rows, printed.cols);
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (std::size_t c = 0; c < printed.cols; ++c) out(r, c) = printed(order[r], c);
  }
  return out;
}

inline IntMatrix golden_b3() {
  return digits({"101000", "010010", "000101", "010100", "100001", "001010"});
}

/// True when b is a row and column permutation of a.  Rows are matched by
/// brute force, columns as a multiset.
inline bool equal_up_to_permutation(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  std::vector<std::size_t> perm(a.rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::multiset<std::vector<std::int64_t>> cb;
  for (std::size_t c = 0; c < b.cols; ++c) cb.insert(b.column(c));
  do {
    std::multiset<std::vector<std::int64_t>> ca;
    for (std::size_t c = 0; c < a.cols; ++c) {
      std::vector<std::int64_t> col(a.rows);
      for (std::size_t r = 0; r < a.rows; ++r) col[r] = a(perm[r], c);
      ca.insert(col);
    }
    if (ca == cb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Printed zero patterns as sets of forced-zero cells (1-based).
using Cells = std::set<std::pair<int, int>>;

inline std::vector<Cells> printed_patterns_n3() {
  return {{{1, 2}, {2, 1}}, {{1, 3}, {3, 1}}, {{2, 3}, {3, 2}}};
}

inline std::vector<Cells> printed_patterns_n4() {
  return {{{1, 2}, {1, 4}, {2, 1}, {2, 4}, {4, 1}, {4, 2}},
          {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}},
          {{1, 3}, {1, 4}, {3, 1}, {3, 4}, {4, 1}, {4, 3}},
          {{2, 3}, {2, 4}, {3, 2}, {3, 4}, {4, 2}, {4, 3}}};
}

inline Cells cells_of(int n, const std::vector<int>& zero) {
  Cells out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (zero[i * n + j]) out.insert({i + 1, j + 1});
    }
  }
  return out;
}

/// Canonical form of a family of patterns under simultaneous relabeling of
/// rows and columns.
inline std::set<Cells> canonical_family(int n, std::vector<Cells> family) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::set<Cells> best;
  bool first = true;
  do {
    std::set<Cells> image;
    for (const auto& cells : family) {
      Cells c;
      for (auto [i, j] : cells) c.insert({perm[i - 1], perm[j - 1]});
      image.insert(c);
    }
    if (first || image < best) best = image;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// The printed applicable generators.  Unbalanced ones are stored in their
/// (0,0)-lifted form.
struct GoldenMove {
  std::string name;
  int n;
  ReciprocationVariant variant;
  int depth;
  MarkovMove move;
};

inline std::vector<GoldenMove> golden_moves() {
  using V = ReciprocationVariant;
  std::vector<GoldenMove> g;
  const auto cubic = binomial(3, {{1, 2, "01"}, {1, 3, "10"}, {2, 3, "01"}}, {{1, 2, "10"}, {1, 3, "01"}, {2, 3, "10"}});
  const auto e3 = binomial(3, {{1, 2, "10"}, {2, 3, "10"}, {1, 3, "01"}}, {{1, 2, "01"}, {2, 3, "01"}, {1, 3, "10"}});
  g.push_back({"Z3 cubic", 3, V::Zero, 1, cubic});
  g.push_back({"C3 cubic", 3, V::Constant, 1, cubic});
  g.push_back({"E3 principal cubic", 3, V::EdgeDependent, 1, e3});
  const auto head_swap = binomial(4, {{1, 3, "00"}, {2, 4, "00"}, {1, 4, "01"}, {2, 3, "01"}},
                                  {{1, 3, "01"}, {2, 4, "01"}, {1, 4, "00"}, {2, 3, "00"}});
  const auto five = binomial(4, {{1, 3, "00"}, {2, 4, "00"}, {1, 4, "01"}, {1, 2, "10"}, {2, 3, "10"}},
                             {{1, 3, "10"}, {2, 4, "01"}, {1, 4, "00"}, {1, 2, "01"}, {2, 3, "00"}});
  // i,j,k,l = 1,2,3,4 in the overlap-and-lift example.
  const auto five_ijkl = binomial(4, {{1, 2, "10"}, {1, 3, "00"}, {1, 4, "01"}, {2, 3, "10"}, {2, 4, "00"}},
                                  {{1, 2, "01"}, {1, 3, "10"}, {1, 4, "00"}, {2, 3, "00"}, {2, 4, "01"}});
  for (auto v : {V::Zero, V::Constant, V::EdgeDependent}) {
    const std::string s(variant_name(v));
    g.push_back({"head-swap quartic (" + s + ")", 4, v, 2, head_swap});
    g.push_back({"degree-5 lift (" + s + ")", 4, v, 2, five});
    g.push_back({"overlap-and-lift quintic (" + s + ")", 4, v, 2, five_ijkl});
  }
  g.push_back({"overlap example quartic", 4, V::Zero, 2,
               null_lift(binomial(4, {{1, 2, "10"}, {1, 3, "11"}, {2, 3, "10"}, {2, 4, "10"}},
                                  {{1, 2, "01"}, {1, 3, "10"}, {1, 4, "10"}, {2, 3, "11"}}))});
  g.push_back({"worked overlap quartic", 4, V::Zero, 2,
               null_lift(binomial(4, {{1, 2, "10"}, {1, 3, "01"}, {1, 4, "01"}, {2, 3, "11"}},
                                  {{1, 2, "01"}, {1, 3, "11"}, {2, 3, "01"}, {2, 4, "01"}}))});
  return g;
}

/// The further printed Z4 quartics and quintics and the Constant sextic.
inline std::vector<GoldenMove> golden_moves_extra() {
  using V = ReciprocationVariant;
  std::vector<GoldenMove> g;
  g.push_back({"Z4 quartic 1", 4, V::Zero, 2,
               binomial(4, {{1, 2, "11"}, {3, 4, "11"}, {2, 3, "00"}, {1, 4, "00"}},
                        {{1, 2, "00"}, {3, 4, "00"}, {2, 3, "11"}, {1, 4, "11"}})});
  g.push_back({"Z4 quartic 2", 4, V::Zero, 2,
               binomial(4, {{2, 3, "11"}, {1, 4, "11"}, {1, 3, "00"}, {2, 4, "00"}},
                        {{2, 3, "10"}, {1, 4, "10"}, {1, 3, "01"}, {2, 4, "01"}})});
  g.push_back({"Z4 quartic 3", 4, V::Zero, 2,
               binomial(4, {{2, 3, "11"}, {1, 4, "11"}, {1, 2, "00"}, {3, 4, "00"}},
                        {{1, 2, "10"}, {2, 3, "10"}, {3, 4, "10"}, {1, 4, "01"}})});
  g.push_back({"Z4 quartic 4", 4, V::Zero, 2,
               binomial(4, {{1, 2, "00"}, {2, 3, "11"}, {3, 4, "01"}, {1, 4, "10"}},
                        {{1, 2, "10"}, {2, 3, "10"}, {3, 4, "11"}, {1, 4, "00"}})});
  g.push_back({"Z4 quintic 1", 4, V::Zero, 2,
               binomial(4, {{1, 2, "00"}, {2, 3, "11"}, {3, 4, "01"}, {1, 4, "01"}, {2, 4, "10"}},
                        {{1, 2, "01"}, {2, 3, "10"}, {3, 4, "11"}, {1, 4, "00"}, {2, 4, "01"}})});
  g.push_back({"Z4 quintic 2", 4, V::Zero, 2,
               binomial(4, {{1, 2, "10"}, {2, 3, "10"}, {1, 4, "00"}, {1, 3, "11"}, {2, 4, "10"}},
                        {{1, 2, "01"}, {2, 3, "11"}, {1, 4, "10"}, {1, 3, "10"}, {2, 4, "00"}})});
  g.push_back({"C4 sextic", 4, V::Constant, 3,
               binomial(4, {{1, 2, "00"}, {1, 3, "11"}, {1, 4, "11"}, {2, 3, "01"}, {2, 4, "10"}, {3, 4, "00"}},
                        {{1, 2, "11"}, {1, 3, "01"}, {1, 4, "10"}, {2, 3, "00"}, {2, 4, "00"}, {3, 4, "11"}})});
  return g;
}

}  // namespace p1::test

#endif  // P1_TESTS_SUPPORT_HPP
