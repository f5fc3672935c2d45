// SPDX-License-Identifier: Apache-2.0
//
// Markov moves for the p1 model: cycle binomials of G_n, the T and Q
// generators, even closed walks of K_n, lifting and overlaps.

#ifndef P1_MOVES_HPP
#define P1_MOVES_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "p1/model.hpp"

namespace p1 {

enum class MoveKind { Cycle, T, Q, Walk, Lift, Overlap };

std::string_view move_kind_name(MoveKind k);

/// Integer vector over the 4*C(n,2) (dyad, config) coordinates.  The
/// positive part is the monomial added, the negative part the one removed.
struct MarkovMove {
  int n = 0;
  std::vector<int> delta;
  MoveKind kind = MoveKind::Cycle;
  std::string origin;                // short description of how it was built
  std::vector<std::string> parents;  // origins of the inputs (lift, overlap)

  MarkovMove() = default;
  MarkovMove(int nodes, MoveKind k) : n(nodes), delta(4 * dyad_count(nodes), 0), kind(k) {}

  int& at(std::size_t dyad, DyadConfig c) { return delta[dyad * kConfigsPerDyad + static_cast<std::size_t>(c)]; }
  int at(std::size_t dyad, DyadConfig c) const {
    return delta[dyad * kConfigsPerDyad + static_cast<std::size_t>(c)];
  }

  /// Sum of the positive entries.
  int degree() const;
  bool is_zero() const;
  /// Every dyad's entries sum to zero.
  bool is_balanced() const;
  /// Every touched dyad has exactly one +1 and one -1, so the move can act on
  /// networks (one configuration per dyad).
  bool is_applicable_shape() const;
  std::vector<std::size_t> support_dyads() const;

  MarkovMove negated() const;
  /// Lexicographically smaller of delta and -delta.
  std::vector<int> canonical() const;

  /// "deg + 1-2:10 1-3:01 - 1-2:01 1-3:10", nodes 1-based.
  std::string str() const;
  static MarkovMove parse(int n, const std::string& line);
};

class EmptyMove : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Alternating cycle alpha_{a0} beta_{b0} alpha_{a1} beta_{b1} ... closing
/// at alpha_{a0}.  Edge alpha_i--beta_j is the directed edge i -> j.
struct CycleSpec {
  std::vector<int> alphas;
  std::vector<int> betas;

  std::size_t length() const { return 2 * alphas.size(); }
  std::string str() const;
  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;
};

/// All cycles of G_n up to rotation and reflection, length <= max_length
/// (0 means no cap), sorted by length and then lexicographically.
std::vector<CycleSpec> enumerate_cycles(int n, std::size_t max_length = 0);

/// +1 on the edges (a_m -> b_m), -1 on (a_{m+1} -> b_m).  Not lifted.
MarkovMove cycle_move(int n, const CycleSpec& c);

/// Per dyad: p(0,1) + p(1,0) - p(1,1) - p(0,0).  Zero variant only.
std::vector<MarkovMove> t_generators(int n, ReciprocationVariant variant = ReciprocationVariant::Zero);

/// p_ij(1,1) p_kl(1,1) - p_ik(1,1) p_jl(1,1) over the pairs of perfect
/// matchings of every 4-subset, not lifted.  Empty for n < 4.
std::vector<MarkovMove> q_generators(int n);

struct WalkSpec {
  enum class Kind { EvenCycle, SharedVertex, Joined };
  std::vector<int> vertices;  // closed walk v0 v1 ... v_{2k-1} (v0 again)
  Kind kind = Kind::EvenCycle;
};

std::string_view walk_kind_name(WalkSpec::Kind k);

/// Primitive even closed walks of K_n with at most max_edges edges, one
/// representative per move, mapped to p(1,1) coordinates.  Not lifted.
std::vector<std::pair<WalkSpec, MarkovMove>> enumerate_walks(int n, std::size_t max_edges = 8);
std::vector<MarkovMove> walk_moves(int n, std::size_t max_edges = 8);

enum class Pad { Null, Mutual };

/// Restores per-dyad balance by adding the imbalance at the padding
/// configuration of the deficient side.  Balanced moves are returned as is.
/// Throws EmptyMove when the result vanishes.
MarkovMove lift_move(const MarkovMove& q, Pad pad = Pad::Null);

/// f x g: the positive parts are added, the negative parts are added (Null
/// entries dropped first), the Zero variant rewrites (1,0)+(0,1) on one side
/// of a dyad as (1,1), common entries cancel and the result is lifted with
/// (0,0).  Throws EmptyMove on total cancellation and invalid_argument when
/// f and g share no dyad.
MarkovMove overlap(const MarkovMove& f, const MarkovMove& g, ReciprocationVariant variant);

struct MoveSetOptions {
  int depth = 2;
  std::size_t max_cycle_length = 0;  // 0 = every cycle of G_n
  std::size_t walk_max_edges = 8;
  /// Only moves whose non-(0,0) degree is at most this take part in overlaps.
  int overlap_max_degree = 3;
  /// Overlap results of larger degree are discarded.
  int result_max_degree = 8;
  bool mutual_lifts = true;
};

/// Deduplicated applicable moves: lifted cycle moves, lifted Q and walk
/// moves, and overlaps up to the given depth, all built in the kernel of the
/// Zero design matrix with the Out+In -> Mutual rewrite.  For Constant and
/// EdgeDependent only the moves in the variant's own kernel are kept.
std::vector<MarkovMove> generate_move_set(int n, ReciprocationVariant variant,
                                          const MoveSetOptions& opts = {});

bool in_kernel(const DesignMatrix& a, const MarkovMove& m);

/// x + direction*m when that is again a network, otherwise nullopt.
std::optional<Network> apply(const Network& x, const MarkovMove& m, int direction);

/// Order-independent hash of a move list (canonical deltas), for reports.
std::uint64_t move_set_hash(const std::vector<MarkovMove>& moves);

}  // namespace p1

#endif  // P1_MOVES_HPP
