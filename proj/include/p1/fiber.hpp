// SPDX-License-Identifier: Apache-2.0
//
// Fibers T_t = {x : A x = t}: exhaustive enumeration for small n, fiber-graph
// connectivity under a move set, and the Monte Carlo goodness-of-fit walk.

#ifndef P1_FIBER_HPP
#define P1_FIBER_HPP

#include <cstdint>
#include <vector>

#include "p1/exact.hpp"
#include "p1/inference.hpp"
#include "p1/model.hpp"
#include "p1/moves.hpp"

namespace p1 {

inline constexpr int kMaxEnumerationNodes = 5;

struct Fiber {
  SufficientStatistic t;
  std::vector<Network> members;  // sorted by index
};

/// Depth-first scan over dyads, pruned with partial-statistic bounds.
/// Throws CapacityError for n > kMaxEnumerationNodes.
Fiber enumerate_fiber(const DesignMatrix& a, const SufficientStatistic& t);

struct Connectivity {
  bool connected = true;
  /// Member indices per component, largest first.
  std::vector<std::vector<std::size_t>> components;
};

/// Graph on the members with an edge wherever x + m or x - m is a member.
Connectivity check_connectivity(const Fiber& fiber, const std::vector<MarkovMove>& moves);

/// Drops moves that provably cannot act anywhere in T_t: with the touched
/// dyads fixed to either side of the move, the free dyads must still be able
/// to reach t (row-wise min/max bounds).
std::vector<MarkovMove> moves_for_fiber(const DesignMatrix& a, const SufficientStatistic& t,
                                        const std::vector<MarkovMove>& moves);

/// Move applied in place on configuration vectors; built once per move.
class CompiledMove {
 public:
  explicit CompiledMove(const MarkovMove& m);
  /// False for moves that can never act on a network.
  bool usable() const { return usable_; }
  bool applies(const std::vector<DyadConfig>& x, int direction) const;
  /// Requires applies(x, direction).
  void apply(std::vector<DyadConfig>& x, int direction) const;

 private:
  struct Step {
    std::uint32_t dyad;
    DyadConfig minus;
    DyadConfig plus;
  };
  std::vector<Step> steps_;
  bool usable_ = true;
};

/// GF(y) > GF(x) with a relative tie tolerance (so that values equal up to
/// rounding are ties); with ties_count the comparison is >=.
bool gf_exceeds(double gf_y, double gf_x, bool ties_count = false);

struct WalkOptions {
  std::uint64_t steps = 100'000;  // K
  std::uint64_t seed = 20'240'601;
  GofKind stat = GofKind::PearsonStandard;
  bool ties_count = false;  // ">=" instead of the printed ">"
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  bool verify_closure = true;
  bool record_visits = false;
  /// Walk only over moves_for_fiber(); the others can never act.
  bool prune_to_fiber = true;
};

struct WalkReport {
  std::uint64_t steps = 0;
  std::uint64_t exceed_count = 0;
  double alpha_hat = 0.0;
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;
  std::uint64_t distinct_states_visited = 0;
  std::uint64_t move_set_hash = 0;  // of the moves passed in
  std::size_t moves_used = 0;       // after pruning
  double observed_gf = 0.0;
  /// (state, counted steps spent there) when record_visits is set, sorted.
  std::vector<std::pair<Network, std::uint64_t>> visits;
};

/// The fiber walk: K times, draw f from the moves and e in {-1, 1}
/// uniformly, move to x_old + e f when that is a network, and count the
/// steps whose state has GF larger than the observed x.  p_hat is the fit
/// (or extended fit) for t = A x.
WalkReport walk_gof(const DesignMatrix& a, const Network& x, const std::vector<MarkovMove>& moves,
                    const WalkOptions& opts = {});
WalkReport walk_gof(const DesignMatrix& a, const Network& x, const ProbabilityVector& p_hat,
                    const std::vector<MarkovMove>& moves, const WalkOptions& opts = {});

/// |{x' in T_t : GF(x') > GF(x)}| / |T_t| by enumeration.
Rational exact_alpha(const DesignMatrix& a, const Network& x, GofKind stat = GofKind::PearsonStandard,
                     bool ties_count = false);
Rational exact_alpha(const Fiber& fiber, const ProbabilityVector& p_hat, const Network& x, GofKind stat,
                     bool ties_count = false);

}  // namespace p1

#endif  // P1_FIBER_HPP
