// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive small-n experiments: distinct sufficient statistics, MLE
// existence counts and fiber-graph connectivity over the whole sample space.

#ifndef P1_CENSUS_HPP
#define P1_CENSUS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "p1/fiber.hpp"
#include "p1/model.hpp"

namespace p1 {

inline constexpr int kMaxCensusNodes = 5;

struct CensusOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  /// LP classification of every distinct statistic; default is n <= 4.
  std::optional<bool> classify;
  bool detail = false;
  /// Classification verdicts are appended here and reused on restart.
  std::string checkpoint_path;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct CensusEntry {
  SufficientStatistic t;
  std::uint64_t fiber_size = 0;
  std::optional<bool> interior;
};

struct CensusReport {
  int n = 0;
  ReciprocationVariant variant = ReciprocationVariant::Zero;
  std::uint64_t networks_total = 0;
  std::uint64_t distinct_statistics = 0;
  bool classified = false;
  std::uint64_t interior_statistics = 0;
  std::uint64_t networks_with_mle = 0;
  double runtime_seconds = 0.0;
  std::vector<CensusEntry> entries;  // sorted by t; filled when detail is set
};

/// Enumerates all 4^{C(n,2)} networks, groups them by exact statistic and
/// classifies each statistic as interior or not by exact LP.
CensusReport run_census(int n, ReciprocationVariant variant, const CensusOptions& opts = {});

/// Every fiber of the sample space, keyed by statistic (n <= 4).
std::vector<Fiber> all_fibers(int n, ReciprocationVariant variant, unsigned threads = 0);

struct DepthResult {
  int depth = 0;
  std::size_t moves = 0;
  std::size_t fibers_checked = 0;  // fibers with at least two members
  std::size_t disconnected = 0;
};

struct ConnectivityReport {
  int n = 0;
  ReciprocationVariant variant = ReciprocationVariant::Zero;
  std::vector<DepthResult> depths;
  std::optional<int> minimal_depth;
  /// Disconnected fibers at the last depth tried, with their components.
  std::vector<std::pair<Fiber, Connectivity>> counterexamples;
};

struct ConnectivityOptions {
  int first_depth = 1;
  int max_depth = 4;
  unsigned threads = 0;
  std::size_t max_counterexamples = 5;
};

/// Tries depths first_depth..max_depth and stops at the first one that
/// connects every fiber.
ConnectivityReport verify_connectivity_census(int n, ReciprocationVariant variant,
                                              const ConnectivityOptions& opts = {});

}  // namespace p1

#endif  // P1_CENSUS_HPP
