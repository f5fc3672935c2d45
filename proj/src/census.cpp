// SPDX-License-Identifier: Apache-2.0

#include "p1/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "p1/geometry.hpp"

namespace p1 {

namespace {

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Column nonzeros, so that t = sum over dyads of one column each.
struct SparseColumns {
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> cols;
  std::size_t rows = 0;

  explicit SparseColumns(const DesignMatrix& a) : cols(a.cols()), rows(a.rows()) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a(r, c) != 0) cols[c].emplace_back(static_cast<std::uint32_t>(r), a(r, c));
      }
    }
  }

  void statistic(const Network& x, std::vector<std::int64_t>& t) const {
    std::fill(t.begin(), t.end(), 0);
    for (std::size_t d = 0; d < x.dyads(); ++d) {
      for (const auto& [r, v] : cols[d * kConfigsPerDyad + static_cast<std::size_t>(x.config(d))]) t[r] += v;
    }
  }
};

template <class Fn>
void run_parallel(unsigned threads, std::uint64_t total, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1)));
  if (threads <= 1) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = total * w / threads;
    const std::uint64_t hi = total * (w + 1) / threads;
    pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

void require_census_size(int n) {
  if (n < 2 || n > kMaxCensusNodes) {
    throw CapacityError("exhaustive enumeration supports 2 <= n <= " + std::to_string(kMaxCensusNodes));
  }
}

std::string checkpoint_header(int n, ReciprocationVariant v, std::size_t distinct) {
  std::ostringstream s;
  s << "census " << n << ' ' << variant_name(v) << ' ' << distinct;
  return s.str();
}

}  // namespace

CensusReport run_census(int n, ReciprocationVariant variant, const CensusOptions& opts) {
  require_census_size(n);
  const auto start = std::chrono::steady_clock::now();
  const DesignMatrix a = build_design_matrix(n, variant);
  const SparseColumns sc(a);
  const std::uint64_t total = network_count(n);
  const unsigned threads = worker_count(opts.threads);

  std::vector<std::unordered_map<std::vector<std::int64_t>, std::uint64_t, KeyHash>> parts(
      std::min<std::uint64_t>(threads, total));
  run_parallel(threads, total, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::int64_t> t(a.rows());
    auto& local = parts[w];
    for_each_network(n, lo, hi, [&](const Network& x) {
      sc.statistic(x, t);
      ++local[t];
    });
  });
  std::map<std::vector<std::int64_t>, std::uint64_t> merged;
  for (auto& part : parts) {
    for (auto& [k, c] : part) merged[k] += c;
    part.clear();
  }

  CensusReport rep;
  rep.n = n;
  rep.variant = variant;
  rep.networks_total = total;
  rep.distinct_statistics = merged.size();
  rep.classified = opts.classify.value_or(n <= 4);

  std::vector<CensusEntry> entries;
  entries.reserve(merged.size());
  for (auto& [k, c] : merged) entries.push_back({SufficientStatistic{k}, c, std::nullopt});
  merged.clear();

  if (rep.classified) {
    std::vector<signed char> verdict(entries.size(), -1);
    const std::string header = checkpoint_header(n, variant, entries.size());
    if (!opts.checkpoint_path.empty()) {
      std::ifstream in(opts.checkpoint_path);
      std::string line;
      if (in && std::getline(in, line) && line == header) {
        std::size_t idx;
        int v;
        while (in >> idx >> v) {
          if (idx < verdict.size()) verdict[idx] = static_cast<signed char>(v);
        }
      }
    }
    std::ofstream ckpt;
    if (!opts.checkpoint_path.empty()) {
      const bool resume = std::any_of(verdict.begin(), verdict.end(), [](signed char v) { return v >= 0; });
      ckpt.open(opts.checkpoint_path, resume ? std::ios::app : std::ios::trunc);
      if (!resume) ckpt << header << '\n';
    }
    std::mutex io;
    std::atomic<std::size_t> done{0};
    const std::size_t count = entries.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned, std::uint64_t, std::uint64_t) {
      for (std::size_t i = next++; i < count; i = next++) {
        if (verdict[i] < 0) {
          const auto rt = to_rational(entries[i].t);
          const bool inside = cone_membership(a.entries(), rt) == ConeMembership::Interior;
          verdict[i] = inside ? 1 : 0;
          if (ckpt.is_open()) {
            std::lock_guard lock(io);
            ckpt << i << ' ' << (inside ? 1 : 0) << '\n';
          }
        }
        const std::size_t d = ++done;
        if (opts.progress && (d % 1024 == 0 || d == count)) {
          std::lock_guard lock(io);
          opts.progress(d, count);
        }
      }
    };
    run_parallel(threads, threads, worker);
    for (std::size_t i = 0; i < count; ++i) {
      entries[i].interior = verdict[i] == 1;
      if (verdict[i] == 1) {
        ++rep.interior_statistics;
        rep.networks_with_mle += entries[i].fiber_size;
      }
    }
  }
  if (opts.detail) rep.entries = std::move(entries);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<Fiber> all_fibers(int n, ReciprocationVariant variant, unsigned threads) {
  require_census_size(n);
  const DesignMatrix a = build_design_matrix(n, variant);
  const SparseColumns sc(a);
  const std::uint64_t total = network_count(n);
  const unsigned workers = worker_count(threads);
  std::vector<std::map<std::vector<std::int64_t>, std::vector<Network>>> parts(
      std::min<std::uint64_t>(workers, total));
  run_parallel(workers, total, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::int64_t> t(a.rows());
    for_each_network(n, lo, hi, [&](const Network& x) {
      sc.statistic(x, t);
      parts[w][t].push_back(x);
    });
  });
  // Ranges are in index order, so concatenating parts keeps members sorted.
  std::map<std::vector<std::int64_t>, std::vector<Network>> merged;
  for (auto& part : parts) {
    for (auto& [k, v] : part) {
      auto& dst = merged[k];
      dst.insert(dst.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
  }
  std::vector<Fiber> out;
  out.reserve(merged.size());
  for (auto& [k, v] : merged) out.push_back(Fiber{SufficientStatistic{k}, std::move(v)});
  return out;
}

ConnectivityReport verify_connectivity_census(int n, ReciprocationVariant variant, const ConnectivityOptions& opts) {
  if (n > 4) throw CapacityError("connectivity census is limited to n <= 4");
  if (opts.first_depth < 1 || opts.max_depth < opts.first_depth) throw std::invalid_argument("bad depth range");
  const auto fibers = all_fibers(n, variant, opts.threads);
  std::vector<std::size_t> nontrivial;
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    if (fibers[i].members.size() >= 2) nontrivial.push_back(i);
  }
  const unsigned workers = worker_count(opts.threads);

  ConnectivityReport rep;
  rep.n = n;
  rep.variant = variant;
  for (int depth = opts.first_depth; depth <= opts.max_depth; ++depth) {
    MoveSetOptions mo;
    mo.depth = depth;
    const auto moves = generate_move_set(n, variant, mo);
    std::vector<std::optional<Connectivity>> bad(nontrivial.size());
    run_parallel(workers, nontrivial.size(), [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t k = lo; k < hi; ++k) {
        auto c = check_connectivity(fibers[nontrivial[k]], moves);
        if (!c.connected) bad[k] = std::move(c);
      }
    });
    DepthResult dr{depth, moves.size(), nontrivial.size(), 0};
    rep.counterexamples.clear();
    for (std::size_t k = 0; k < bad.size(); ++k) {
      if (!bad[k]) continue;
      ++dr.disconnected;
      if (rep.counterexamples.size() < opts.max_counterexamples) {
        rep.counterexamples.emplace_back(fibers[nontrivial[k]], std::move(*bad[k]));
      }
    }
    rep.depths.push_back(dr);
    if (dr.disconnected == 0) {
      rep.minimal_depth = depth;
      break;
    }
  }
  return rep;
}

}  // namespace p1
