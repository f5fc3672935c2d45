// SPDX-License-Identifier: Apache-2.0
//
// p1stat: command-line front end for the p1 model library.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <functional>
#include <map>
#include <sstream>

#include "p1/census.hpp"
#include "p1/fiber.hpp"
#include "p1/geometry.hpp"
#include "p1/inference.hpp"
#include "p1/io.hpp"
#include "p1/model.hpp"
#include "p1/moves.hpp"
#include "p1/version.hpp"

namespace {

using namespace p1;

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

struct Common {
  int n = 0;
  std::string variant = "zero";
  bool json = false;
  unsigned threads = 0;
  std::string output;
};

struct NetworkInput {
  std::string network;    // "n c c ..." inline
  std::string input;      // file with network lines
  std::string adjacency;  // adjacency JSON file
};

unsigned default_threads() {
  if (const char* env = std::getenv("P1STAT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// Every run starts with a metadata block: version, command and config echo.
// Wall-clock values (time, seconds) live only in the metadata, so equal runs
// give byte-identical results.
void emit(const Common& c, const std::string& command, const Json& config, Json result,
          const std::function<void(std::ostream&)>& text) {
  Output out(c.output);
  auto& os = out.stream();
  Json meta{{"tool", "p1stat"}, {"version", kVersion}, {"command", command}, {"config", config}, {"time", utc_now()}};
  if (result.is_object() && result.contains("runtime_seconds")) {
    meta["seconds"] = result["runtime_seconds"];
    result.erase("runtime_seconds");
  }
  if (c.json) {
    os << Json{{"meta", meta}, {"result", result}}.dump(2) << '\n';
    return;
  }
  os << "# p1stat " << kVersion << ' ' << command << ' ' << config.dump() << '\n';
  text(os);
}

Network read_network(const NetworkInput& in) {
  if (!in.network.empty()) return parse_network(in.network);
  if (!in.adjacency.empty()) {
    std::ifstream f(in.adjacency);
    if (!f) throw std::invalid_argument("cannot open " + in.adjacency);
    return network_from_json(Json::parse(f));
  }
  if (!in.input.empty()) {
    std::ifstream f(in.input);
    if (!f) throw std::invalid_argument("cannot open " + in.input);
    auto nets = read_networks(f);
    if (nets.empty()) throw std::invalid_argument("no network in " + in.input);
    return nets.front();
  }
  throw std::invalid_argument("give a network with --network, --input or --adjacency");
}

void add_network_options(CLI::App* sub, NetworkInput& in) {
  sub->add_option("--network", in.network, "network as 'n code code ...' (codes 00,10,01,11 in dyad order)");
  sub->add_option("--input", in.input, "file with one network per line");
  sub->add_option("--adjacency", in.adjacency, "JSON file with an n x n adjacency matrix");
}

void add_common(CLI::App* sub, Common& c, bool need_n) {
  auto* opt = sub->add_option("-n,--n", c.n, "number of nodes");
  if (need_n) opt->required();
  sub->add_option("--variant", c.variant, "reciprocation: zero, constant or edge")
      ->check(CLI::IsMember({"zero", "constant", "edge"}));
}

Json base_config(const Common& c) { return Json{{"n", c.n}, {"variant", c.variant}}; }

void print_matrix_text(std::ostream& os, const DesignMatrix& a) {
  const auto dyads = dyads_of(a.n());
  os << std::setw(10) << "";
  for (const auto& cl : a.col_labels()) {
    os << ' ' << dyads[cl.dyad].i + 1 << dyads[cl.dyad].j + 1 << config_code(cl.config);
  }
  os << '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    os << std::setw(10) << std::left << a.row_labels()[r].str() << std::right;
    for (std::size_t c = 0; c < a.cols(); ++c) os << std::setw(7) << a(r, c);
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p1stat: design matrices, Markov moves, fiber walks, MLE and marginal cones for the p1 model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  c.threads = default_threads();
  NetworkInput net;
  auto global = [&](CLI::App* sub) {
    sub->add_flag("--json", c.json, "machine-readable output");
    sub->add_option("--threads", c.threads, "worker threads (default: P1STAT_THREADS or all cores)");
    sub->add_option("-o,--output", c.output, "write to this file instead of stdout");
  };

  // design
  auto* design = app.add_subcommand("design", "print a design matrix");
  add_common(design, c, true);
  global(design);
  std::string form = "full";
  bool matrix_text = false;
  design->add_option("--form", form, "full, simplified or common")->check(CLI::IsMember({"full", "simplified", "common"}));
  design->add_flag("--matrix", matrix_text, "plain 'rows cols' matrix format");

  // suffstat
  auto* suff = app.add_subcommand("suffstat", "sufficient statistic t = A x");
  add_common(suff, c, false);
  add_network_options(suff, net);
  global(suff);

  // moves
  auto* moves = app.add_subcommand("moves", "generate the applicable move set");
  add_common(moves, c, true);
  global(moves);
  MoveSetOptions mso;
  std::string move_format = "line";
  moves->add_option("--depth", mso.depth, "overlap depth")->check(CLI::PositiveNumber);
  moves->add_option("--max-cycle", mso.max_cycle_length, "longest cycle of G_n to use (0 = all)");
  moves->add_option("--walk-edges", mso.walk_max_edges, "longest closed walk of K_n to use");
  moves->add_option("--format", move_format, "line, json or matrix")->check(CLI::IsMember({"line", "json", "matrix"}));

  // fiber
  auto* fiber = app.add_subcommand("fiber", "enumerate the fiber of a network");
  add_common(fiber, c, false);
  add_network_options(fiber, net);
  global(fiber);
  bool fiber_connect = false;
  int fiber_depth = 2;
  fiber->add_flag("--connectivity", fiber_connect, "also check connectivity under the move set");
  fiber->add_option("--depth", fiber_depth, "move set depth for --connectivity")->check(CLI::PositiveNumber);

  // gof
  auto* gof = app.add_subcommand("gof", "goodness of fit by fiber walk or exact enumeration");
  add_common(gof, c, false);
  add_network_options(gof, net);
  global(gof);
  WalkOptions wo;
  std::string stat = "pearson";
  bool exact = false;
  bool lr_factor2 = false;
  int gof_depth = 2;
  gof->add_option("-K,--steps", wo.steps, "number of walk steps K");
  gof->add_option("--seed", wo.seed, "random seed");
  gof->add_option("--stat", stat, "pearson, pearson-paper or lr")
      ->check(CLI::IsMember({"pearson", "pearson-paper", "lr"}));
  gof->add_flag("--ties", wo.ties_count, "count GF(x') >= GF(x) instead of >");
  gof->add_option("--burn-in", wo.burn_in, "steps discarded before counting");
  gof->add_option("--thinning", wo.thinning, "count every k-th step");
  gof->add_flag("--exact", exact, "exact alpha by fiber enumeration (n <= 5)");
  gof->add_option("--depth", gof_depth, "move set depth")->check(CLI::PositiveNumber);
  gof->add_flag("--lr-factor2", lr_factor2, "report the likelihood ratio statistic with the factor 2");
  bool no_prune = false;
  gof->add_flag("--no-prune", no_prune, "walk over every move, including those that cannot act in the fiber");

  // mle
  auto* mle = app.add_subcommand("mle", "maximum likelihood estimate");
  add_common(mle, c, false);
  add_network_options(mle, net);
  global(mle);
  MleOptions mo;
  std::string mle_mode = "fit";
  std::string method = "newton";
  mle->add_option("--mode", mle_mode, "fit, exists or extended")->check(CLI::IsMember({"fit", "exists", "extended"}));
  mle->add_option("--tol", mo.tol, "moment residual tolerance");
  mle->add_option("--max-iter", mo.max_iter, "iteration limit");
  mle->add_option("--method", method, "newton or scaling")->check(CLI::IsMember({"newton", "scaling"}));

  // cone
  auto* cone = app.add_subcommand("cone", "marginal cone: facets, dimension or zero patterns");
  add_common(cone, c, true);
  global(cone);
  std::string cone_mode = "facets";
  bool cone_long = false;
  bool show_facets = false;
  std::string order = "lex";
  cone->add_option("--mode", cone_mode, "facets, dim or zero-patterns")
      ->check(CLI::IsMember({"facets", "dim", "zero-patterns"}));
  cone->add_flag("--long", cone_long, "lift the generator cap for long runs (n = 6)");
  cone->add_flag("--show", show_facets, "print the facet normals");
  cone->add_option("--order", order, "insertion order: lex, max-cutoff or min-cutoff")
      ->check(CLI::IsMember({"lex", "max-cutoff", "min-cutoff"}));

  // hull
  auto* hull = app.add_subcommand("hull", "polytope of observable sufficient statistics");
  add_common(hull, c, true);
  global(hull);
  bool minkowski = false;
  hull->add_flag("--minkowski", minkowski, "check the per-dyad face decomposition of every facet");

  // census
  auto* census = app.add_subcommand("census", "exhaustive census of sufficient statistics");
  add_common(census, c, true);
  global(census);
  CensusOptions co;
  bool classify = false, no_classify = false, csv = false;
  std::string detail_path;
  census->add_flag("--classify", classify, "LP classification even for n = 5");
  census->add_flag("--no-classify", no_classify, "distinct counts only");
  census->add_flag("--csv", csv, "CSV output");
  census->add_option("--detail", detail_path, "write one line per distinct statistic to this file");
  census->add_option("--checkpoint", co.checkpoint_path, "checkpoint file for the classification");

  // connectivity
  auto* conn = app.add_subcommand("connectivity", "fiber connectivity over the whole sample space");
  add_common(conn, c, true);
  global(conn);
  ConnectivityOptions cno;
  conn->add_option("--first-depth", cno.first_depth, "first depth to try")->check(CLI::PositiveNumber);
  conn->add_option("--max-depth", cno.max_depth, "last depth to try")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto variant = parse_variant(c.variant);
    auto resolve_network = [&]() {
      Network x = read_network(net);
      if (c.n != 0 && c.n != x.n()) throw std::invalid_argument("--n does not match the network");
      c.n = x.n();
      return x;
    };

    if (*design) {
      const MatrixForm f = form == "full" ? MatrixForm::Full : form == "simplified" ? MatrixForm::Simplified
                                                                                    : MatrixForm::CommonSubmatrix;
      const DesignMatrix a = f == MatrixForm::CommonSubmatrix ? common_submatrix(c.n) : build_design_matrix(c.n, variant, f);
      Json cfg = base_config(c);
      cfg["form"] = form;
      emit(c, "design", cfg, matrix_to_json(a), [&](std::ostream& os) {
        if (matrix_text) {
          write_matrix(os, a.entries());
        } else {
          print_matrix_text(os, a);
        }
      });
    } else if (*suff) {
      const Network x = resolve_network();
      const DesignMatrix a = build_design_matrix(c.n, variant);
      const auto t = sufficient_statistic(a, x);
      Json cfg = base_config(c);
      cfg["network"] = format_network(x);
      emit(c, "suffstat", cfg, Json{{"t", statistic_to_json(t)}, {"hash", t.hash()}}, [&](std::ostream& os) {
        for (std::size_t r = 0; r < a.rows(); ++r) os << a.row_labels()[r].str() << ' ' << t.t[r] << '\n';
      });
    } else if (*moves) {
      const auto ms = generate_move_set(c.n, variant, mso);
      Json cfg = base_config(c);
      cfg["depth"] = mso.depth;
      cfg["max_cycle"] = mso.max_cycle_length;
      cfg["walk_edges"] = mso.walk_max_edges;
      Json res{{"count", ms.size()}, {"hash", move_set_hash(ms)}, {"moves", moves_to_json(ms)}};
      emit(c, "moves", cfg, res, [&](std::ostream& os) {
        if (move_format == "matrix") {
          write_matrix(os, moves_to_matrix(ms));
        } else if (move_format == "json") {
          os << moves_to_json(ms).dump(2) << '\n';
        } else {
          os << "# " << ms.size() << " moves\n";
          for (const auto& m : ms) os << m.str() << '\n';
        }
      });
    } else if (*fiber) {
      const Network x = resolve_network();
      const DesignMatrix a = build_design_matrix(c.n, variant);
      const Fiber f = enumerate_fiber(a, sufficient_statistic(a, x));
      Json cfg = base_config(c);
      cfg["network"] = format_network(x);
      Json res = fiber_to_json(f);
      std::optional<Connectivity> cn;
      if (fiber_connect) {
        MoveSetOptions o;
        o.depth = fiber_depth;
        cn = check_connectivity(f, generate_move_set(c.n, variant, o));
        cfg["depth"] = fiber_depth;
        res["connectivity"] = connectivity_to_json(*cn);
      }
      emit(c, "fiber", cfg, res, [&](std::ostream& os) {
        os << "# fiber size " << f.members.size() << '\n';
        for (const auto& y : f.members) os << format_network(y) << '\n';
        if (cn) os << "# connected " << (cn->connected ? "yes" : "no") << ", components " << cn->components.size() << '\n';
      });
    } else if (*gof) {
      const Network x = resolve_network();
      const DesignMatrix a = build_design_matrix(c.n, variant);
      wo.stat = parse_gof_kind(stat);
      wo.prune_to_fiber = !no_prune;
      const auto fit = fit_mle(a, sufficient_statistic(a, x));
      double gf = gof_statistic(x, fit.p_hat, wo.stat);
      if (lr_factor2 && wo.stat == GofKind::LikelihoodRatio) gf *= 2.0;
      Json cfg = base_config(c);
      cfg["network"] = format_network(x);
      cfg["stat"] = stat;
      cfg["ties"] = wo.ties_count;
      if (exact) {
        const Fiber f = enumerate_fiber(a, sufficient_statistic(a, x));
        const Rational alpha = exact_alpha(f, fit.p_hat, x, wo.stat, wo.ties_count);
        cfg["exact"] = true;
        Json res{{"alpha", alpha.get_str()}, {"alpha_value", alpha.get_d()}, {"fiber_size", f.members.size()},
                 {"gf", gf}, {"mle_exists", fit.exists}};
        emit(c, "gof", cfg, res, [&](std::ostream& os) {
          os << "alpha " << alpha.get_str() << " (" << alpha.get_d() << ")\nfiber size " << f.members.size()
             << "\nGF " << gf << '\n';
        });
      } else {
        MoveSetOptions o;
        o.depth = gof_depth;
        const auto ms = generate_move_set(c.n, variant, o);
        const auto rep = walk_gof(a, x, fit.p_hat, ms, wo);
        cfg["steps"] = wo.steps;
        cfg["seed"] = wo.seed;
        cfg["depth"] = gof_depth;
        cfg["burn_in"] = wo.burn_in;
        cfg["thinning"] = wo.thinning;
        cfg["prune"] = wo.prune_to_fiber;
        Json res = walk_report_to_json(rep);
        res["gf"] = gf;
        res["mle_exists"] = fit.exists;
        emit(c, "gof", cfg, res, [&](std::ostream& os) {
          os << "alpha_hat " << rep.alpha_hat << "\nexceed " << rep.exceed_count << " of " << rep.steps
             << "\nacceptance " << rep.acceptance_rate << "\ndistinct states " << rep.distinct_states_visited
             << "\nmoves used " << rep.moves_used << " of " << ms.size() << "\nGF " << gf << '\n';
        });
      }
    } else if (*mle) {
      const Network x = resolve_network();
      const DesignMatrix a = build_design_matrix(c.n, variant);
      const auto t = sufficient_statistic(a, x);
      mo.method = method == "newton" ? MleMethod::Newton : MleMethod::Scaling;
      Json cfg = base_config(c);
      cfg["network"] = format_network(x);
      cfg["mode"] = mle_mode;
      if (mle_mode == "exists") {
        const bool inside = in_relative_interior(a, t);
        emit(c, "mle", cfg, Json{{"exists", inside}},
             [&](std::ostream& os) { os << "mle exists: " << (inside ? "yes" : "no") << '\n'; });
      } else {
        const auto r = mle_mode == "fit" ? fit_mle(a, t, mo) : extended_mle(a, t, mo);
        cfg["tol"] = mo.tol;
        cfg["method"] = method;
        emit(c, "mle", cfg, mle_to_json(r, mo), [&](std::ostream& os) {
          os << "exists " << (r.exists ? "yes" : "no") << "\nresidual " << r.moment_residual << "\niterations "
             << r.iterations << "\nfacial set size " << r.facial_set.indices.size() << " of " << a.cols() << '\n';
          const auto dyads = dyads_of(c.n);
          os << std::setprecision(10);
          for (std::size_t d = 0; d < dyads.size(); ++d) {
            os << dyads[d].i + 1 << '-' << dyads[d].j + 1;
            for (std::size_t k = 0; k < kConfigsPerDyad; ++k) os << ' ' << r.p_hat.p[d * kConfigsPerDyad + k];
            os << '\n';
          }
          if (!r.gauge.empty()) {
            os << "gauge:";
            for (const auto& g : r.gauge) os << ' ' << g << "=0";
            os << '\n';
          }
        });
      }
    } else if (*cone) {
      Json cfg = base_config(c);
      cfg["mode"] = cone_mode;
      if (cone_mode == "dim") {
        const DesignMatrix a = build_design_matrix(c.n, variant);
        const auto rank = cone_dim(a);
        emit(c, "cone", cfg, Json{{"rank", rank}, {"affine_dim", rank - 1}, {"rows", a.rows()}, {"cols", a.cols()}},
             [&](std::ostream& os) { os << "rank " << rank << "\naffine dim " << rank - 1 << '\n'; });
      } else if (cone_mode == "zero-patterns") {
        const auto pats = zero_pattern_facets(c.n);
        Json arr = Json::array();
        for (const auto& p : pats) arr.push_back(zero_pattern_to_json(p));
        emit(c, "cone", cfg, Json{{"facet_count", pats.size()}, {"patterns", arr}}, [&](std::ostream& os) {
          os << pats.size() << " facets\n";
          for (const auto& p : pats) os << '\n' << zero_pattern_kind_name(p.kind) << '\n' << p.render();
        });
      } else {
        ConeOptions copt;
        if (cone_long) copt.max_columns = 1u << 20;
        copt.order = order == "lex" ? InsertionOrder::Lex
                     : order == "max-cutoff" ? InsertionOrder::MaxCutoff
                                             : InsertionOrder::MinCutoff;
        const DesignMatrix a = build_design_matrix(c.n, variant);
        const auto start = std::chrono::steady_clock::now();
        const auto d = cone_facets(a, copt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        cfg["order"] = order;
        Json res = cone_to_json(d);
        res["affine_dim"] = d.dim - 1;
        res["runtime_seconds"] = secs;
        emit(c, "cone", cfg, res, [&](std::ostream& os) {
          os << "facets " << d.facets.size() << "\nrank " << d.dim << "\naffine dim " << d.dim - 1 << "\nseconds "
             << secs << '\n';
          if (show_facets) write_matrix(os, d.facets, d.facets.empty() ? 0 : d.facets.front().size());
        });
      }
    } else if (*hull) {
      const DesignMatrix a = build_design_matrix(c.n, variant);
      std::vector<SufficientStatistic> pts;
      for_each_network(c.n, 0, network_count(c.n), [&](const Network& x) { pts.push_back(sufficient_statistic(a, x)); });
      const auto p = hull_of_marginals(pts);
      Json cfg = base_config(c);
      Json res = polytope_to_json(p);
      std::size_t passing = 0;
      if (minkowski) {
        passing = minkowski_face_check(a, p);
        res["minkowski_passing"] = passing;
      }
      emit(c, "hull", cfg, res, [&](std::ostream& os) {
        os << "vertices " << p.vertices.size() << "\nfacets " << p.facets.size() << "\naffine dim " << p.dim << '\n';
        if (minkowski) os << "minkowski faces " << passing << " of " << p.facets.size() << '\n';
      });
    } else if (*census) {
      if (classify) co.classify = true;
      if (no_classify) co.classify = false;
      co.threads = c.threads;
      co.detail = !detail_path.empty();
      const auto r = run_census(c.n, variant, co);
      if (!detail_path.empty()) {
        std::ofstream f(detail_path);
        if (!f) throw std::invalid_argument("cannot open " + detail_path);
        write_census_detail(f, r);
      }
      CensusReport shown = r;
      shown.entries.clear();
      Json cfg = base_config(c);
      cfg["classified"] = r.classified;
      emit(c, "census", cfg, census_to_json(shown), [&](std::ostream& os) {
        if (csv) {
          write_census_csv(os, {shown});
          return;
        }
        os << "networks " << r.networks_total << "\ndistinct statistics " << r.distinct_statistics << '\n';
        if (r.classified) {
          os << "interior statistics " << r.interior_statistics << "\nnetworks with mle " << r.networks_with_mle << '\n';
        }
        os << "seconds " << r.runtime_seconds << '\n';
      });
    } else if (*conn) {
      cno.threads = c.threads;
      const auto r = verify_connectivity_census(c.n, variant, cno);
      Json cfg = base_config(c);
      cfg["first_depth"] = cno.first_depth;
      cfg["max_depth"] = cno.max_depth;
      emit(c, "connectivity", cfg, connectivity_report_to_json(r), [&](std::ostream& os) {
        for (const auto& d : r.depths) {
          os << "depth " << d.depth << ": " << d.moves << " moves, " << d.disconnected << " of " << d.fibers_checked
             << " fibers disconnected\n";
        }
        if (r.minimal_depth) {
          os << "minimal connecting depth " << *r.minimal_depth << '\n';
        } else {
          os << "not connected up to depth " << cno.max_depth << '\n';
          for (const auto& [f, cc] : r.counterexamples) {
            os << "# counterexample fiber of size " << f.members.size() << ", " << cc.components.size()
               << " components\n";
            for (const auto& y : f.members) os << format_network(y) << '\n';
          }
        }
      });
      if (!r.minimal_depth) return kExitFailure;
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kExitFailure;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitFailure;
  } catch (const InfeasibleStatistic& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
