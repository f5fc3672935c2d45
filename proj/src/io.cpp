// SPDX-License-Identifier: Apache-2.0

#include "p1/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace p1 {

namespace {

std::string big(const Integer& z) { return z.get_str(); }
std::string big(const Rational& q) { return q.get_str(); }

Json big_array(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(big(z));
  return a;
}

Json big_rows(const std::vector<std::vector<Integer>>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(big_array(r));
  return a;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_matrix(std::ostream& out, const IntMatrix& m) {
  out << m.rows << ' ' << m.cols << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out << (c ? " " : "") << m(r, c);
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  out << rows.size() << ' ' << cols << '\n';
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) out << (c ? " " : "") << r[c];
    out << '\n';
  }
}

IntMatrix read_matrix(std::istream& in) {
  long long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw std::invalid_argument("matrix header must be 'rows cols'");
  IntMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (auto& v : m.data) {
    if (!(in >> v)) throw std::invalid_argument("matrix has fewer entries than its header says");
  }
  return m;
}

std::string format_network(const Network& x) {
  std::string s = std::to_string(x.n());
  for (auto c : x.configs()) {
    s += ' ';
    s += config_code(c);
  }
  return s;
}

Network parse_network(const std::string& line) {
  std::istringstream in(line);
  int n = 0;
  if (!(in >> n) || n < 2) throw std::invalid_argument("network line must start with n >= 2");
  std::vector<DyadConfig> configs;
  std::string code;
  while (in >> code) configs.push_back(parse_config_code(code));
  if (configs.size() != dyad_count(n)) {
    throw std::invalid_argument("network line needs " + std::to_string(dyad_count(n)) + " dyad codes");
  }
  return Network(n, std::move(configs));
}

std::vector<Network> read_networks(std::istream& in) {
  std::vector<Network> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (!line.empty()) out.push_back(parse_network(line));
  }
  return out;
}

Json network_to_json(const Network& x) {
  const auto adj = x.adjacency();
  Json rows = Json::array();
  for (int i = 0; i < x.n(); ++i) {
    rows.push_back(std::vector<int>(adj.begin() + i * x.n(), adj.begin() + (i + 1) * x.n()));
  }
  return Json{{"n", x.n()}, {"adjacency", rows}};
}

Network network_from_json(const Json& j) {
  const Json& rows = j.is_object() ? j.at("adjacency") : j;
  if (!rows.is_array()) throw std::invalid_argument("adjacency must be an array of rows");
  const int n = static_cast<int>(rows.size());
  if (j.is_object() && j.contains("n") && j.at("n").get<int>() != n) {
    throw std::invalid_argument("adjacency size does not match n");
  }
  std::vector<int> adj;
  for (const auto& r : rows) {
    if (!r.is_array() || static_cast<int>(r.size()) != n) throw std::invalid_argument("adjacency must be square");
    for (const auto& v : r) adj.push_back(v.get<int>());
  }
  return Network::from_adjacency(n, adj);
}

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) rows.push_back(m.row(r));
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"data", rows}};
}

IntMatrix int_matrix_from_json(const Json& j) {
  IntMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& rows = j.at("data");
  if (rows.size() != m.rows) throw std::invalid_argument("matrix row count mismatch");
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (rows[r].size() != m.cols) throw std::invalid_argument("matrix column count mismatch");
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c].get<std::int64_t>();
  }
  return m;
}

Json matrix_to_json(const DesignMatrix& a) {
  Json j = matrix_to_json(a.entries());
  j["n"] = a.n();
  j["variant"] = variant_name(a.variant());
  j["form"] = a.form() == MatrixForm::Full ? "full" : a.form() == MatrixForm::Simplified ? "simplified" : "common";
  Json rl = Json::array(), cl = Json::array();
  for (const auto& r : a.row_labels()) rl.push_back(r.str());
  const auto dyads = dyads_of(a.n());
  for (const auto& c : a.col_labels()) {
    cl.push_back(std::to_string(dyads[c.dyad].i + 1) + "-" + std::to_string(dyads[c.dyad].j + 1) + ":" +
                 std::string(config_code(c.config)));
  }
  j["row_labels"] = rl;
  j["col_labels"] = cl;
  return j;
}

Json move_to_json(const MarkovMove& m) {
  return Json{{"n", m.n},
              {"move", m.str()},
              {"degree", m.degree()},
              {"kind", move_kind_name(m.kind)},
              {"origin", m.origin},
              {"parents", m.parents}};
}

MarkovMove move_from_json(const Json& j) {
  MarkovMove m = MarkovMove::parse(j.at("n").get<int>(), j.at("move").get<std::string>());
  const auto kind = j.value("kind", std::string("cycle"));
  for (auto k : {MoveKind::Cycle, MoveKind::T, MoveKind::Q, MoveKind::Walk, MoveKind::Lift, MoveKind::Overlap}) {
    if (kind == move_kind_name(k)) m.kind = k;
  }
  m.origin = j.value("origin", std::string());
  m.parents = j.value("parents", std::vector<std::string>{});
  return m;
}

Json moves_to_json(const std::vector<MarkovMove>& moves) {
  Json a = Json::array();
  for (const auto& m : moves) a.push_back(move_to_json(m));
  return a;
}

std::vector<MarkovMove> moves_from_json(const Json& j) {
  std::vector<MarkovMove> out;
  for (const auto& e : j) out.push_back(move_from_json(e));
  return out;
}

IntMatrix moves_to_matrix(const std::vector<MarkovMove>& moves) {
  if (moves.empty()) return IntMatrix(0, 0);
  IntMatrix m(moves.size(), moves.front().delta.size());
  for (std::size_t r = 0; r < moves.size(); ++r) {
    if (moves[r].delta.size() != m.cols) throw std::invalid_argument("moves of different sizes");
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = moves[r].delta[c];
  }
  return m;
}

Json statistic_to_json(const SufficientStatistic& t) { return Json(t.t); }

SufficientStatistic statistic_from_json(const Json& j) { return SufficientStatistic{j.get<std::vector<std::int64_t>>()}; }

Json fiber_to_json(const Fiber& f) {
  Json members = Json::array();
  for (const auto& x : f.members) members.push_back(format_network(x));
  return Json{{"t", statistic_to_json(f.t)}, {"size", f.members.size()}, {"members", members}};
}

Fiber fiber_from_json(const Json& j) {
  Fiber f{statistic_from_json(j.at("t")), {}};
  for (const auto& m : j.at("members")) f.members.push_back(parse_network(m.get<std::string>()));
  return f;
}

Json connectivity_to_json(const Connectivity& c) {
  return Json{{"connected", c.connected}, {"components", c.components}};
}

Json walk_report_to_json(const WalkReport& r) {
  Json j{{"steps", r.steps},
         {"exceed_count", r.exceed_count},
         {"alpha_hat", r.alpha_hat},
         {"seed", r.seed},
         {"acceptance_rate", r.acceptance_rate},
         {"distinct_states_visited", r.distinct_states_visited},
         {"move_set_hash", r.move_set_hash},
         {"moves_used", r.moves_used},
         {"observed_gf", r.observed_gf}};
  if (!r.visits.empty()) {
    Json v = Json::array();
    for (const auto& [x, c] : r.visits) v.push_back(Json{{"network", format_network(x)}, {"count", c}});
    j["visits"] = v;
  }
  return j;
}

WalkReport walk_report_from_json(const Json& j) {
  WalkReport r;
  r.steps = j.at("steps").get<std::uint64_t>();
  r.exceed_count = j.at("exceed_count").get<std::uint64_t>();
  r.alpha_hat = j.at("alpha_hat").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.acceptance_rate = j.at("acceptance_rate").get<double>();
  r.distinct_states_visited = j.at("distinct_states_visited").get<std::uint64_t>();
  r.move_set_hash = j.at("move_set_hash").get<std::uint64_t>();
  r.moves_used = j.value("moves_used", std::size_t{0});
  r.observed_gf = j.value("observed_gf", 0.0);
  if (j.contains("visits")) {
    for (const auto& v : j.at("visits")) {
      r.visits.emplace_back(parse_network(v.at("network").get<std::string>()), v.at("count").get<std::uint64_t>());
    }
  }
  return r;
}

Json facial_set_to_json(const FacialSet& f) {
  Json w = Json::array();
  for (const auto& q : f.witness) w.push_back(big(q));
  return Json{{"indices", f.indices}, {"witness", w}};
}

FacialSet facial_set_from_json(const Json& j) {
  FacialSet f;
  f.indices = j.at("indices").get<std::vector<std::size_t>>();
  for (const auto& s : j.at("witness")) f.witness.emplace_back(s.get<std::string>());
  for (auto& q : f.witness) q.canonicalize();
  return f;
}

Json mle_to_json(const MleResult& r, const MleOptions& opts) {
  Json j{{"n", r.p_hat.n},
         {"exists", r.exists},
         {"p_hat", r.p_hat.p},
         {"facial_set", facial_set_to_json(r.facial_set)},
         {"moment_residual", r.moment_residual},
         {"iterations", r.iterations},
         {"tolerance", opts.tol},
         {"method", opts.method == MleMethod::Newton ? "newton" : "scaling"},
         {"gauge", r.gauge}};
  j["zeta_hat"] = r.zeta_hat ? Json(r.zeta_hat->values) : Json(nullptr);
  return j;
}

MleResult mle_from_json(const Json& j) {
  MleResult r;
  r.p_hat = ProbabilityVector{j.at("n").get<int>(), j.at("p_hat").get<std::vector<double>>()};
  r.exists = j.at("exists").get<bool>();
  r.facial_set = facial_set_from_json(j.at("facial_set"));
  r.moment_residual = j.at("moment_residual").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.gauge = j.value("gauge", std::vector<std::string>{});
  if (j.contains("zeta_hat") && !j.at("zeta_hat").is_null()) {
    r.zeta_hat = ParameterVector{j.at("zeta_hat").get<std::vector<double>>()};
  }
  return r;
}

Json cone_to_json(const ConeDescription& c) {
  return Json{{"dim", c.dim},
              {"generators", matrix_to_json(c.generators)},
              {"facet_count", c.facets.size()},
              {"facets", big_rows(c.facets)}};
}

Json polytope_to_json(const PolytopeDescription& p) {
  Json v = Json::array();
  for (const auto& t : p.vertices) v.push_back(statistic_to_json(t));
  return Json{{"dim", p.dim},
              {"vertex_count", p.vertices.size()},
              {"facet_count", p.facets.size()},
              {"vertices", v},
              {"facets", big_rows(p.facets)}};
}

Json zero_pattern_to_json(const ZeroPattern& z) {
  return Json{{"kind", zero_pattern_kind_name(z.kind)},
              {"normal", big_array(z.normal)},
              {"n", z.n},
              {"zero", z.zero},
              {"render", z.render()}};
}

Json census_to_json(const CensusReport& r) {
  Json j{{"n", r.n},
         {"variant", variant_name(r.variant)},
         {"networks_total", r.networks_total},
         {"distinct_statistics", r.distinct_statistics},
         {"classified", r.classified},
         {"runtime_seconds", r.runtime_seconds}};
  if (r.classified) {
    j["interior_statistics"] = r.interior_statistics;
    j["networks_with_mle"] = r.networks_with_mle;
  }
  if (!r.entries.empty()) {
    Json e = Json::array();
    for (const auto& x : r.entries) {
      e.push_back(Json{{"t", statistic_to_json(x.t)},
                       {"hash", x.t.hash()},
                       {"fiber_size", x.fiber_size},
                       {"interior", x.interior ? Json(*x.interior) : Json(nullptr)}});
    }
    j["entries"] = e;
  }
  return j;
}

CensusReport census_from_json(const Json& j) {
  CensusReport r;
  r.n = j.at("n").get<int>();
  r.variant = parse_variant(j.at("variant").get<std::string>());
  r.networks_total = j.at("networks_total").get<std::uint64_t>();
  r.distinct_statistics = j.at("distinct_statistics").get<std::uint64_t>();
  r.classified = j.at("classified").get<bool>();
  r.runtime_seconds = j.at("runtime_seconds").get<double>();
  r.interior_statistics = j.value("interior_statistics", std::uint64_t{0});
  r.networks_with_mle = j.value("networks_with_mle", std::uint64_t{0});
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) {
      CensusEntry x{statistic_from_json(e.at("t")), e.at("fiber_size").get<std::uint64_t>(), std::nullopt};
      if (!e.at("interior").is_null()) x.interior = e.at("interior").get<bool>();
      r.entries.push_back(std::move(x));
    }
  }
  return r;
}

void write_census_csv(std::ostream& out, const std::vector<CensusReport>& reports) {
  out << "n,variant,networks_total,distinct_statistics,interior_statistics,networks_with_mle,runtime_seconds\n";
  for (const auto& r : reports) {
    out << r.n << ',' << variant_name(r.variant) << ',' << r.networks_total << ',' << r.distinct_statistics << ',';
    if (r.classified) {
      out << r.interior_statistics << ',' << r.networks_with_mle;
    } else {
      out << ',';
    }
    out << ',' << r.runtime_seconds << '\n';
  }
}

void write_census_detail(std::ostream& out, const CensusReport& r) {
  for (const auto& e : r.entries) {
    out << std::hex << e.t.hash() << std::dec << ' ' << e.fiber_size << ' ';
    out << (e.interior ? (*e.interior ? "interior" : "boundary") : "-");
    for (auto v : e.t.t) out << ' ' << v;
    out << '\n';
  }
}

Json connectivity_report_to_json(const ConnectivityReport& r) {
  Json depths = Json::array();
  for (const auto& d : r.depths) {
    depths.push_back(Json{{"depth", d.depth},
                          {"moves", d.moves},
                          {"fibers_checked", d.fibers_checked},
                          {"disconnected", d.disconnected}});
  }
  Json ce = Json::array();
  for (const auto& [f, c] : r.counterexamples) ce.push_back(Json{{"fiber", fiber_to_json(f)}, {"components", c.components}});
  return Json{{"n", r.n},
              {"variant", variant_name(r.variant)},
              {"depths", depths},
              {"minimal_depth", r.minimal_depth ? Json(*r.minimal_depth) : Json(nullptr)},
              {"counterexamples", ce}};
}

}  // namespace p1
