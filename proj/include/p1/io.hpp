// SPDX-License-Identifier: Apache-2.0
//
// Text and JSON serialization of networks, matrices, moves and reports.
// Big integers (facet normals, witnesses, exact ratios) are JSON strings.

#ifndef P1_IO_HPP
#define P1_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "p1/census.hpp"
#include "p1/fiber.hpp"
#include "p1/geometry.hpp"
#include "p1/inference.hpp"
#include "p1/model.hpp"
#include "p1/moves.hpp"

namespace p1 {

using Json = nlohmann::json;

/// "rows cols" header, then one row per line.
void write_matrix(std::ostream& out, const IntMatrix& m);
IntMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const std::vector<std::vector<Integer>>& rows, std::size_t cols);

/// "n c c ... c" with C(n,2) codes from {00,10,01,11} in dyad order.
std::string format_network(const Network& x);
Network parse_network(const std::string& line);
/// One network per nonblank line; '#' starts a comment.
std::vector<Network> read_networks(std::istream& in);

Json network_to_json(const Network& x);                // {"n":..,"adjacency":[[..]..]}
Network network_from_json(const Json& j);             // same, or a bare n x n array

Json matrix_to_json(const DesignMatrix& a);
Json matrix_to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);

Json move_to_json(const MarkovMove& m);
MarkovMove move_from_json(const Json& j);
Json moves_to_json(const std::vector<MarkovMove>& moves);
std::vector<MarkovMove> moves_from_json(const Json& j);
/// One move per row (lattice basis layout).
IntMatrix moves_to_matrix(const std::vector<MarkovMove>& moves);

Json statistic_to_json(const SufficientStatistic& t);
SufficientStatistic statistic_from_json(const Json& j);

Json fiber_to_json(const Fiber& f);
Fiber fiber_from_json(const Json& j);
Json connectivity_to_json(const Connectivity& c);

Json walk_report_to_json(const WalkReport& r);
WalkReport walk_report_from_json(const Json& j);

Json facial_set_to_json(const FacialSet& f);
FacialSet facial_set_from_json(const Json& j);
Json mle_to_json(const MleResult& r, const MleOptions& opts);
MleResult mle_from_json(const Json& j);

Json cone_to_json(const ConeDescription& c);
Json polytope_to_json(const PolytopeDescription& p);
Json zero_pattern_to_json(const ZeroPattern& z);

Json census_to_json(const CensusReport& r);
CensusReport census_from_json(const Json& j);
/// Header line plus one line per report.
void write_census_csv(std::ostream& out, const std::vector<CensusReport>& reports);
/// One line per distinct statistic: hash, fiber size, interior flag, t.
void write_census_detail(std::ostream& out, const CensusReport& r);

Json connectivity_report_to_json(const ConnectivityReport& r);

}  // namespace p1

#endif  // P1_IO_HPP
