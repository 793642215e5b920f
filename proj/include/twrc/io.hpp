#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "twrc/channel.hpp"
#include "twrc/optimizer.hpp"
#include "twrc/oracle.hpp"
#include "twrc/regimes.hpp"

namespace twrc {

using json = nlohmann::json;

/// "%.9g" in the classic locale.
std::string format_number(double v);

json to_json(const LinkGains& g);
LinkGains gains_from_json(const json& j);

json to_json(const Geometry& g);
/// "relay" is optional (map templates); missing relay defaults to the midpoint.
Geometry geometry_from_json(const json& j);

json to_json(const Regime& r);
json to_json(const SchemeAssignment& a);
json to_json(const PowerAllocation& a);
json to_json(const RatePoint& r);
json to_json(const KktDiagnostics& d);
json to_json(const SolveResult& r);

SolveResult solve_result_from_json(const json& j);

void write_hull_csv(std::ostream& os, const RegionHull& hull);
json hull_to_json(const RegionHull& hull);
void write_map_csv(std::ostream& os, const std::vector<MapCell>& cells);
json map_to_json(const std::vector<MapCell>& cells);
void write_profile_csv(std::ostream& os, const std::vector<PowerSample>& samples);
json profile_to_json(const std::vector<PowerSample>& samples);

}  // namespace twrc
