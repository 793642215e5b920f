#include "twrc/io.hpp"

#include <cmath>
#include <locale>
#include <ostream>
#include <sstream>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

const char* const kGainKeys[] = {"g12", "g21", "g1r", "gr1", "g2r", "gr2"};

double* gain_field(LinkGains& g, std::string_view key) {
  if (key == "g12") return &g.g12;
  if (key == "g21") return &g.g21;
  if (key == "g1r") return &g.g1r;
  if (key == "gr1") return &g.gr1;
  if (key == "g2r") return &g.g2r;
  if (key == "gr2") return &g.gr2;
  return nullptr;
}

double number_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw InvalidInput(key, "missing");
  if (!j.at(key).is_number()) throw InvalidInput(key, "must be a number");
  return j.at(key).get<double>();
}

Point2 point_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw InvalidInput(key, "missing");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InvalidInput(key, "must be an [x, y] array");
  return {v[0].get<double>(), v[1].get<double>()};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

int row_index(RRow r) { return static_cast<int>(r) + 1; }
int column_index(TCol t) { return static_cast<int>(t) + 1; }

SchemeAssignment assignment_from_json(const json& j) {
  return {technique_from_string(j.at("user1").get<std::string>()),
          technique_from_string(j.at("user2").get<std::string>())};
}

}  // namespace

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(9);
  os << v;
  return os.str();
}

json to_json(const LinkGains& g) {
  return {{"g12", g.g12}, {"g21", g.g21}, {"g1r", g.g1r}, {"gr1", g.gr1},
          {"g2r", g.g2r}, {"gr2", g.gr2}, {"p", g.p}};
}

LinkGains gains_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("gains", "must be a JSON object");
  LinkGains g;
  for (const char* key : kGainKeys) *gain_field(g, key) = number_field(j, key);
  if (j.contains("p")) g.p = number_field(j, "p");
  return validate_gains(g);
}

json to_json(const Geometry& g) {
  return {{"user1", point_json(g.user1)}, {"user2", point_json(g.user2)},
          {"relay", point_json(g.relay)}, {"gamma1", g.gamma1},
          {"gamma2", g.gamma2}};
}

Geometry geometry_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("geometry", "must be a JSON object");
  Geometry g;
  if (j.contains("user1")) g.user1 = point_field(j, "user1");
  if (j.contains("user2")) g.user2 = point_field(j, "user2");
  if (j.contains("relay")) {
    g.relay = point_field(j, "relay");
  } else {
    g.relay = {(g.user1.x + g.user2.x) / 2.0, (g.user1.y + g.user2.y) / 2.0};
  }
  if (j.contains("gamma1")) g.gamma1 = number_field(j, "gamma1");
  if (j.contains("gamma2")) g.gamma2 = number_field(j, "gamma2");
  if (!(g.gamma1 > 0.0)) throw InvalidInput("gamma1", "must be positive");
  if (!(g.gamma2 > 0.0)) throw InvalidInput("gamma2", "must be positive");
  for (Point2 p : {g.user1, g.user2, g.relay})
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("geometry", "positions must be finite");
  return g;
}

json to_json(const Regime& r) {
  return {{"r", to_string(r.r)}, {"t", to_string(r.t)}, {"side_condition", r.side_condition_holds}};
}

json to_json(const SchemeAssignment& a) {
  return {{"user1", to_string(a.user1)}, {"user2", to_string(a.user2)}};
}

json to_json(const PowerAllocation& a) {
  return {{"alpha1", a.alpha1}, {"beta1", a.beta1}, {"alpha2", a.alpha2}, {"beta2", a.beta2},
          {"pw1", a.pw1},       {"pw2", a.pw2},     {"beta3", a.beta3}};
}

json to_json(const RatePoint& r) { return {{"r1", r.r1}, {"r2", r.r2}}; }

json to_json(const KktDiagnostics& d) {
  json j;
  for (std::size_t i = 0; i < d.lambda.size(); ++i) j["lambda" + std::to_string(i + 1)] = d.lambda[i];
  j["complementary_slackness_residual"] = d.complementary_slackness_residual;
  j["stationarity_residual"] = d.stationarity_residual;
  j["converged"] = d.converged;
  return j;
}

json to_json(const SolveResult& r) {
  json j;
  j["mu"] = r.mu;
  j["allocation"] = to_json(r.allocation);
  j["rates"] = to_json(r.rates);
  j["assignment"] = to_json(r.assignment);
  j["weighted_sum"] = r.weighted_sum;
  j["diagnostics"] = to_json(r.diagnostics);
  if (!r.alternates.empty()) {
    json alts = json::array();
    for (const SolveResult& a : r.alternates) alts.push_back(to_json(a));
    j["alternates"] = alts;
  }
  return j;
}

SolveResult solve_result_from_json(const json& j) {
  SolveResult r;
  r.mu = j.at("mu").get<double>();
  const json& a = j.at("allocation");
  r.allocation.alpha1 = a.at("alpha1").get<double>();
  r.allocation.beta1 = a.at("beta1").get<double>();
  r.allocation.alpha2 = a.at("alpha2").get<double>();
  r.allocation.beta2 = a.at("beta2").get<double>();
  r.allocation.pw1 = a.at("pw1").get<double>();
  r.allocation.pw2 = a.at("pw2").get<double>();
  r.allocation.beta3 = a.at("beta3").get<double>();
  r.rates = {j.at("rates").at("r1").get<double>(), j.at("rates").at("r2").get<double>()};
  r.assignment = assignment_from_json(j.at("assignment"));
  r.weighted_sum = j.at("weighted_sum").get<double>();
  const json& d = j.at("diagnostics");
  for (std::size_t i = 0; i < r.diagnostics.lambda.size(); ++i)
    r.diagnostics.lambda[i] = d.at("lambda" + std::to_string(i + 1)).get<double>();
  r.diagnostics.complementary_slackness_residual = d.at("complementary_slackness_residual").get<double>();
  r.diagnostics.stationarity_residual = d.at("stationarity_residual").get<double>();
  r.diagnostics.converged = d.at("converged").get<bool>();
  if (j.contains("alternates")) {
    for (const json& alt : j.at("alternates")) r.alternates.push_back(solve_result_from_json(alt));
  }
  return r;
}

void write_hull_csv(std::ostream& os, const RegionHull& hull) {
  os << "r1,r2\n";
  for (RatePoint v : hull.vertices) os << format_number(v.r1) << ',' << format_number(v.r2) << '\n';
}

json hull_to_json(const RegionHull& hull) {
  json verts = json::array();
  for (RatePoint v : hull.vertices) verts.push_back(json::array({v.r1, v.r2}));
  return {{"step", hull.step}, {"vertices", verts}};
}

void write_map_csv(std::ostream& os, const std::vector<MapCell>& cells) {
  os << "x,y,r_index,t_index,user1,user2\n";
  for (const MapCell& c : cells) {
    os << format_number(c.relay.x) << ',' << format_number(c.relay.y) << ',';
    if (c.skipped) {
      os << "skip,skip,skip,skip\n";
      continue;
    }
    os << row_index(c.regime.r) << ',' << column_index(c.regime.t) << ','
       << to_string(c.assignment.user1) << ',' << to_string(c.assignment.user2) << '\n';
  }
}

json map_to_json(const std::vector<MapCell>& cells) {
  json out = json::array();
  for (const MapCell& c : cells) {
    json j{{"x", c.relay.x}, {"y", c.relay.y}, {"skipped", c.skipped}};
    if (!c.skipped) {
      j["regime"] = to_json(c.regime);
      j["assignment"] = to_json(c.assignment);
      j["source"] = c.from_solver ? "solver" : "table";
    }
    out.push_back(j);
  }
  return out;
}

void write_profile_csv(std::ostream& os, const std::vector<PowerSample>& samples) {
  os << "x,y,beta3\n";
  for (const PowerSample& s : samples) {
    os << format_number(s.relay.x) << ',' << format_number(s.relay.y) << ','
       << format_number(s.relay_power) << '\n';
  }
}

json profile_to_json(const std::vector<PowerSample>& samples) {
  json out = json::array();
  for (const PowerSample& s : samples) {
    out.push_back({{"x", s.relay.x},
                   {"y", s.relay.y},
                   {"beta3", s.relay_power},
                   {"block_markov", s.block_markov},
                   {"source", s.from_closed_form ? "closed_form" : "solver"},
                   {"regime", to_json(s.regime)},
                   {"assignment", to_json(s.assignment)}});
  }
  return out;
}

}  // namespace twrc
