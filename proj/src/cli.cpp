#include "twrc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "twrc/errors.hpp"
#include "twrc/io.hpp"
#include "twrc/optimizer.hpp"
#include "twrc/oracle.hpp"
#include "twrc/regimes.hpp"

namespace twrc {

namespace {

struct GainsSource {
  std::string gains_file;
  std::string geometry_file;
  std::optional<double> g12, g21, g1r, gr1, g2r, gr2;
};

struct Settings {
  GainsSource source;
  double p = 1.0;
  double mu = 0.75;
  double step = 0.05;
  std::string restrict_name = "composite";
  std::string out_path;
  std::string format = "csv";
  int resolution = 50;
  int samples = 19;
  bool audit = false;
  MapBounds bounds;
  std::vector<double> from;
  std::vector<double> to;
};

void add_gain_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--gains", s.source.gains_file, "JSON file with g12,g21,g1r,gr1,g2r,gr2[,p]");
  cmd->add_option("--geometry", s.source.geometry_file, "JSON geometry file (gains via path loss)");
  cmd->add_option("--g12", s.source.g12);
  cmd->add_option("--g21", s.source.g21);
  cmd->add_option("--g1r", s.source.g1r);
  cmd->add_option("--gr1", s.source.gr1);
  cmd->add_option("--g2r", s.source.g2r);
  cmd->add_option("--gr2", s.source.gr2);
}

json read_json_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(field, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(field, std::string("malformed JSON: ") + e.what());
  }
}

Geometry load_geometry(const Settings& s) {
  if (s.source.geometry_file.empty()) return Geometry{};
  return geometry_from_json(read_json_file(s.source.geometry_file, "geometry"));
}

void require_weight(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
}

void require_power(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("p", "must be finite and nonnegative");
}

LinkGains load_gains(const Settings& s, const CLI::App* cmd) {
  const GainsSource& src = s.source;
  const std::pair<const char*, const std::optional<double>*> inline_fields[] = {
      {"g12", &src.g12}, {"g21", &src.g21}, {"g1r", &src.g1r},
      {"gr1", &src.gr1}, {"g2r", &src.g2r}, {"gr2", &src.gr2}};
  const bool any_inline = std::any_of(std::begin(inline_fields), std::end(inline_fields),
                                      [](const auto& f) { return f.second->has_value(); });
  const int sources = (src.gains_file.empty() ? 0 : 1) + (src.geometry_file.empty() ? 0 : 1) +
                      (any_inline ? 1 : 0);
  if (sources == 0) throw InvalidInput("gains", "give --gains, --geometry or all six inline gains");
  if (sources > 1) throw InvalidInput("gains", "give exactly one of --gains, --geometry, inline gains");

  require_power(s.p);
  if (any_inline) {
    LinkGains g;
    g.p = s.p;
    for (const auto& [name, value] : inline_fields) {
      if (!value->has_value()) throw InvalidInput(name, "missing (inline gains need all six)");
    }
    g.g12 = *src.g12;
    g.g21 = *src.g21;
    g.g1r = *src.g1r;
    g.gr1 = *src.gr1;
    g.g2r = *src.g2r;
    g.gr2 = *src.gr2;
    return validate_gains(g);
  }
  if (!src.gains_file.empty()) {
    LinkGains g = gains_from_json(read_json_file(src.gains_file, "gains"));
    if (cmd->count("--p") > 0) g.p = s.p;
    return validate_gains(g);
  }
  return gains_from_geometry(load_geometry(s), s.p);
}

// Writes to --out when given, else to the command's stream.
void emit(const Settings& s, std::ostream& out, const std::string& body) {
  if (s.out_path.empty()) {
    out << body;
    return;
  }
  std::ofstream f(s.out_path, std::ios::binary);
  if (!f) throw InvalidInput("out", "cannot write '" + s.out_path + "'");
  f << body;
}

void require_format(const Settings& s) {
  if (s.format != "csv" && s.format != "json") throw InvalidInput("format", "must be csv or json");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_classify(const Settings& s, const CLI::App* cmd, std::ostream& out) {
  require_weight(s.mu);
  const LinkGains g = load_gains(s, cmd);
  json j;
  j["mu"] = s.mu;
  j["regime"] = to_json(classify(g));
  bool table = false;
  if (s.mu != 0.5) {
    try {
      const TechniqueLookup lk = technique_lookup(g, s.mu);
      j["assignment"] = to_json(lk.assignment);
      table = true;
    } catch (const UnsupportedSideCondition&) {
    }
  } else {
    try {
      const TechniqueLookup lk = technique_lookup(g, s.mu);
      j["assignment"] = to_json(lk.assignment);
      if (lk.alternate) j["alternate"] = to_json(*lk.alternate);
      j["ambiguous"] = lk.ambiguous;
      table = true;
    } catch (const UnsupportedSideCondition&) {
    }
  }
  if (!table) j["assignment"] = to_json(solve(g, s.mu).assignment);
  j["source"] = table ? "table" : "solver";
  emit(s, out, dump(j));
  return kExitOk;
}

int cmd_region(const Settings& s, const CLI::App* cmd, std::ostream& out, std::ostream& err) {
  require_format(s);
  const LinkGains g = load_gains(s, cmd);
  const SchemeRestriction restriction = restriction_from_string(s.restrict_name);
  GridOptions opts;
  opts.max_evaluations = grid_cap_from_env();
  opts.audit = s.audit;
  const RegionHull hull = grid_region(g, s.step, restriction, opts);

  std::ostringstream body;
  if (s.format == "csv") {
    write_hull_csv(body, hull);
  } else {
    json j = hull_to_json(hull);
    j["restrict"] = to_string(restriction);
    body << dump(j);
  }
  emit(s, out, body.str());

  double best_sum = 0.0;
  for (RatePoint v : hull.vertices) best_sum = std::max(best_sum, v.r1 + v.r2);
  std::ostream& summary = s.out_path.empty() ? err : out;
  summary << "vertices=" << hull.vertices.size() << " max_sum_rate=" << format_number(best_sum) << '\n';
  return kExitOk;
}

int cmd_solve(const Settings& s, const CLI::App* cmd, std::ostream& out) {
  require_weight(s.mu);
  const LinkGains g = load_gains(s, cmd);
  SolveResult res = solve(g, s.mu);

  json extra;
  if (!res.alternates.empty()) {
    // Equal weighted sums at mu = 1/2: keep the larger sum rate.
    SolveResult alt = res.alternates.front();
    res.alternates.clear();
    const double sum_primary = res.rates.r1 + res.rates.r2;
    const double sum_alt = alt.rates.r1 + alt.rates.r2;
    if (sum_alt > sum_primary + 1e-12) std::swap(res, alt);
    extra["tie"] = true;
    extra["alternate"] = to_json(alt);
  }

  json j = to_json(res);
  for (auto& [k, v] : extra.items()) j[k] = v;
  j["gains"] = to_json(g);
  j["regime"] = to_json(classify(g));
  j["full_power_check"] = lemma1_check(g, res);
  j["relay_full_power"] = std::abs(res.allocation.relay_total() - g.p) <= 1e-8 * g.p;

  const LinkGains oriented = s.mu >= 0.5 ? g : swap_users(g);
  const Regime reg = classify(oriented);
  if (s.mu != 0.5 && reg.r == RRow::R2 && (reg.t == TCol::T3 || reg.t == TCol::T4)) {
    const double closed = lemma2_relay_power(oriented);
    j["closed_form_relay_power"] = {{"beta3", closed},
                   {"solver_beta3", res.allocation.beta3},
                   {"difference", res.allocation.beta3 - closed}};
  }
  emit(s, out, dump(j));
  return kExitOk;
}

int cmd_map(const Settings& s, std::ostream& out) {
  require_format(s);
  require_weight(s.mu);
  require_power(s.p);
  const Geometry geom = load_geometry(s);
  const std::vector<MapCell> cells = regime_map(geom, s.bounds, s.resolution, s.mu, s.p);
  std::ostringstream body;
  if (s.format == "csv") {
    write_map_csv(body, cells);
  } else {
    body << dump(map_to_json(cells));
  }
  emit(s, out, body.str());
  return kExitOk;
}

Point2 parse_point(const std::vector<double>& v, const char* field, Point2 fallback) {
  if (v.empty()) return fallback;
  if (v.size() != 2 || !std::isfinite(v[0]) || !std::isfinite(v[1]))
    throw InvalidInput(field, "needs two finite coordinates");
  return {v[0], v[1]};
}

bool inside(const MapBounds& b, Point2 p) {
  return p.x >= b.xmin && p.x <= b.xmax && p.y >= b.ymin && p.y <= b.ymax;
}

int cmd_relay_power(const Settings& s, std::ostream& out, std::ostream& err) {
  require_format(s);
  require_weight(s.mu);
  require_power(s.p);
  const Geometry geom = load_geometry(s);
  Segment seg{parse_point(s.from, "from", geom.user1), parse_point(s.to, "to", geom.user2)};
  if (!inside(s.bounds, seg.from) || !inside(s.bounds, seg.to))
    throw InvalidInput("segment", "endpoints must lie within the map bounds");
  const std::vector<PowerSample> samples = relay_power_profile(geom, seg, s.samples, s.p, s.mu);

  std::ostringstream body;
  if (s.format == "csv") {
    write_profile_csv(body, samples);
  } else {
    body << dump(profile_to_json(samples));
  }
  emit(s, out, body.str());

  double lo = s.p;
  double hi = 0.0;
  for (const PowerSample& ps : samples) {
    lo = std::min(lo, ps.relay_power);
    hi = std::max(hi, ps.relay_power);
  }
  const double scale = s.p > 0.0 ? s.p : 1.0;
  std::ostream& summary = s.out_path.empty() ? err : out;
  summary << "samples=" << samples.size() << " min_fraction=" << format_number(lo / scale)
          << " max_fraction=" << format_number(hi / scale) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-way relay channel rate regions, power allocation and regime maps", "twrc"};
  app.require_subcommand(1, 1);
  Settings s;

  auto* classify_cmd = app.add_subcommand("classify", "Link-state regime and technique lookup");
  add_gain_options(classify_cmd, s);
  classify_cmd->add_option("--p", s.p, "Power budget");
  classify_cmd->add_option("--mu", s.mu, "Weight on user 1's rate");
  classify_cmd->add_option("--out", s.out_path);

  auto* region_cmd = app.add_subcommand("region", "Grid-search rate region hull");
  add_gain_options(region_cmd, s);
  region_cmd->add_option("--p", s.p, "Power budget");
  region_cmd->add_option("--step", s.step, "Grid step");
  region_cmd->add_option("--restrict", s.restrict_name, "composite, bm, ind, direct or timeshare");
  region_cmd->add_flag("--audit", s.audit, "Vary all seven allocation parameters");
  region_cmd->add_option("--out", s.out_path);
  region_cmd->add_option("--format", s.format, "csv or json");

  auto* solve_cmd = app.add_subcommand("solve", "Optimal power allocation for a weight");
  add_gain_options(solve_cmd, s);
  solve_cmd->add_option("--p", s.p, "Power budget");
  solve_cmd->add_option("--mu", s.mu, "Weight on user 1's rate");
  solve_cmd->add_option("--out", s.out_path);

  auto add_area = [&s](CLI::App* cmd) {
    cmd->add_option("--geometry", s.source.geometry_file, "JSON geometry file");
    cmd->add_option("--p", s.p, "Power budget");
    cmd->add_option("--mu", s.mu, "Weight on user 1's rate");
    cmd->add_option("--xmin", s.bounds.xmin);
    cmd->add_option("--xmax", s.bounds.xmax);
    cmd->add_option("--ymin", s.bounds.ymin);
    cmd->add_option("--ymax", s.bounds.ymax);
    cmd->add_option("--out", s.out_path);
    cmd->add_option("--format", s.format, "csv or json");
  };
  auto* map_cmd = app.add_subcommand("map", "Technique map over relay positions");
  add_area(map_cmd);
  map_cmd->add_option("--resolution", s.resolution, "Grid points per axis");

  auto* power_cmd = app.add_subcommand("relay-power", "Relay power along a segment");
  add_area(power_cmd);
  power_cmd->add_option("--samples", s.samples, "Interior sample count");
  power_cmd->add_option("--from", s.from, "Segment start x y")->expected(2);
  power_cmd->add_option("--to", s.to, "Segment end x y")->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(s, classify_cmd, out);
    if (region_cmd->parsed()) return cmd_region(s, region_cmd, out, err);
    if (solve_cmd->parsed()) return cmd_solve(s, solve_cmd, out);
    if (map_cmd->parsed()) return cmd_map(s, out);
    if (power_cmd->parsed()) return cmd_relay_power(s, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const GridCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitGridCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace twrc
