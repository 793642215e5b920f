#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twrc/channel.hpp"
#include "twrc/rate_region.hpp"
#include "twrc/regimes.hpp"

namespace twrc {

enum class SchemeRestriction { Composite, BlockMarkovOnly, IndependentOnly, DirectOnly, TimeShare };

std::string_view to_string(SchemeRestriction s);
/// Accepts the CLI spellings: composite, bm, ind, direct, timeshare.
SchemeRestriction restriction_from_string(std::string_view s);

/// Upper-right boundary of a convex, downward-closed rate region. Vertices
/// run r1 ascending / r2 descending and include both axis intercepts.
struct RegionHull {
  std::vector<RatePoint> vertices;
  // Allocation whose pentagon contains each vertex (grid hulls only).
  std::vector<PowerAllocation> sources;
  double step = 0.0;
};

inline constexpr std::uint64_t kDefaultGridCap = 100'000'000;

struct GridOptions {
  std::uint64_t max_evaluations = kDefaultGridCap;
  // Vary all seven allocation parameters instead of the full-power
  // reduction. Affects the Composite enumeration only.
  bool audit = false;
};

/// Reads TWRC_GRID_CAP, falling back to kDefaultGridCap.
std::uint64_t grid_cap_from_env();

/// Power levels 0, h, 2h, ... plus P itself when h does not divide P.
std::vector<double> grid_levels(double p, double step);

RegionHull convex_hull(std::vector<RatePoint> points);

/// Enumerates the allocation grid, evaluates both pentagon corners per
/// allocation and returns the convex hull. Throws GridCapExceeded.
RegionHull grid_region(const LinkGains& g, double step, SchemeRestriction restriction,
                       const GridOptions& opts = {});

/// Largest amount by which a point lies outside the hull (<= 0 inside).
double excess_outside(const RegionHull& hull, RatePoint p);

/// max over inner vertices of excess_outside(outer, v).
double hull_excess(const RegionHull& outer, const RegionHull& inner);

bool hull_contains(const RegionHull& outer, const RegionHull& inner, double slack);

struct GridBest {
  PowerAllocation allocation;
  RatePoint rates;
  double weighted_sum = 0.0;
};

/// Best weighted sum on the reduced composite grid, one entry per weight.
std::vector<GridBest> grid_best(const LinkGains& g, double step, std::span<const double> mus,
                                const GridOptions& opts = {});

/// Reduced-grid search on a small box of half-width radius*step around a
/// given allocation.
GridBest local_grid_best(const LinkGains& g, double mu, const PowerAllocation& center,
                         double step, int radius);

struct MapBounds {
  double xmin = -20.0;
  double xmax = 40.0;
  double ymin = -30.0;
  double ymax = 30.0;
};

struct MapCell {
  Point2 relay;
  bool skipped = false;
  Regime regime;
  SchemeAssignment assignment;
  bool from_solver = false;
};

/// resolution x resolution relay positions spanning bounds (inclusive).
std::vector<MapCell> regime_map(const Geometry& geom_template, const MapBounds& bounds,
                                int resolution, double mu, double p = 1.0);

struct PowerSample {
  Point2 relay;
  double relay_power = 0.0;
  bool block_markov = false;
  bool from_closed_form = false;
  Regime regime;
  SchemeAssignment assignment;
};

struct Segment {
  Point2 from;
  Point2 to;
};

/// samples evenly spaced interior points of the segment, at (i+1)/(n+1).
std::vector<PowerSample> relay_power_profile(const Geometry& geom_template, const Segment& segment,
                                             int samples, double p = 1.0, double mu = 0.75);

/// Reports the power a relay needs at a single placement.
PowerSample relay_power_at(const LinkGains& g, Point2 where, double mu);

}  // namespace twrc
