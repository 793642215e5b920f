#include "twrc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "twrc/errors.hpp"
#include "twrc/optimizer.hpp"

namespace twrc {

namespace {

double sq(double v) { return v * v; }

struct Candidate {
  RatePoint point;
  PowerAllocation source;
};

double cross(RatePoint o, RatePoint a, RatePoint b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

// Upper-right staircase of a downward-closed region generated by the points.
std::vector<Candidate> staircase(std::vector<Candidate> pts) {
  if (pts.empty()) return {Candidate{}};
  std::sort(pts.begin(), pts.end(), [](const Candidate& a, const Candidate& b) {
    if (a.point.r1 != b.point.r1) return a.point.r1 < b.point.r1;
    return a.point.r2 > b.point.r2;
  });
  // Axis intercepts: the region is downward closed.
  auto top = *std::max_element(pts.begin(), pts.end(), [](const Candidate& a, const Candidate& b) {
    return a.point.r2 < b.point.r2 || (a.point.r2 == b.point.r2 && a.point.r1 > b.point.r1);
  });
  auto right = pts.back();
  Candidate left_axis{{0.0, top.point.r2}, top.source};
  Candidate bottom_axis{{right.point.r1, 0.0}, right.source};

  std::vector<Candidate> chain;
  auto push = [&chain](const Candidate& c) {
    while (chain.size() >= 2 && cross(chain[chain.size() - 2].point, chain.back().point, c.point) >= 0.0)
      chain.pop_back();
    chain.push_back(c);
  };
  push(left_axis);
  for (const Candidate& c : pts) {
    if (c.point == chain.back().point) continue;
    push(c);
  }
  if (!(chain.back().point == bottom_axis.point)) push(bottom_axis);

  // Drop duplicates (degenerate single-point regions).
  std::vector<Candidate> out;
  for (const Candidate& c : chain) {
    if (out.empty() || !(out.back().point == c.point)) out.push_back(c);
  }
  return out;
}

class HullBuilder {
 public:
  void add(RatePoint p, const PowerAllocation& a) {
    buffer_.push_back({p, a});
    if (buffer_.size() >= kFlush) flush();
  }

  RegionHull finish(double step) {
    flush();
    RegionHull hull;
    hull.step = step;
    for (const Candidate& c : hull_) {
      hull.vertices.push_back(c.point);
      hull.sources.push_back(c.source);
    }
    return hull;
  }

 private:
  static constexpr std::size_t kFlush = 1 << 15;

  void flush() {
    if (buffer_.empty() && !hull_.empty()) return;
    buffer_.insert(buffer_.end(), hull_.begin(), hull_.end());
    hull_ = staircase(std::move(buffer_));
    buffer_.clear();
  }

  std::vector<Candidate> buffer_;
  std::vector<Candidate> hull_;
};

void require_step(double step, double p) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("step", "must be positive");
  if (p > 0.0 && step > p) throw InvalidInput("step", "must not exceed P");
}

double level_tol(double p) { return 1e-12 * std::max(1.0, p); }

// Index pairs (i, j) with levels[i] + levels[j] <= P.
std::vector<std::pair<std::size_t, std::size_t>> simplex_pairs(const std::vector<double>& lv,
                                                               double p) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < lv.size(); ++i)
    for (std::size_t j = 0; j < lv.size(); ++j)
      if (lv[i] + lv[j] <= p + level_tol(p)) out.emplace_back(i, j);
  return out;
}

std::uint64_t checked_count(std::uint64_t count, std::uint64_t cap) {
  if (count > cap) {
    throw GridCapExceeded("grid needs " + std::to_string(count) + " evaluations; cap is " +
                          std::to_string(cap));
  }
  return count;
}

// Full-power composite grid: alpha1, alpha2 and the relay split (pw1, pw2)
// with beta3 = P - pw1 - pw2. Visitor receives constraints and a builder.
template <class Visit>
void enumerate_reduced(const LinkGains& g, const std::vector<double>& lv, Visit&& visit) {
  const double p = g.p;
  const auto pairs = simplex_pairs(lv, p);
  const std::size_t n = lv.size();

  // j2 depends on (alpha1, pw1, pw2), j4 on (alpha2, pw1, pw2).
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> j2(n * pairs.size(), nan);
  std::vector<double> j4(n * pairs.size(), nan);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double w1 = lv[pairs[k].first];
      const double w2 = lv[pairs[k].second];
      const double b3 = std::max(0.0, p - w1 - w2);
      if (w1 == 0.0 || lv[a] > 0.0) {
        j2[a * pairs.size() + k] = capacity(sq(g.g21) * p + 2.0 * g.g21 * g.g2r * std::sqrt(w1 * lv[a]) +
                                            sq(g.g2r) * (w1 + b3));
      }
      if (w2 == 0.0 || lv[a] > 0.0) {
        j4[a * pairs.size() + k] = capacity(sq(g.g12) * p + 2.0 * g.g12 * g.g1r * std::sqrt(w2 * lv[a]) +
                                            sq(g.g1r) * (w2 + b3));
      }
    }
  }
  std::vector<double> j1(n), j3(n);
  for (std::size_t a = 0; a < n; ++a) {
    j1[a] = capacity(sq(g.gr1) * (p - lv[a]));
    j3[a] = capacity(sq(g.gr2) * (p - lv[a]));
  }

  for (std::size_t a1 = 0; a1 < n; ++a1) {
    for (std::size_t a2 = 0; a2 < n; ++a2) {
      const double j5 = capacity(sq(g.gr1) * (p - lv[a1]) + sq(g.gr2) * (p - lv[a2]));
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double c2 = j2[a1 * pairs.size() + k];
        const double c4 = j4[a2 * pairs.size() + k];
        if (std::isnan(c2) || std::isnan(c4)) continue;
        RateConstraints c{j1[a1], c2, j3[a2], c4, j5};
        auto make = [&, a1, a2, k]() {
          PowerAllocation alloc;
          alloc.alpha1 = lv[a1];
          alloc.beta1 = p - lv[a1];
          alloc.alpha2 = lv[a2];
          alloc.beta2 = p - lv[a2];
          alloc.pw1 = lv[pairs[k].first];
          alloc.pw2 = lv[pairs[k].second];
          alloc.beta3 = std::max(0.0, p - alloc.pw1 - alloc.pw2);
          return alloc;
        };
        visit(c, make);
      }
    }
  }
}

std::uint64_t reduced_count(const std::vector<double>& lv, double p) {
  return static_cast<std::uint64_t>(lv.size()) * lv.size() * simplex_pairs(lv, p).size();
}

// All seven parameters on the grid, subject to the three budgets.
template <class Visit>
void enumerate_audit(const LinkGains& g, const std::vector<double>& lv, Visit&& visit) {
  const double p = g.p;
  const auto pairs = simplex_pairs(lv, p);
  for (auto [i1, k1] : pairs) {
    for (auto [i2, k2] : pairs) {
      for (auto [w1, w2] : pairs) {
        for (double b3 : lv) {
          PowerAllocation a;
          a.alpha1 = lv[i1];
          a.beta1 = lv[k1];
          a.alpha2 = lv[i2];
          a.beta2 = lv[k2];
          a.pw1 = lv[w1];
          a.pw2 = lv[w2];
          a.beta3 = b3;
          if (a.relay_total() > p + level_tol(p)) break;
          if ((a.pw1 > 0.0 && a.alpha1 == 0.0) || (a.pw2 > 0.0 && a.alpha2 == 0.0)) continue;
          visit(compute_constraints(g, a), [a]() { return a; });
        }
      }
    }
  }
}

std::uint64_t audit_count(const std::vector<double>& lv, double p) {
  const std::uint64_t users = simplex_pairs(lv, p).size();
  std::uint64_t relay = 0;
  for (auto [i, j] : simplex_pairs(lv, p))
    for (double b3 : lv)
      if (lv[i] + lv[j] + b3 <= p + level_tol(p)) ++relay;
  return users * users * relay;
}

void add_corners(HullBuilder& hb, const RateConstraints& c, const PowerAllocation& a) {
  hb.add(pentagon_corner(c, Corner::Lower), a);
  hb.add(pentagon_corner(c, Corner::Upper), a);
}

// One user block-Markov only (not decoding the bin), the other independent only.
RegionHull mixed_region(const LinkGains& g, const std::vector<double>& lv, bool user1_block_markov,
                        double step) {
  const double p = g.p;
  HullBuilder hb;
  for (double alpha : lv) {
    for (double pw : lv) {
      if (pw > 0.0 && alpha == 0.0) continue;
      PowerAllocation a;
      a.beta3 = std::max(0.0, p - pw);
      if (user1_block_markov) {
        a.alpha1 = alpha;
        a.pw1 = pw;
      } else {
        a.alpha2 = alpha;
        a.pw2 = pw;
      }
      a.beta1 = p - a.alpha1;
      a.beta2 = p - a.alpha2;
      BinUsage usage{!user1_block_markov, user1_block_markov};
      add_corners(hb, compute_constraints(g, a, usage), a);
    }
  }
  return hb.finish(step);
}

}  // namespace

std::string_view to_string(SchemeRestriction s) {
  switch (s) {
    case SchemeRestriction::Composite: return "composite";
    case SchemeRestriction::BlockMarkovOnly: return "bm";
    case SchemeRestriction::IndependentOnly: return "ind";
    case SchemeRestriction::DirectOnly: return "direct";
    case SchemeRestriction::TimeShare: return "timeshare";
  }
  return "composite";
}

SchemeRestriction restriction_from_string(std::string_view s) {
  for (auto r : {SchemeRestriction::Composite, SchemeRestriction::BlockMarkovOnly,
                 SchemeRestriction::IndependentOnly, SchemeRestriction::DirectOnly,
                 SchemeRestriction::TimeShare}) {
    if (to_string(r) == s) return r;
  }
  throw InvalidInput("restrict", "unknown restriction '" + std::string(s) +
                                     "' (expected composite, bm, ind, direct or timeshare)");
}

std::uint64_t grid_cap_from_env() {
  const char* raw = std::getenv("TWRC_GRID_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultGridCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') throw InvalidInput("TWRC_GRID_CAP", "must be a positive integer");
  return v;
}

std::vector<double> grid_levels(double p, double step) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("p", "must be finite and nonnegative");
  require_step(step, p);
  std::vector<double> out{0.0};
  if (p == 0.0) return out;
  const auto cells = static_cast<std::size_t>(std::floor(p / step + 1e-9));
  for (std::size_t i = 1; i <= cells; ++i) out.push_back(std::min(p, static_cast<double>(i) * step));
  if (p - out.back() > level_tol(p)) {
    out.push_back(p);
  } else {
    out.back() = p;
  }
  return out;
}

RegionHull convex_hull(std::vector<RatePoint> points) {
  std::vector<Candidate> cands;
  cands.reserve(points.size());
  for (RatePoint r : points) cands.push_back({r, {}});
  RegionHull hull;
  for (const Candidate& c : staircase(std::move(cands))) hull.vertices.push_back(c.point);
  return hull;
}

RegionHull grid_region(const LinkGains& g, double step, SchemeRestriction restriction,
                       const GridOptions& opts) {
  validate_gains(g);
  const double p = g.p;
  const std::vector<double> lv = grid_levels(p, step);
  const std::uint64_t cap = opts.max_evaluations;

  switch (restriction) {
    case SchemeRestriction::Composite: {
      HullBuilder hb;
      auto visit = [&hb](const RateConstraints& c, auto&& make) {
        const PowerAllocation a = make();
        add_corners(hb, c, a);
      };
      if (opts.audit) {
        checked_count(audit_count(lv, p), cap);
        enumerate_audit(g, lv, visit);
      } else {
        checked_count(reduced_count(lv, p), cap);
        enumerate_reduced(g, lv, visit);
      }
      return hb.finish(step);
    }
    case SchemeRestriction::BlockMarkovOnly: {
      checked_count(static_cast<std::uint64_t>(lv.size()) * lv.size() * lv.size(), cap);
      HullBuilder hb;
      for (double a1 : lv) {
        for (double a2 : lv) {
          for (double w1 : lv) {
            PowerAllocation a;
            a.alpha1 = a1;
            a.beta1 = p - a1;
            a.alpha2 = a2;
            a.beta2 = p - a2;
            a.pw1 = w1;
            a.pw2 = std::max(0.0, p - w1);
            a.beta3 = 0.0;
            if ((a.pw1 > 0.0 && a1 == 0.0) || (a.pw2 > 0.0 && a2 == 0.0)) continue;
            add_corners(hb, compute_constraints(g, a), a);
          }
        }
      }
      return hb.finish(step);
    }
    case SchemeRestriction::IndependentOnly: {
      checked_count(1, cap);
      HullBuilder hb;
      PowerAllocation a;
      a.beta1 = p;
      a.beta2 = p;
      a.beta3 = p;
      add_corners(hb, compute_constraints(g, a), a);
      return hb.finish(step);
    }
    case SchemeRestriction::DirectOnly: {
      checked_count(1, cap);
      HullBuilder hb;
      PowerAllocation a;
      a.beta1 = p;
      a.beta2 = p;
      hb.add({capacity(sq(g.g21) * p), capacity(sq(g.g12) * p)}, a);
      return hb.finish(step);
    }
    case SchemeRestriction::TimeShare: {
      checked_count(2 * static_cast<std::uint64_t>(lv.size()) * lv.size(), cap);
      RegionHull first = mixed_region(g, lv, true, step);
      RegionHull second = mixed_region(g, lv, false, step);
      HullBuilder hb;
      for (std::size_t i = 0; i < first.vertices.size(); ++i) hb.add(first.vertices[i], first.sources[i]);
      for (std::size_t i = 0; i < second.vertices.size(); ++i) hb.add(second.vertices[i], second.sources[i]);
      return hb.finish(step);
    }
  }
  throw InvalidInput("restrict", "unknown restriction");
}

double excess_outside(const RegionHull& hull, RatePoint p) {
  if (hull.vertices.empty()) return std::max(p.r1, p.r2);
  double top = 0.0;
  double right = 0.0;
  for (RatePoint v : hull.vertices) {
    top = std::max(top, v.r2);
    right = std::max(right, v.r1);
  }
  double excess = std::max(p.r1 - right, p.r2 - top);
  for (std::size_t i = 0; i + 1 < hull.vertices.size(); ++i) {
    const RatePoint a = hull.vertices[i];
    const RatePoint b = hull.vertices[i + 1];
    const double nx = a.r2 - b.r2;
    const double ny = b.r1 - a.r1;
    const double len = std::hypot(nx, ny);
    if (len == 0.0) continue;
    excess = std::max(excess, (nx * (p.r1 - a.r1) + ny * (p.r2 - a.r2)) / len);
  }
  return excess;
}

double hull_excess(const RegionHull& outer, const RegionHull& inner) {
  double worst = -std::numeric_limits<double>::infinity();
  for (RatePoint v : inner.vertices) worst = std::max(worst, excess_outside(outer, v));
  return inner.vertices.empty() ? 0.0 : worst;
}

bool hull_contains(const RegionHull& outer, const RegionHull& inner, double slack) {
  return hull_excess(outer, inner) <= slack + 1e-12;
}

std::vector<GridBest> grid_best(const LinkGains& g, double step, std::span<const double> mus,
                                const GridOptions& opts) {
  validate_gains(g);
  for (double mu : mus)
    if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
  const std::vector<double> lv = grid_levels(g.p, step);
  std::vector<GridBest> best(mus.size());
  for (GridBest& b : best) b.weighted_sum = -1.0;

  auto visit = [&](const RateConstraints& c, auto&& make) {
    for (std::size_t i = 0; i < mus.size(); ++i) {
      const RatePoint r = best_weighted_point(c, mus[i]);
      const double v = weighted_sum(r, mus[i]);
      if (v > best[i].weighted_sum) {
        best[i].weighted_sum = v;
        best[i].rates = r;
        best[i].allocation = make();
      }
    }
  };
  if (opts.audit) {
    checked_count(audit_count(lv, g.p), opts.max_evaluations);
    enumerate_audit(g, lv, visit);
  } else {
    checked_count(reduced_count(lv, g.p), opts.max_evaluations);
    enumerate_reduced(g, lv, visit);
  }
  return best;
}

GridBest local_grid_best(const LinkGains& g, double mu, const PowerAllocation& center, double step,
                         int radius) {
  validate_gains(g);
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
  require_step(step, g.p);
  if (radius < 0) throw InvalidInput("radius", "must be nonnegative");
  const double p = g.p;

  auto axis = [&](double c) {
    std::vector<double> out;
    for (int i = -radius; i <= radius; ++i) {
      const double v = std::clamp(c + i * step, 0.0, p);
      if (out.empty() || out.back() != v) out.push_back(v);
    }
    return out;
  };
  const auto a1s = axis(center.alpha1);
  const auto a2s = axis(center.alpha2);
  const auto w1s = axis(center.pw1);
  const auto w2s = axis(center.pw2);

  GridBest best;
  best.weighted_sum = -1.0;
  for (double a1 : a1s) {
    for (double a2 : a2s) {
      for (double w1 : w1s) {
        for (double w2 : w2s) {
          if (w1 + w2 > p + level_tol(p)) continue;
          if ((w1 > 0.0 && a1 == 0.0) || (w2 > 0.0 && a2 == 0.0)) continue;
          PowerAllocation a;
          a.alpha1 = a1;
          a.beta1 = p - a1;
          a.alpha2 = a2;
          a.beta2 = p - a2;
          a.pw1 = w1;
          a.pw2 = w2;
          a.beta3 = std::max(0.0, p - w1 - w2);
          const RatePoint r = best_weighted_point(compute_constraints(g, a), mu);
          const double v = weighted_sum(r, mu);
          if (v > best.weighted_sum) best = {a, r, v};
        }
      }
    }
  }
  return best;
}

std::vector<MapCell> regime_map(const Geometry& geom_template, const MapBounds& bounds,
                                int resolution, double mu, double p) {
  if (resolution < 2) throw InvalidInput("resolution", "must be at least 2");
  if (!(bounds.xmin < bounds.xmax)) throw InvalidInput("bounds", "xmin must be below xmax");
  if (!(bounds.ymin < bounds.ymax)) throw InvalidInput("bounds", "ymin must be below ymax");
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
  if (geom_template.user1 == geom_template.user2) throw CoincidentNodes("user1-user2");

  std::vector<MapCell> cells;
  cells.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  const double dx = (bounds.xmax - bounds.xmin) / (resolution - 1);
  const double dy = (bounds.ymax - bounds.ymin) / (resolution - 1);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      MapCell cell;
      cell.relay = {bounds.xmin + i * dx, bounds.ymin + j * dy};
      Geometry geom = geom_template;
      geom.relay = cell.relay;
      LinkGains g;
      try {
        g = gains_from_geometry(geom, p);
      } catch (const CoincidentNodes&) {
        cell.skipped = true;
        cells.push_back(cell);
        continue;
      }
      cell.regime = classify(g);
      bool use_solver = mu == 0.5;
      if (!use_solver) {
        try {
          cell.assignment = technique_lookup(g, mu).assignment;
        } catch (const UnsupportedSideCondition&) {
          use_solver = true;
        }
      }
      if (use_solver) {
        cell.assignment = solve(g, mu).assignment;
        cell.from_solver = true;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

PowerSample relay_power_at(const LinkGains& g, Point2 where, double mu) {
  validate_gains(g);
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
  PowerSample s;
  s.relay = where;
  s.regime = classify(g);

  // The closed form is stated for mu > 1/2; mirror it through the user swap.
  const LinkGains oriented = mu >= 0.5 ? g : swap_users(g);
  const Regime reg = classify(oriented);
  const bool closed_form_cell = mu != 0.5 && reg.side_condition_holds && reg.r == RRow::R2 &&
                           (reg.t == TCol::T3 || reg.t == TCol::T4);
  if (closed_form_cell) {
    s.relay_power = std::clamp(lemma2_relay_power(oriented), 0.0, g.p);
    s.from_closed_form = true;
    s.assignment = technique_lookup(g, mu).assignment;
    s.block_markov = uses_block_markov(s.assignment.user1) || uses_block_markov(s.assignment.user2);
    return s;
  }
  const SolveResult res = solve(g, mu);
  s.assignment = res.assignment;
  s.block_markov = uses_block_markov(s.assignment.user1) || uses_block_markov(s.assignment.user2);
  s.relay_power = s.block_markov ? g.p : res.allocation.beta3;
  return s;
}

std::vector<PowerSample> relay_power_profile(const Geometry& geom_template, const Segment& segment,
                                             int samples, double p, double mu) {
  if (samples < 1) throw InvalidInput("samples", "must be at least 1");
  for (double v : {segment.from.x, segment.from.y, segment.to.x, segment.to.y})
    if (!std::isfinite(v)) throw InvalidInput("segment", "endpoints must be finite");
  std::vector<PowerSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i + 1) / (samples + 1);
    Geometry geom = geom_template;
    geom.relay = {segment.from.x + f * (segment.to.x - segment.from.x),
                  segment.from.y + f * (segment.to.y - segment.from.y)};
    out.push_back(relay_power_at(gains_from_geometry(geom, p), geom.relay, mu));
  }
  return out;
}

}  // namespace twrc
