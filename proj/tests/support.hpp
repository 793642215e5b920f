#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <cmath>
#include <random>

#include "twrc/channel.hpp"
#include "twrc/regimes.hpp"

namespace twrc::fixtures {

// Both relay links strong: cell (R3,T5).
inline LinkGains strong_relay_gains() {
  LinkGains g;
  g.g21 = 0.25;
  g.gr1 = 1.0;
  g.g12 = 0.25;
  g.gr2 = 1.0;
  g.g1r = 0.5;
  g.g2r = 0.7;
  g.p = 1.0;
  return g;
}

// (R2,T5) instance with the side condition holding.
inline LinkGains r2t5_gains() {
  LinkGains g;
  g.g21 = 0.2;
  g.g2r = 0.5;
  g.gr1 = std::sqrt(0.2);
  g.g12 = 0.2;
  g.g1r = 0.3;
  g.gr2 = 0.5;
  return g;
}

// (R2,T3) instance used for the relay-power formula.
inline LinkGains r2t3_gains() {
  LinkGains g;
  g.g21 = 0.2;
  g.g2r = 0.5;
  g.gr1 = 0.3;
  g.g12 = 0.2;
  g.g1r = 0.5;
  g.gr2 = 0.4;
  return g;
}

/// Draws gains strictly inside a regime cell, at least `margin` (fraction of
/// the interval width) away from its edges, with the side condition holding.
class CellSampler {
 public:
  explicit CellSampler(unsigned seed, double margin = 0.01) : rng_(seed), margin_(margin) {}

  LinkGains draw(RRow row, TCol col, double p = 1.0) {
    LinkGains g;
    g.p = p;
    g.g21 = uniform(0.1, 0.6);
    g.g2r = uniform(0.2, 0.9);
    const double d21 = g.g21 * g.g21;
    const double relay_only = g.g2r * g.g2r;
    double r1sq = 0.0;
    switch (row) {
      case RRow::R1: r1sq = inside(0.0, d21); break;
      case RRow::R2: r1sq = inside(d21, d21 + relay_only); break;
      case RRow::R3: r1sq = inside(d21 + relay_only, 2.5 * (d21 + relay_only)); break;
    }
    g.gr1 = std::sqrt(r1sq);

    g.g12 = uniform(0.05, 0.5);
    const double d12 = g.g12 * g.g12;
    const double boost = 1.0 + r1sq * p;
    // Side condition: d12 * boost <= d12 + g1r^2, kept with a margin.
    const double g1r_sq_min = d12 * r1sq * p;
    g.g1r = std::sqrt(g1r_sq_min * uniform(1.2, 3.0) + uniform(0.01, 0.3));
    const double top = d12 + g.g1r * g.g1r;
    double r2sq = 0.0;
    switch (col) {
      case TCol::T1: r2sq = inside(0.0, d12); break;
      case TCol::T2: r2sq = inside(d12, d12 * boost); break;
      case TCol::T3: r2sq = inside(d12 * boost, top); break;
      case TCol::T4: r2sq = inside(top, boost * top); break;
      case TCol::T5: r2sq = inside(boost * top, 2.5 * boost * top); break;
    }
    g.gr2 = std::sqrt(r2sq);
    return g;
  }

  LinkGains draw_any(double lo = 0.0, double hi = 2.0) {
    LinkGains g;
    g.g12 = uniform(lo, hi);
    g.g21 = uniform(lo, hi);
    g.g1r = uniform(lo, hi);
    g.gr1 = uniform(lo, hi);
    g.g2r = uniform(lo, hi);
    g.gr2 = uniform(lo, hi);
    return g;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  double inside(double lo, double hi) {
    const double u = uniform(margin_, 1.0 - margin_);
    return lo + u * (hi - lo);
  }

  std::mt19937_64 rng_;
  double margin_;
};

}  // namespace twrc::fixtures
