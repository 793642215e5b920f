#pragma once

#include <string>

namespace twrc {

/// Link amplitudes g_ij (from node j to node i) plus the common power budget.
///
/// Amplitudes, not powers: rate formulas use the squared values. The same
/// budget p applies to both users and the relay.
struct LinkGains {
  double g12 = 0.0;
  double g21 = 0.0;
  double g1r = 0.0;
  double gr1 = 0.0;
  double g2r = 0.0;
  double gr2 = 0.0;
  double p = 1.0;

  friend bool operator==(const LinkGains&, const LinkGains&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Planar node placement with FDD path-loss exponents.
///
/// gamma1 governs g_r1, g_2r and g_21; gamma2 governs g_1r, g_r2 and g_12.
struct Geometry {
  Point2 user1{0.0, 0.0};
  Point2 user2{20.0, 0.0};
  Point2 relay{10.0, 0.0};
  double gamma1 = 2.3;
  double gamma2 = 3.6;
};

/// Throws InvalidInput naming the first negative (or non-finite) field.
LinkGains validate_gains(const LinkGains& g);

/// g = 1 / d^(gamma/2) per link. Throws CoincidentNodes naming the pair.
LinkGains gains_from_geometry(const Geometry& geom, double p);

/// Exchange the roles of the two users: g12<->g21, g1r<->g2r, gr1<->gr2.
LinkGains swap_users(const LinkGains& g);

double distance(Point2 a, Point2 b);

}  // namespace twrc
