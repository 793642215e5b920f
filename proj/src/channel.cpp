#include "twrc/channel.hpp"

#include <cmath>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

void require_nonnegative(double v, const char* field) {
  if (!std::isfinite(v)) throw InvalidInput(field, "must be finite");
  if (v < 0.0) throw InvalidInput(field, "must be nonnegative");
}

void require_finite(Point2 p, const char* field) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput(field, "position must be finite");
}

double path_gain(Point2 a, Point2 b, double gamma, const char* pair) {
  double d = distance(a, b);
  if (d == 0.0) throw CoincidentNodes(pair);
  return std::pow(d, -gamma / 2.0);
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

LinkGains validate_gains(const LinkGains& g) {
  require_nonnegative(g.g12, "g12");
  require_nonnegative(g.g21, "g21");
  require_nonnegative(g.g1r, "g1r");
  require_nonnegative(g.gr1, "gr1");
  require_nonnegative(g.g2r, "g2r");
  require_nonnegative(g.gr2, "gr2");
  require_nonnegative(g.p, "p");
  return g;
}

LinkGains gains_from_geometry(const Geometry& geom, double p) {
  require_finite(geom.user1, "user1");
  require_finite(geom.user2, "user2");
  require_finite(geom.relay, "relay");
  if (!(geom.gamma1 > 0.0) || !std::isfinite(geom.gamma1)) throw InvalidInput("gamma1", "must be positive");
  if (!(geom.gamma2 > 0.0) || !std::isfinite(geom.gamma2)) throw InvalidInput("gamma2", "must be positive");
  require_nonnegative(p, "p");

  LinkGains g;
  g.p = p;
  // FDD: one exponent per duplex direction.
  g.gr1 = path_gain(geom.relay, geom.user1, geom.gamma1, "user1-relay");
  g.g2r = path_gain(geom.user2, geom.relay, geom.gamma1, "user2-relay");
  g.g21 = path_gain(geom.user2, geom.user1, geom.gamma1, "user1-user2");
  g.g1r = path_gain(geom.user1, geom.relay, geom.gamma2, "user1-relay");
  g.gr2 = path_gain(geom.relay, geom.user2, geom.gamma2, "user2-relay");
  g.g12 = path_gain(geom.user1, geom.user2, geom.gamma2, "user1-user2");
  return g;
}

LinkGains swap_users(const LinkGains& g) {
  return LinkGains{.g12 = g.g21, .g21 = g.g12, .g1r = g.g2r, .gr1 = g.gr2, .g2r = g.g1r, .gr2 = g.gr1, .p = g.p};
}

}  // namespace twrc
