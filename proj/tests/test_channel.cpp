#include <cmath>

#include <gtest/gtest.h>

#include "twrc/channel.hpp"
#include "twrc/errors.hpp"

using namespace twrc;

namespace {

LinkGains all_half() { return {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0}; }

std::string failing_field(const LinkGains& g) {
  try {
    validate_gains(g);
  } catch (const InvalidInput& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(ValidateGains, AcceptsValidInput) { EXPECT_EQ(validate_gains(all_half()), all_half()); }

TEST(ValidateGains, NegativeGainNamesField) {
  LinkGains g = all_half();
  g.g12 = -0.1;
  EXPECT_EQ(failing_field(g), "g12");
  g = all_half();
  g.gr2 = -1.0;
  EXPECT_EQ(failing_field(g), "gr2");
  g = all_half();
  g.p = -1.0;
  EXPECT_EQ(failing_field(g), "p");
}

TEST(ValidateGains, RejectsNonFinite) {
  LinkGains g = all_half();
  g.g1r = std::nan("");
  EXPECT_EQ(failing_field(g), "g1r");
  g = all_half();
  g.gr1 = INFINITY;
  EXPECT_EQ(failing_field(g), "gr1");
}

TEST(ValidateGains, MultiHopWithoutDirectLinksAccepted) {
  LinkGains g = all_half();
  g.g12 = 0.0;
  g.g21 = 0.0;
  EXPECT_NO_THROW(validate_gains(g));
}

TEST(GainsFromGeometry, DirectLinksOfDefaultLayout) {
  // 20^-1.15 and 20^-1.8, evaluated independently.
  const LinkGains g = gains_from_geometry(Geometry{}, 1.0);
  EXPECT_NEAR(g.g21, 0.0319018233, 1e-10);
  EXPECT_NEAR(g.g12, 0.00455141051, 1e-11);
}

TEST(GainsFromGeometry, ExponentAssignment) {
  const LinkGains g = gains_from_geometry(Geometry{}, 2.0);
  // Relay at 10 m from both users.
  EXPECT_NEAR(g.gr1, std::pow(10.0, -1.15), 1e-15);
  EXPECT_NEAR(g.g2r, std::pow(10.0, -1.15), 1e-15);
  EXPECT_NEAR(g.g1r, std::pow(10.0, -1.8), 1e-15);
  EXPECT_NEAR(g.gr2, std::pow(10.0, -1.8), 1e-15);
  EXPECT_EQ(g.p, 2.0);
}

TEST(GainsFromGeometry, UnitDistanceGivesUnitGain) {
  Geometry geom;
  geom.user1 = {0.0, 0.0};
  geom.user2 = {1.0, 0.0};
  geom.relay = {0.0, 1.0};
  geom.gamma1 = 3.3;
  const LinkGains g = gains_from_geometry(geom, 1.0);
  EXPECT_DOUBLE_EQ(g.g21, 1.0);
  EXPECT_DOUBLE_EQ(g.g12, 1.0);
  EXPECT_DOUBLE_EQ(g.gr1, 1.0);
  EXPECT_DOUBLE_EQ(g.g1r, 1.0);
}

TEST(GainsFromGeometry, CoincidentNodesNamePair) {
  Geometry geom;
  geom.relay = geom.user1;
  try {
    gains_from_geometry(geom, 1.0);
    FAIL() << "expected CoincidentNodes";
  } catch (const CoincidentNodes& e) {
    EXPECT_EQ(e.field(), "user1-relay");
  }
  geom = Geometry{};
  geom.user2 = geom.user1;
  geom.relay = {5.0, 5.0};
  EXPECT_THROW(gains_from_geometry(geom, 1.0), CoincidentNodes);
}

TEST(GainsFromGeometry, RejectsBadExponent) {
  Geometry geom;
  geom.gamma2 = 0.0;
  EXPECT_THROW(gains_from_geometry(geom, 1.0), InvalidInput);
}

TEST(GainsFromGeometry, StrictlyDecreasingInDistance) {
  Geometry geom;
  double prev = INFINITY;
  for (double x = 1.0; x < 19.0; x += 0.5) {
    geom.relay = {x, 0.0};
    const double gr1 = gains_from_geometry(geom, 1.0).gr1;
    EXPECT_LT(gr1, prev);
    prev = gr1;
  }
}

TEST(GainsFromGeometry, DoublingDistancesScalesByExponent) {
  Geometry geom;
  geom.relay = {7.0, 3.0};
  const LinkGains a = gains_from_geometry(geom, 1.0);
  Geometry big = geom;
  big.user2 = {40.0, 0.0};
  big.relay = {14.0, 6.0};
  const LinkGains b = gains_from_geometry(big, 1.0);
  const double s1 = std::pow(2.0, -1.15);
  const double s2 = std::pow(2.0, -1.8);
  EXPECT_NEAR(b.gr1, a.gr1 * s1, 1e-15);
  EXPECT_NEAR(b.g2r, a.g2r * s1, 1e-15);
  EXPECT_NEAR(b.g21, a.g21 * s1, 1e-15);
  EXPECT_NEAR(b.g1r, a.g1r * s2, 1e-15);
  EXPECT_NEAR(b.gr2, a.gr2 * s2, 1e-15);
  EXPECT_NEAR(b.g12, a.g12 * s2, 1e-15);
}

TEST(SwapUsers, ExchangesIndicesAndIsInvolution) {
  const LinkGains g{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 1.5};
  const LinkGains s = swap_users(g);
  EXPECT_EQ(s.g12, 0.2);
  EXPECT_EQ(s.g21, 0.1);
  EXPECT_EQ(s.g1r, 0.5);
  EXPECT_EQ(s.g2r, 0.3);
  EXPECT_EQ(s.gr1, 0.6);
  EXPECT_EQ(s.gr2, 0.4);
  EXPECT_EQ(s.p, 1.5);
  EXPECT_EQ(swap_users(s), g);
}
