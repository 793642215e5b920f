#include "twrc/rate_region.hpp"

#include <algorithm>
#include <cmath>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

double sq(double v) { return v * v; }

// Round-off allowance on the budgets, relative to P.
constexpr double kBudgetTol = 1e-12;

}  // namespace

double capacity(double x) {
  if (x < 0.0) throw InvalidInput("x", "capacity argument must be nonnegative");
  return std::log2(1.0 + x);
}

void check_allocation(const LinkGains& g, const PowerAllocation& a) {
  const double tol = kBudgetTol * std::max(g.p, 1.0);
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0)) throw InfeasibleAllocation(name, "power must be nonnegative");
  };
  nonneg(a.alpha1, "alpha1");
  nonneg(a.beta1, "beta1");
  nonneg(a.alpha2, "alpha2");
  nonneg(a.beta2, "beta2");
  nonneg(a.pw1, "pw1");
  nonneg(a.pw2, "pw2");
  nonneg(a.beta3, "beta3");
  if (a.alpha1 + a.beta1 > g.p + tol) throw InfeasibleAllocation("user1", "alpha1 + beta1 exceeds P");
  if (a.alpha2 + a.beta2 > g.p + tol) throw InfeasibleAllocation("user2", "alpha2 + beta2 exceeds P");
  if (a.relay_total() > g.p + tol) throw InfeasibleAllocation("relay", "pw1 + pw2 + beta3 exceeds P");
  if (a.pw1 > 0.0 && a.alpha1 == 0.0) throw InfeasibleAllocation("pw1", "pw1 > 0 requires alpha1 > 0");
  if (a.pw2 > 0.0 && a.alpha2 == 0.0) throw InfeasibleAllocation("pw2", "pw2 > 0 requires alpha2 > 0");
}

RateConstraints compute_constraints(const LinkGains& g, const PowerAllocation& a, BinUsage usage) {
  check_allocation(g, a);
  const double b3_for_1 = usage.user1 ? a.beta3 : 0.0;
  const double b3_for_2 = usage.user2 ? a.beta3 : 0.0;
  RateConstraints c;
  c.j1 = capacity(sq(g.gr1) * a.beta1);
  c.j3 = capacity(sq(g.gr2) * a.beta2);
  c.j5 = capacity(sq(g.gr1) * a.beta1 + sq(g.gr2) * a.beta2);
  // k1*alpha1^2 = pw1*alpha1, so the coherent cross term is 2 g21 g2r sqrt(pw1 alpha1).
  c.j2 = capacity(sq(g.g21) * (a.alpha1 + a.beta1) + 2.0 * g.g21 * g.g2r * std::sqrt(a.pw1 * a.alpha1) +
                  sq(g.g2r) * (a.pw1 + b3_for_1));
  c.j4 = capacity(sq(g.g12) * (a.alpha2 + a.beta2) + 2.0 * g.g12 * g.g1r * std::sqrt(a.pw2 * a.alpha2) +
                  sq(g.g1r) * (a.pw2 + b3_for_2));
  return c;
}

RatePoint pentagon_corner(const RateConstraints& c, Corner corner) {
  const double cap1 = std::min(c.j1, c.j2);
  const double cap2 = std::min(c.j3, c.j4);
  if (corner == Corner::Lower) {
    double r1 = std::min(cap1, c.j5);
    return {r1, std::max(0.0, std::min(cap2, c.j5 - r1))};
  }
  double r2 = std::min(cap2, c.j5);
  return {std::max(0.0, std::min(cap1, c.j5 - r2)), r2};
}

RatePoint best_weighted_point(const RateConstraints& c, double mu) {
  return pentagon_corner(c, mu >= 0.5 ? Corner::Lower : Corner::Upper);
}

}  // namespace twrc
