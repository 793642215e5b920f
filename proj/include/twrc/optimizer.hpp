#pragma once

#include <array>
#include <span>
#include <vector>

#include "twrc/channel.hpp"
#include "twrc/rate_region.hpp"
#include "twrc/regimes.hpp"

namespace twrc {

/// A power component counts as active above this fraction of P.
inline constexpr double kActivityThreshold = 1e-6;

/// Dual values for J1..J5 (lambda[0..4]) and the user-1, user-2 and relay
/// budgets (lambda[5..7]), recovered from the active constraints.
struct KktDiagnostics {
  std::array<double, 8> lambda{};
  double complementary_slackness_residual = 0.0;
  double stationarity_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  PowerAllocation allocation;
  RatePoint rates;
  SchemeAssignment assignment;
  double mu = 0.0;
  double weighted_sum = 0.0;
  KktDiagnostics diagnostics;
  // mu == 1/2 only: the upper-corner optimum (same weighted sum).
  std::vector<SolveResult> alternates;
};

struct SolverOptions {
  double activity_threshold = kActivityThreshold;
  // Barrier gap, relative to the instance's rate scale.
  double duality_gap = 1e-10;
  int max_newton_steps = 400;
};

/// Maximizes mu*R1 + (1-mu)*R2 over the achievable region.
SolveResult solve(const LinkGains& g, double mu, const SolverOptions& opts = {});

/// Optimal relay power when both users use independent coding only.
/// Throws WrongRegime unless classify(g) is (R2,T3) or (R2,T4).
double lemma2_relay_power(const LinkGains& g);

/// Both users at full power; relay at full power whenever a block-Markov
/// component is active. Tolerances are relative to P.
bool lemma1_check(const LinkGains& g, const SolveResult& res, double tol = 1e-8,
                  double activity_threshold = kActivityThreshold);

/// Closed-form-plus-root solution of the (R2,T5) case: user 1 independent,
/// user 2 block Markov, beta3 = (gr1^2 - g21^2) P / g2r^2.
/// Throws WrongRegime outside row R2 or when the side condition fails,
/// NoRoot when J4 = J5 - J1 has no solution with alpha2 in (0, P].
SolveResult appendix_case_r2t5(const LinkGains& g, double mu);

/// One optimal rate point per weight; mus must be sorted in [0,1].
std::vector<RatePoint> boundary_trace(const LinkGains& g, std::span<const double> mus);

/// Technique labels implied by an allocation and the rates it supports.
SchemeAssignment infer_assignment(const LinkGains& g, const PowerAllocation& a, RatePoint rates,
                                  double activity_threshold = kActivityThreshold);

/// Lagrange multipliers by nonnegative least squares on the stationarity
/// equations of the unreduced problem.
KktDiagnostics recover_duals(const LinkGains& g, const PowerAllocation& a, RatePoint rates,
                             double mu);

/// Lagrangian partials in the original (alpha, beta, k) parameterization.
struct KktGradients {
  double d_alpha1 = 0.0;
  double d_beta3 = 0.0;
  double d_k2 = 0.0;   // zero when alpha2 == 0 (k2 undefined)
  double n1 = 0.0;     // 1 + received SNR argument of J4
  double n2 = 0.0;     // 1 + received SNR argument of J2
};

KktGradients kkt_gradients(const LinkGains& g, const PowerAllocation& a,
                           const std::array<double, 8>& lambda);

}  // namespace twrc
