#pragma once

// Log-barrier Newton solver for the weighted-sum-rate epigraph problem.
// Internal to the optimizer; variables are scaled (powers by P, rates by a
// per-instance rate scale) so that every quantity is O(1).

#include <optional>

#include <Eigen/Dense>

#include "twrc/channel.hpp"

namespace twrc::detail {

enum Var : int { kA1 = 0, kA2, kW1, kW2, kB3, kR1, kR2, kNumVars };

using Vec = Eigen::Matrix<double, kNumVars, 1>;
using Mat = Eigen::Matrix<double, kNumVars, kNumVars>;

struct EpigraphProblem {
  LinkGains gains;
  double rate_scale = 1.0;  // bits per scaled rate unit
  Vec objective = Vec::Zero();
  // Optional linear floor: floor_dir . x >= floor_value.
  std::optional<Vec> floor_dir;
  double floor_value = 0.0;
};

struct BarrierResult {
  Vec x = Vec::Zero();
  bool converged = false;
  int newton_steps = 0;
  double gap = 0.0;
};

/// Rate scale used to normalize an instance; zero when no rate is possible.
double rate_scale_for(const LinkGains& g);

/// Strictly feasible interior point independent of the gains.
Vec default_start();

BarrierResult solve_barrier(const EpigraphProblem& prob, const Vec& start, double gap,
                            int max_newton_steps, double t0 = 1.0);

}  // namespace twrc::detail
