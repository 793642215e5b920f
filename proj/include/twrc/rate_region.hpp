#pragma once

#include "twrc/channel.hpp"

namespace twrc {

/// Powers of the composite signal, with the block-Markov relay scalings
/// k_i expressed as relay powers pw_i = k_i * alpha_i.
struct PowerAllocation {
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double alpha2 = 0.0;
  double beta2 = 0.0;
  double pw1 = 0.0;
  double pw2 = 0.0;
  double beta3 = 0.0;

  double relay_total() const { return pw1 + pw2 + beta3; }
};

/// The five bounds J1..J5, in bits per channel use.
struct RateConstraints {
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double j4 = 0.0;
  double j5 = 0.0;
};

struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Which users decode the relay's binned codeword. Both by default; the
/// time-sharing baseline switches it off for the block-Markov-only user.
struct BinUsage {
  bool user1 = true;
  bool user2 = true;
};

enum class Corner { Lower, Upper };

/// log2(1 + x). All rates in this library are in bits.
double capacity(double x);

/// Throws InfeasibleAllocation naming the violated budget, or the
/// k-finiteness rule pw_i > 0 => alpha_i > 0.
void check_allocation(const LinkGains& g, const PowerAllocation& a);

RateConstraints compute_constraints(const LinkGains& g, const PowerAllocation& a,
                                    BinUsage usage = {});

/// Maximizer of mu*r1 + (1-mu)*r2 over the pentagon. mu > 1/2 gives the
/// lower corner, mu < 1/2 the upper one; mu == 1/2 defaults to the lower.
RatePoint best_weighted_point(const RateConstraints& c, double mu);
RatePoint pentagon_corner(const RateConstraints& c, Corner corner);

inline double weighted_sum(RatePoint r, double mu) { return mu * r.r1 + (1.0 - mu) * r.r2; }

}  // namespace twrc
