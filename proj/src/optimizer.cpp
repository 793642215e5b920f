#include "twrc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "barrier.hpp"
#include "twrc/errors.hpp"

namespace twrc {

namespace {

using detail::Vec;

double sq(double v) { return v * v; }

// Floor offset for the lexicographic second phase, in scaled rate units.
constexpr double kLexSlack = 1e-11;

void require_weight(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
}

std::string cell_name(const Regime& reg) {
  return "(" + std::string(to_string(reg.r)) + "," + std::string(to_string(reg.t)) + ")";
}

// Argument of J2 (user 1's forward constraint) without the beta3 term.
double forward_arg1_without_bin(const LinkGains& g, const PowerAllocation& a) {
  return sq(g.g21) * (a.alpha1 + a.beta1) + 2.0 * g.g21 * g.g2r * std::sqrt(a.pw1 * a.alpha1) +
         sq(g.g2r) * a.pw1;
}

double forward_arg2_without_bin(const LinkGains& g, const PowerAllocation& a) {
  return sq(g.g12) * (a.alpha2 + a.beta2) + 2.0 * g.g12 * g.g1r * std::sqrt(a.pw2 * a.alpha2) +
         sq(g.g1r) * a.pw2;
}

// Smallest beta3 for which a forward constraint supports `rate`.
double bin_power_needed(double rate, double arg_without_bin, double bin_gain) {
  if (bin_gain <= 0.0) return 0.0;
  const double need = (std::exp2(rate) - 1.0 - arg_without_bin) / sq(bin_gain);
  return std::max(0.0, need);
}

PowerAllocation allocation_from(const Vec& x, double p) {
  auto clamp = [p](double v) { return std::clamp(v * p, 0.0, p); };
  PowerAllocation a;
  a.alpha1 = clamp(x[detail::kA1]);
  a.alpha2 = clamp(x[detail::kA2]);
  a.beta1 = p - a.alpha1;
  a.beta2 = p - a.alpha2;
  a.pw1 = clamp(x[detail::kW1]);
  a.pw2 = clamp(x[detail::kW2]);
  a.beta3 = clamp(x[detail::kB3]);
  const double total = a.relay_total();
  if (total > p) {
    const double s = p / total;
    a.pw1 *= s;
    a.pw2 *= s;
    a.beta3 *= s;
  }
  return a;
}

RatePoint rates_for(const LinkGains& g, const PowerAllocation& a, Corner corner) {
  return pentagon_corner(compute_constraints(g, a), corner);
}

// Removes solver noise along flat directions; reverts any step that lowers
// the weighted sum.
PowerAllocation canonicalize(const LinkGains& g, const PowerAllocation& start, double mu,
                             Corner corner, double thr) {
  const double p = g.p;
  const double thr_abs = thr * p;
  auto value = [&](const PowerAllocation& a) { return weighted_sum(rates_for(g, a, corner), mu); };
  auto tolerance = [&](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };

  PowerAllocation a = start;
  double best = value(a);
  auto try_step = [&](PowerAllocation cand) {
    const double v = value(cand);
    if (v >= best - tolerance(best)) {
      a = cand;
      best = std::max(best, v);
    }
  };

  for (int user = 0; user < 2; ++user) {
    PowerAllocation cand = a;
    double& alpha = user == 0 ? cand.alpha1 : cand.alpha2;
    double& beta = user == 0 ? cand.beta1 : cand.beta2;
    double& pw = user == 0 ? cand.pw1 : cand.pw2;
    if (alpha <= thr_abs || pw <= thr_abs) {
      // Superposition power without a coherent relay share only costs rate.
      alpha = 0.0;
      beta = p;
      cand.beta3 += pw;
      pw = 0.0;
      try_step(cand);
    }
  }

  // Any surviving coherent relay share keeps the relay at full power.
  const bool bm1 = a.pw1 > thr_abs;
  const bool bm2 = a.pw2 > thr_abs;
  if (!bm1 && !bm2) {
    const RatePoint r = rates_for(g, a, corner);
    PowerAllocation cand = a;
    const double need1 = bin_power_needed(r.r1, forward_arg1_without_bin(g, a), g.g2r);
    const double need2 = bin_power_needed(r.r2, forward_arg2_without_bin(g, a), g.g1r);
    cand.beta3 = std::min(p - cand.pw1 - cand.pw2, std::max(need1, need2));
    cand.beta3 = std::max(cand.beta3, 0.0);
    try_step(cand);
  } else {
    PowerAllocation cand = a;
    if (cand.beta3 <= thr_abs) cand.beta3 = 0.0;
    const double slack = p - cand.relay_total();
    if (slack > 0.0) {
      const double w1 = bm1 ? a.pw1 : 0.0;
      const double w2 = bm2 ? a.pw2 : 0.0;
      cand.pw1 += slack * w1 / (w1 + w2);
      cand.pw2 += slack * w2 / (w1 + w2);
      try_step(cand);
    }
  }
  return a;
}

SolveResult finish(const LinkGains& g, const PowerAllocation& a, double mu, Corner corner,
                   double thr, bool converged) {
  SolveResult res;
  res.allocation = a;
  res.rates = rates_for(g, a, corner);
  res.mu = mu;
  res.weighted_sum = weighted_sum(res.rates, mu);
  res.assignment = infer_assignment(g, a, res.rates, thr);
  res.diagnostics = recover_duals(g, a, res.rates, mu);
  res.diagnostics.converged = converged && res.diagnostics.converged;
  return res;
}

SolveResult trivial_result(const LinkGains& g, double mu) {
  PowerAllocation a;
  a.beta1 = g.p;
  a.beta2 = g.p;
  return finish(g, a, mu, mu >= 0.5 ? Corner::Lower : Corner::Upper, kActivityThreshold, true);
}

// Lawson-Hanson nonnegative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  const Eigen::Index n = m.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd sub(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
    Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zs[static_cast<Eigen::Index>(k)];
    return z;
  };

  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    Eigen::VectorXd w = m.transpose() * (b - m * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > tol && (best < 0 || w[j] > w[best])) best = j;
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      Eigen::VectorXd z = solve_passive();
      bool positive = true;
      double step = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          positive = false;
          step = std::min(step, x[j] / (x[j] - z[j]));
        }
      }
      if (positive) {
        x = z;
        break;
      }
      x += step * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace

SolveResult solve(const LinkGains& g, double mu, const SolverOptions& opts) {
  validate_gains(g);
  require_weight(mu);
  const double scale = detail::rate_scale_for(g);
  // A relay that hears neither user decodes nothing, so every rate is zero.
  const bool deaf_relay = g.gr1 == 0.0 && g.gr2 == 0.0;
  if (g.p == 0.0 || scale == 0.0 || deaf_relay) {
    SolveResult res = trivial_result(g, mu);
    if (mu == 0.5) res.alternates.push_back(res);
    return res;
  }

  detail::EpigraphProblem prob;
  prob.gains = g;
  prob.rate_scale = scale;
  prob.objective[detail::kR1] = mu;
  prob.objective[detail::kR2] = 1.0 - mu;

  const detail::BarrierResult first =
      detail::solve_barrier(prob, detail::default_start(), opts.duality_gap, opts.max_newton_steps);

  auto lexicographic = [&](int favoured) {
    detail::EpigraphProblem second = prob;
    second.floor_dir = prob.objective;
    second.floor_value = prob.objective.dot(first.x) - kLexSlack;
    second.objective = Vec::Zero();
    second.objective[favoured] = 1.0;
    return detail::solve_barrier(second, first.x, opts.duality_gap, opts.max_newton_steps,
                                 1.0 / kLexSlack);
  };

  auto build = [&](const detail::BarrierResult& br, Corner corner) {
    PowerAllocation a = allocation_from(br.x, g.p);
    a = canonicalize(g, a, mu, corner, opts.activity_threshold);
    return finish(g, a, mu, corner, opts.activity_threshold, br.converged);
  };

  if (mu == 1.0) return build(lexicographic(detail::kR1), Corner::Lower);
  if (mu == 0.0) return build(lexicographic(detail::kR2), Corner::Upper);
  if (mu == 0.5) {
    SolveResult res = build(lexicographic(detail::kR1), Corner::Lower);
    res.alternates.push_back(build(lexicographic(detail::kR2), Corner::Upper));
    return res;
  }
  return build(first, mu > 0.5 ? Corner::Lower : Corner::Upper);
}

double lemma2_relay_power(const LinkGains& g) {
  validate_gains(g);
  const Regime reg = classify(g);
  if (reg.r != RRow::R2 || (reg.t != TCol::T3 && reg.t != TCol::T4)) {
    throw WrongRegime("relay-power formula applies to cells (R2,T3) and (R2,T4); gains are in " +
                      cell_name(reg));
  }
  const double p = g.p;
  const double boost = 1.0 + sq(g.gr1) * p;
  const double first = (sq(g.gr2) - sq(g.g12) * boost) * p / (sq(g.g1r) * boost);
  const double second = (sq(g.gr1) - sq(g.g21)) * p / sq(g.g2r);
  return std::max(first, second);
}

bool lemma1_check(const LinkGains& g, const SolveResult& res, double tol,
                  double activity_threshold) {
  const PowerAllocation& a = res.allocation;
  const double p = g.p;
  const double band = tol * p;
  if (std::abs(a.alpha1 + a.beta1 - p) > band) return false;
  if (std::abs(a.alpha2 + a.beta2 - p) > band) return false;
  if (a.pw1 + a.pw2 > activity_threshold * p && std::abs(a.relay_total() - p) > band) return false;
  return true;
}

SolveResult appendix_case_r2t5(const LinkGains& g, double mu) {
  validate_gains(g);
  if (!(mu > 0.5 && mu <= 1.0)) throw InvalidInput("mu", "must lie in (1/2, 1]");
  const Regime reg = classify(g);
  if (reg.r != RRow::R2) {
    throw WrongRegime("(R2,T5) closed form needs row R2; gains are in " + cell_name(reg));
  }
  if (!reg.side_condition_holds) {
    throw WrongRegime("(R2,T5) closed form needs the side condition g12^2(1+gr1^2 P) <= g12^2+g1r^2");
  }

  const double p = g.p;
  PowerAllocation a;
  a.alpha1 = 0.0;
  a.beta1 = p;
  a.beta3 = std::min(p, (sq(g.gr1) - sq(g.g21)) * p / sq(g.g2r));
  a.pw2 = p - a.beta3;

  const double j1 = capacity(sq(g.gr1) * p);
  auto gap = [&](double alpha2) {
    const double j4 = capacity(sq(g.g12) * p + 2.0 * g.g12 * g.g1r * std::sqrt(a.pw2 * alpha2) +
                               sq(g.g1r) * (a.pw2 + a.beta3));
    const double j5 = capacity(sq(g.gr1) * p + sq(g.gr2) * (p - alpha2));
    return j4 - (j5 - j1);
  };
  const double lo = gap(0.0);
  const double hi = gap(p);
  if (!(lo < 0.0) || !(hi >= 0.0)) {
    throw NoRoot("J4 = J5 - J1 has no solution with alpha2 in (0, P]; requires gr2^2 > "
                 "(g12^2 + g1r^2)(1 + gr1^2 P)");
  }
  double alpha2 = p;
  if (hi > 0.0) {
    std::uintmax_t iters = 200;
    auto [left, right] = boost::math::tools::toms748_solve(
        gap, 0.0, p, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    alpha2 = 0.5 * (left + right);
  }
  a.alpha2 = alpha2;
  a.beta2 = p - alpha2;
  return finish(g, a, mu, Corner::Lower, kActivityThreshold, true);
}

std::vector<RatePoint> boundary_trace(const LinkGains& g, std::span<const double> mus) {
  for (std::size_t i = 0; i < mus.size(); ++i) {
    require_weight(mus[i]);
    if (i > 0 && mus[i] < mus[i - 1]) throw InvalidInput("mu_samples", "must be sorted");
  }
  std::vector<RatePoint> out;
  out.reserve(mus.size());
  for (double mu : mus) out.push_back(solve(g, mu).rates);
  return out;
}

SchemeAssignment infer_assignment(const LinkGains& g, const PowerAllocation& a, RatePoint rates,
                                  double activity_threshold) {
  const double thr = activity_threshold * g.p;
  const bool bm[2] = {a.alpha1 > thr && a.pw1 > thr, a.alpha2 > thr && a.pw2 > thr};
  const double need[2] = {bin_power_needed(rates.r1, forward_arg1_without_bin(g, a), g.g2r),
                          bin_power_needed(rates.r2, forward_arg2_without_bin(g, a), g.g1r)};
  const bool ind[2] = {!bm[0] && need[0] > thr, !bm[1] && need[1] > thr};

  Technique label[2];
  for (int i = 0; i < 2; ++i) {
    if (!bm[i]) {
      label[i] = ind[i] ? Technique::Independent : Technique::DirectTransmission;
      continue;
    }
    const int other = 1 - i;
    const bool bin_used = a.beta3 > thr;
    const bool owned_by_other = ind[other] && a.beta3 <= need[other] + thr;
    label[i] = bin_used && !owned_by_other ? Technique::Both : Technique::BlockMarkov;
  }
  return {label[0], label[1]};
}

KktDiagnostics recover_duals(const LinkGains& g, const PowerAllocation& a, RatePoint rates,
                             double mu) {
  KktDiagnostics diag;
  const double p = g.p;
  const double ln2 = std::numbers::ln2;
  const RateConstraints c = compute_constraints(g, a);

  const double arg1 = sq(g.gr1) * a.beta1;
  const double arg3 = sq(g.gr2) * a.beta2;
  const double arg5 = arg1 + arg3;
  const double arg2 = forward_arg1_without_bin(g, a) + sq(g.g2r) * a.beta3;
  const double arg4 = forward_arg2_without_bin(g, a) + sq(g.g1r) * a.beta3;
  const double d1 = 1.0 / ((1.0 + arg1) * ln2);
  const double d2 = 1.0 / ((1.0 + arg2) * ln2);
  const double d3 = 1.0 / ((1.0 + arg3) * ln2);
  const double d4 = 1.0 / ((1.0 + arg4) * ln2);
  const double d5 = 1.0 / ((1.0 + arg5) * ln2);
  const double inf = std::numeric_limits<double>::infinity();

  // d sqrt(u v)/du, with the convention 0 when both vanish.
  auto droot = [inf](double u, double v) {
    if (v == 0.0) return 0.0;
    if (u == 0.0) return inf;
    return 0.5 * std::sqrt(v / u);
  };

  // Rows: variables alpha1, beta1, alpha2, beta2, pw1, pw2, beta3, R1, R2.
  // Columns: constraints J1..J5, user-1, user-2 and relay budgets.
  constexpr int kRows = 9;
  Eigen::Matrix<double, kRows, 8> grad = Eigen::Matrix<double, kRows, 8>::Zero();
  Eigen::Matrix<double, kRows, 1> objective = Eigen::Matrix<double, kRows, 1>::Zero();
  const double c2 = 2.0 * g.g21 * g.g2r;
  const double c4 = 2.0 * g.g12 * g.g1r;
  grad(0, 1) = (sq(g.g21) + c2 * droot(a.alpha1, a.pw1)) * d2;
  grad(1, 0) = sq(g.gr1) * d1;
  grad(1, 1) = sq(g.g21) * d2;
  grad(1, 4) = sq(g.gr1) * d5;
  grad(2, 3) = (sq(g.g12) + c4 * droot(a.alpha2, a.pw2)) * d4;
  grad(3, 2) = sq(g.gr2) * d3;
  grad(3, 3) = sq(g.g12) * d4;
  grad(3, 4) = sq(g.gr2) * d5;
  grad(4, 1) = (sq(g.g2r) + c2 * droot(a.pw1, a.alpha1)) * d2;
  grad(5, 3) = (sq(g.g1r) + c4 * droot(a.pw2, a.alpha2)) * d4;
  grad(6, 1) = sq(g.g2r) * d2;
  grad(6, 3) = sq(g.g1r) * d4;
  grad(7, 0) = grad(7, 1) = grad(7, 4) = -1.0;
  grad(8, 2) = grad(8, 3) = grad(8, 4) = -1.0;
  grad(0, 5) = grad(1, 5) = -1.0;
  grad(2, 6) = grad(3, 6) = -1.0;
  grad(4, 7) = grad(5, 7) = grad(6, 7) = -1.0;
  objective[7] = mu;
  objective[8] = 1.0 - mu;

  const double slack[8] = {c.j1 - rates.r1,
                           c.j2 - rates.r1,
                           c.j3 - rates.r2,
                           c.j4 - rates.r2,
                           c.j5 - rates.r1 - rates.r2,
                           p - a.alpha1 - a.beta1,
                           p - a.alpha2 - a.beta2,
                           p - a.relay_total()};
  const double rate_tol = 1e-6 * std::max(1.0, c.j5);
  const double power_tol = 1e-9 * std::max(1.0, p);
  bool active[8];
  for (int k = 0; k < 8; ++k) active[k] = slack[k] <= (k < 5 ? rate_tol : power_tol);

  const double values[kRows] = {a.alpha1, a.beta1, a.alpha2, a.beta2, a.pw1,
                                a.pw2,    a.beta3, rates.r1, rates.r2};
  const double interior_tol = kActivityThreshold * p;
  std::vector<int> eq_rows;
  std::vector<int> bound_rows;
  for (int r = 0; r < kRows; ++r) {
    if (!grad.row(r).allFinite()) continue;
    (values[r] > interior_tol ? eq_rows : bound_rows).push_back(r);
  }

  std::vector<int> cols;
  for (int k = 0; k < 8; ++k)
    if (active[k]) cols.push_back(k);

  Eigen::MatrixXd m(static_cast<Eigen::Index>(eq_rows.size()), static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = grad(eq_rows[i], cols[j]);
    rhs[static_cast<Eigen::Index>(i)] = -objective[eq_rows[i]];
  }
  Eigen::VectorXd lam = cols.empty() ? Eigen::VectorXd() : nnls(m, rhs);
  for (std::size_t j = 0; j < cols.size(); ++j) diag.lambda[static_cast<std::size_t>(cols[j])] = lam[static_cast<Eigen::Index>(j)];

  Eigen::Matrix<double, 8, 1> lv;
  for (int k = 0; k < 8; ++k) lv[k] = diag.lambda[static_cast<std::size_t>(k)];
  // Gradient of the Lagrangian; zero on interior variables, <= 0 at bounds.
  Eigen::Matrix<double, kRows, 1> lagr = objective + grad * lv;
  // Each row is measured relative to the size of its terms.
  auto row_scale = [&](int r) {
    double s = std::abs(objective[r]);
    for (int k = 0; k < 8; ++k) s += std::abs(grad(r, k)) * lv[k];
    return std::max(1.0, s);
  };
  double stat = 0.0;
  for (int r : eq_rows) stat = std::max(stat, std::abs(lagr[r]) / row_scale(r));
  for (int r : bound_rows) stat = std::max(stat, std::max(0.0, lagr[r]) / row_scale(r));
  diag.stationarity_residual = stat;

  double cs = 0.0;
  for (int k = 0; k < 8; ++k) cs = std::max(cs, diag.lambda[static_cast<std::size_t>(k)] * std::abs(slack[k]));
  diag.complementary_slackness_residual = cs;
  diag.converged = stat <= 1e-5;
  return diag;
}

KktGradients kkt_gradients(const LinkGains& g, const PowerAllocation& a,
                           const std::array<double, 8>& lambda) {
  const double ln2 = std::numbers::ln2;
  KktGradients out;
  const double arg2 = forward_arg1_without_bin(g, a) + sq(g.g2r) * a.beta3;
  const double arg4 = forward_arg2_without_bin(g, a) + sq(g.g1r) * a.beta3;
  out.n2 = 1.0 + arg2;
  out.n1 = 1.0 + arg4;
  const double d2 = 1.0 / (out.n2 * ln2);
  const double d4 = 1.0 / (out.n1 * ln2);
  const double k1 = a.alpha1 > 0.0 ? a.pw1 / a.alpha1 : 0.0;
  out.d_alpha1 = lambda[5] + lambda[7] * k1 - lambda[1] * sq(g.g21 + g.g2r * std::sqrt(k1)) * d2;
  out.d_beta3 = lambda[7] - lambda[3] * sq(g.g1r) * d4 - lambda[1] * sq(g.g2r) * d2;
  if (a.alpha2 > 0.0 && a.pw2 > 0.0) {
    const double k2 = a.pw2 / a.alpha2;
    out.d_k2 = a.alpha2 * (lambda[7] - lambda[3] * (g.g12 * g.g1r / std::sqrt(k2) + sq(g.g1r)) * d4);
  }
  return out;
}

}  // namespace twrc
