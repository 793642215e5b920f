#include "barrier.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace twrc::detail {

namespace {

double sq(double v) { return v * v; }

// log2(1 + A(x)) / scale where A = constant + lin.x + cross*sqrt(x_w x_a).
struct RateTerm {
  double constant = 0.0;
  Vec lin = Vec::Zero();
  double cross = 0.0;
  int iw = -1;
  int ia = -1;
};

struct Constraint {
  double value = 0.0;
  Vec grad = Vec::Zero();
  Mat hess = Mat::Zero();  // Hessian of the slack (concave => negative semidefinite)
  bool linear = true;
};

class ConstraintSet {
 public:
  explicit ConstraintSet(const EpigraphProblem& prob) : prob_(prob) {
    const LinkGains& g = prob.gains;
    const double p = g.p;

    RateTerm j1;
    j1.constant = sq(g.gr1) * p;
    j1.lin[kA1] = -sq(g.gr1) * p;

    RateTerm j3;
    j3.constant = sq(g.gr2) * p;
    j3.lin[kA2] = -sq(g.gr2) * p;

    RateTerm j5;
    j5.constant = (sq(g.gr1) + sq(g.gr2)) * p;
    j5.lin[kA1] = -sq(g.gr1) * p;
    j5.lin[kA2] = -sq(g.gr2) * p;

    RateTerm j2;
    j2.constant = sq(g.g21) * p;
    j2.lin[kW1] = sq(g.g2r) * p;
    j2.lin[kB3] = sq(g.g2r) * p;
    j2.cross = 2.0 * g.g21 * g.g2r * p;
    j2.iw = kW1;
    j2.ia = kA1;

    RateTerm j4;
    j4.constant = sq(g.g12) * p;
    j4.lin[kW2] = sq(g.g1r) * p;
    j4.lin[kB3] = sq(g.g1r) * p;
    j4.cross = 2.0 * g.g12 * g.g1r * p;
    j4.iw = kW2;
    j4.ia = kA2;

    Vec r1 = Vec::Zero();
    r1[kR1] = 1.0;
    Vec r2 = Vec::Zero();
    r2[kR2] = 1.0;
    rate_.push_back({j1, r1});
    rate_.push_back({j2, r1});
    rate_.push_back({j3, r2});
    rate_.push_back({j4, r2});
    rate_.push_back({j5, r1 + r2});

    auto lin = [this](std::initializer_list<std::pair<int, double>> coeffs, double b) {
      Vec a = Vec::Zero();
      for (auto [i, c] : coeffs) a[i] = c;
      linear_.push_back({a, b});
    };
    lin({{kA1, -1.0}}, 1.0);
    lin({{kA2, -1.0}}, 1.0);
    lin({{kW1, -1.0}, {kW2, -1.0}, {kB3, -1.0}}, 1.0);
    for (int i = kA1; i <= kB3; ++i) lin({{i, 1.0}}, 0.0);
    lin({{kR1, 1.0}}, 1.0);
    lin({{kR2, 1.0}}, 1.0);
    if (prob.floor_dir) linear_.push_back({*prob.floor_dir, -prob.floor_value});
  }

  int size() const { return static_cast<int>(rate_.size() + linear_.size()); }

  // Slack values only; false if any is nonpositive.
  bool slacks(const Vec& x, std::vector<double>& out) const {
    out.clear();
    for (const auto& [term, sub] : rate_) {
      double a = argument(term, x);
      if (!(a > -1.0)) return false;
      out.push_back(std::log1p(a) / log_scale() - sub.dot(x));
    }
    for (const auto& [a, b] : linear_) out.push_back(a.dot(x) + b);
    for (double s : out) {
      if (!(s > 0.0)) return false;
    }
    return true;
  }

  // Gradient and Hessian of -sum log(slack).
  void barrier_derivatives(const Vec& x, Vec& grad, Mat& hess) const {
    grad.setZero();
    hess.setZero();
    for (const auto& [term, sub] : rate_) {
      Constraint c = rate_constraint(term, sub, x);
      grad -= c.grad / c.value;
      hess += c.grad * c.grad.transpose() / sq(c.value) - c.hess / c.value;
    }
    for (const auto& [a, b] : linear_) {
      double s = a.dot(x) + b;
      grad -= a / s;
      hess += a * a.transpose() / sq(s);
    }
  }

 private:
  double log_scale() const { return std::numbers::ln2 * prob_.rate_scale; }

  static double argument(const RateTerm& t, const Vec& x) {
    double a = t.constant + t.lin.dot(x);
    if (t.cross != 0.0) a += t.cross * std::sqrt(std::max(x[t.iw], 0.0) * std::max(x[t.ia], 0.0));
    return a;
  }

  Constraint rate_constraint(const RateTerm& t, const Vec& sub, const Vec& x) const {
    Vec da = t.lin;
    Mat dda = Mat::Zero();
    if (t.cross != 0.0) {
      const double w = x[t.iw];
      const double a = x[t.ia];
      const double root = std::sqrt(w * a);
      da[t.iw] += t.cross * 0.5 * std::sqrt(a / w);
      da[t.ia] += t.cross * 0.5 * std::sqrt(w / a);
      dda(t.iw, t.iw) = -t.cross * 0.25 * std::sqrt(a) / (w * std::sqrt(w));
      dda(t.ia, t.ia) = -t.cross * 0.25 * std::sqrt(w) / (a * std::sqrt(a));
      dda(t.iw, t.ia) = dda(t.ia, t.iw) = t.cross * 0.25 / root;
    }
    const double arg = argument(t, x);
    const double inv = 1.0 / (1.0 + arg);
    Constraint c;
    c.linear = false;
    c.value = std::log1p(arg) / log_scale() - sub.dot(x);
    c.grad = da * inv / log_scale() - sub;
    c.hess = (dda * inv - da * da.transpose() * sq(inv)) / log_scale();
    return c;
  }

  const EpigraphProblem& prob_;
  std::vector<std::pair<RateTerm, Vec>> rate_;
  std::vector<std::pair<Vec, double>> linear_;
};

}  // namespace

double rate_scale_for(const LinkGains& g) {
  const double p = g.p;
  double s = std::log2(1.0 + (sq(g.gr1) + sq(g.gr2)) * p);
  s = std::max(s, std::log2(1.0 + sq(g.g21 + g.g2r) * 2.0 * p));
  s = std::max(s, std::log2(1.0 + sq(g.g12 + g.g1r) * 2.0 * p));
  return s;
}

Vec default_start() {
  Vec x;
  x << 0.2, 0.2, 0.25, 0.25, 0.25, -0.5, -0.5;
  return x;
}

BarrierResult solve_barrier(const EpigraphProblem& prob, const Vec& start, double gap,
                            int max_newton_steps, double t0) {
  ConstraintSet cons(prob);
  const double m = cons.size();
  BarrierResult out;
  out.x = start;

  std::vector<double> s_old, s_new;
  if (!cons.slacks(out.x, s_old)) return out;

  double t = t0;
  Vec grad;
  Mat hess;
  while (true) {
    // Centering.
    for (int inner = 0; inner < 100 && out.newton_steps < max_newton_steps; ++inner) {
      cons.barrier_derivatives(out.x, grad, hess);
      grad -= t * prob.objective;
      // Symmetric diagonal scaling keeps the factorization accurate when
      // barrier curvatures differ by many orders of magnitude.
      Vec d = hess.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      Mat scaled = d.asDiagonal() * hess * d.asDiagonal();
      Eigen::LDLT<Mat> ldlt(scaled);
      Vec step = d.cwiseProduct(ldlt.solve(-d.cwiseProduct(grad)));
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        scaled.diagonal().array() += 1e-12;
        step = d.cwiseProduct(scaled.ldlt().solve(-d.cwiseProduct(grad)));
        if (!step.allFinite()) break;
      }
      const double decrement2 = -grad.dot(step);
      ++out.newton_steps;
      if (decrement2 < 1e-10) break;

      cons.slacks(out.x, s_old);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-16) {
        Vec trial = out.x + alpha * step;
        if (cons.slacks(trial, s_new)) {
          // Barrier change from slack ratios avoids cancellation at large t.
          double delta = -t * alpha * prob.objective.dot(step);
          for (std::size_t k = 0; k < s_new.size(); ++k) delta -= std::log(s_new[k] / s_old[k]);
          if (delta <= -0.25 * alpha * decrement2) {
            out.x = trial;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    out.gap = m / t;
    if (out.gap <= gap) {
      out.converged = true;
      break;
    }
    if (out.newton_steps >= max_newton_steps) break;
    t *= 10.0;
  }
  return out;
}

}  // namespace twrc::detail
