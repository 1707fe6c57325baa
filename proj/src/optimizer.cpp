#include "secnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "secnet/analytic.hpp"
#include "secnet/error.hpp"
#include "secnet/math_core.hpp"

namespace secnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Bracket and tolerance of the stationary-point bisection.
constexpr double kEdge = 1e-9;
constexpr int kMaxDoublings = 60;
constexpr double kRelTol = 1e-12;

// Exhaustive search for the multi-stream case.
constexpr int kGridPoints = 512;
constexpr double kGridSpan = 1e-8;

bool closed_form_mode(const NetworkConfig& cfg) { return cfg.single_antenna() || cfg.n_j == 1; }

double rate(double beta) { return std::log2(1.0 + beta); }

ThroughputSolution make_solution(double lambda, const QoSTargets& targets,
                                 const NetworkConfig& cfg) {
  NetworkConfig at = cfg;
  at.lambda_f = lambda;
  ThroughputSolution sol;
  sol.r_t = rate(threshold_beta_t(targets.sigma, at));
  sol.r_e = rate(threshold_beta_e(targets.epsilon, at));
  sol.r_s = std::max(sol.r_t - sol.r_e, 0.0);
  sol.t_s_star = lambda * targets.sigma * sol.r_s;
  sol.feasible = sol.t_s_star > 0.0;
  if (sol.feasible) sol.lambda_f_star = lambda;
  return sol;
}

ThroughputSolution infeasible(std::string reason) {
  ThroughputSolution sol;
  sol.reason = std::move(reason);
  return sol;
}

ThroughputSolution solve_closed_form(const QoSTargets& targets, const NetworkConfig& cfg,
                                     const OptimizerConstants& k) {
  if (!std::isfinite(k.lambda_lower)) {
    return infeasible("connection and secrecy targets cannot hold together at any density");
  }
  if (!(k.lambda_upper > 0.0)) {
    return infeasible("HD throughput floor leaves no room for FD deployment");
  }
  if (k.lambda_lower >= k.lambda_upper) {
    return infeasible("smallest useful density exceeds the HD-tier limit");
  }
  const double alpha = k.alpha;
  // Without eavesdroppers lambda^L is 0 and the bracket starts just above it.
  double lo = k.lambda_lower > 0.0 ? k.lambda_lower * (1.0 + kEdge)
                                   : kEdge * std::min(k.lambda_upper, 1.0 / (cfg.d_f * cfg.d_f));
  double hi = 2.0 * lo;
  int doublings = 0;
  while (stationarity_lhs(hi, k, alpha) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > kMaxDoublings) {
      throw Error(ErrorCode::bracket, "stationarity condition keeps its sign over 60 doublings");
    }
  }
  while (hi - lo > kRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity_lhs(mid, k, alpha) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double stationary = 0.5 * (lo + hi);
  ThroughputSolution sol = make_solution(std::min(stationary, k.lambda_upper), targets, cfg);
  sol.lambda_stationary = stationary;
  if (!sol.feasible) sol.reason = "throughput vanishes at the optimum";
  return sol;
}

ThroughputSolution solve_search(const QoSTargets& targets, const NetworkConfig& cfg,
                                const OptimizerConstants& k) {
  if (!(k.lambda_upper > 0.0)) {
    return infeasible("HD throughput floor leaves no room for FD deployment");
  }
  const double top = std::isfinite(k.lambda_upper) ? k.lambda_upper : 1.0 / (cfg.d_f * cfg.d_f);
  const double bottom = top * kGridSpan;
  const double log_lo = std::log(bottom);
  const double step = (std::log(top) - log_lo) / (kGridPoints - 1);

  auto value = [&](double log_lambda) {
    return throughput(std::exp(log_lambda), targets, cfg);
  };
  std::vector<double> grid(kGridPoints);
  int best = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = value(log_lo + step * i);
    if (grid[i] > grid[best]) best = i;
  }
  if (!(grid[best] > 0.0)) {
    return infeasible("throughput is zero over the whole search range");
  }

  // Golden-section refinement in log lambda around the best grid point.
  double a = log_lo + step * std::max(best - 1, 0);
  double b = log_lo + step * std::min(best + 1, kGridPoints - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c);
  double fd = value(d);
  while (b - a > 1e-10) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  double best_log = 0.5 * (a + b);
  if (value(best_log) < grid[best]) best_log = log_lo + step * best;
  return make_solution(std::exp(best_log), targets, cfg);
}

}  // namespace

OptimizerConstants optimizer_constants(const QoSTargets& targets, const NetworkConfig& cfg) {
  cfg.validate();
  targets.validate();
  if (!(cfg.lambda_h > 0.0)) {
    throw Error(ErrorCode::domain, "the optimizer constants need lambda_h > 0");
  }
  const double alpha = cfg.alpha;
  const double delta = delta_of(alpha);
  const double c2 = c_alpha_n(alpha, 2);
  const double df2 = cfg.d_f * cfg.d_f;
  const double dh2 = cfg.d_h * cfg.d_h;
  const double hd = std::pow(cfg.p_hf(), delta) * cfg.lambda_h;
  const double secrecy = std::log(1.0 / (1.0 - targets.epsilon));
  const double k_h = k_alpha_n(alpha, cfg.n_h);
  const double t_c_term = targets.t_c > 0.0
                              ? std::pow(std::exp2(targets.t_c / (cfg.lambda_h * targets.sigma_c)) - 1.0,
                                         -delta)
                              : kInf;

  OptimizerConstants k;
  k.alpha = alpha;
  k.multi_antenna = !cfg.single_antenna();
  k.z = std::pow(std::numbers::pi * cfg.lambda_e * cfg.n_e / (c2 * secrecy), 0.5 * alpha) /
        cfg.p_tf();

  if (cfg.single_antenna()) {
    k.x = std::pow((1.0 - targets.sigma) / (c2 * df2 * k_alpha_n(alpha, cfg.n_f - 2) * hd),
                   0.5 * alpha);
    k.y = (1.0 + std::pow(cfg.p_tf(), delta)) / hd;
    k.x_t = k.y_t = k.z_t = kNaN;
    k.lambda_upper = ((1.0 - targets.sigma_c) / (c2 * dh2 * k_h) * t_c_term - cfg.lambda_h) /
                     (std::pow(cfg.p_th(), delta) + std::pow(cfg.p_fh(), delta));
  } else {
    const double cj = c_alpha_n(alpha, cfg.n_j + 1);
    const double nj = cfg.n_j;
    k.x = k.y = kNaN;
    k.x_t = std::pow((1.0 - targets.sigma) /
                         (c2 * df2 * k_alpha_n(alpha, cfg.n_f - cfg.n_t) * hd),
                     0.5 * alpha);
    k.y_t = (c2 + cj * std::pow(cfg.p_tf() / nj, delta)) / (c2 * hd);
    // Z~ only exists for a single stream; more streams need the numeric inverse.
    k.z_t = cfg.n_j == 1 ? k.z : kNaN;
    k.lambda_upper = ((1.0 - targets.sigma_c) / (dh2 * k_h) * t_c_term - c2 * cfg.lambda_h) /
                     (c2 * std::pow(cfg.p_fh(), delta) + cj * std::pow(cfg.p_th() / nj, delta));
  }

  if (k.multi_antenna && cfg.n_j != 1) {
    k.lambda_lower = 0.0;
  } else {
    const double margin = std::pow(k.active_x() / k.active_z(), delta) - k.active_y();
    k.lambda_lower = margin > 0.0 ? 1.0 / margin : kInf;
  }
  return k;
}

bool feasibility(const QoSTargets& targets, const NetworkConfig& cfg) {
  cfg.validate();
  targets.validate();
  if (cfg.single_antenna()) {
    const double delta = delta_of(cfg.alpha);
    const double lhs = (1.0 - targets.sigma) * std::log(1.0 / (1.0 - targets.epsilon));
    const double rhs = std::numbers::pi * cfg.lambda_e * cfg.n_e * cfg.d_f * cfg.d_f *
                       k_alpha_n(cfg.alpha, cfg.n_f - 2) *
                       (1.0 + std::pow(cfg.p_tf(), -delta));
    return lhs > rhs;
  }
  if (cfg.n_j != 1) {
    throw Error(ErrorCode::mode, "closed-form feasibility needs n_j = 1; use the search");
  }
  return std::isfinite(optimizer_constants(targets, cfg).lambda_lower);
}

std::pair<double, double> lambda_bounds(const QoSTargets& targets, const NetworkConfig& cfg) {
  const OptimizerConstants k = optimizer_constants(targets, cfg);
  if (!(k.lambda_upper > 0.0)) {
    throw Error(ErrorCode::infeasible,
                "HD-tier throughput floor t_c cannot be met with any FD deployment");
  }
  return {k.lambda_lower, k.lambda_upper};
}

double auxiliary_f(double lambda, const OptimizerConstants& k) {
  const double a = k.alpha;
  const double f1 = 1.0 + k.active_x() * std::pow(1.0 + k.active_y() * lambda, -0.5 * a);
  const double f2 = 1.0 + k.active_z() * std::pow(lambda, -0.5 * a);
  return lambda * std::log(f1 / f2);
}

double auxiliary_g(double lambda, const OptimizerConstants& k) {
  const double a = k.alpha;
  const double y = k.active_y();
  const double f1 = 1.0 + k.active_x() * std::pow(1.0 + y * lambda, -0.5 * a);
  const double f2 = 1.0 + k.active_z() * std::pow(lambda, -0.5 * a);
  const double df1 = -0.5 * a * (f1 - 1.0) * y / (1.0 + lambda * y);
  const double df2 = -0.5 * a * (f2 - 1.0) / lambda;
  return 1.0 + lambda * (df1 / f1 - df2 / f2) / std::log(f1 / f2);
}

double stationarity_lhs(double lambda, const OptimizerConstants& k, double alpha) {
  const double x = k.active_x();
  const double y = k.active_y();
  const double z = k.active_z();
  const double f1 = 1.0 + x * std::pow(1.0 + y * lambda, -0.5 * alpha);
  const double f2 = 1.0 + z * std::pow(lambda, -0.5 * alpha);
  const double num = f1 * (f2 - 1.0) - lambda * (f1 - f2) * y;
  return std::log(f1 / f2) + 0.5 * alpha * num / (f1 * f2 * (1.0 + y * lambda));
}

ThroughputSolution solve_optimal_density(const QoSTargets& targets, const NetworkConfig& cfg) {
  const OptimizerConstants k = optimizer_constants(targets, cfg);
  return closed_form_mode(cfg) ? solve_closed_form(targets, cfg, k) : solve_search(targets, cfg, k);
}

double throughput(double lambda_f, const QoSTargets& targets, const NetworkConfig& cfg) {
  if (!(lambda_f > 0.0)) throw Error(ErrorCode::domain, "lambda_f must be positive");
  NetworkConfig at = cfg;
  at.lambda_f = lambda_f;
  const double r_t = rate(threshold_beta_t(targets.sigma, at));
  const double r_e = rate(threshold_beta_e(targets.epsilon, at));
  return lambda_f * targets.sigma * std::max(r_t - r_e, 0.0);
}

}  // namespace secnet
