#pragma once

// Secrecy-throughput maximization over the FD-tier density lambda_f.
//
// With beta_t* = X (1 + Y lambda)^{-alpha/2} and beta_e* = Z lambda^{-alpha/2}
// the throughput is (sigma / ln 2) [F(lambda)]^+ with
// F(lambda) = lambda ln(f1 / f2), f1 = 1 + beta_t*, f2 = 1 + beta_e*. F is
// quasi-concave above lambda^L, so its stationary point is found by bisection.

#include <optional>
#include <string>
#include <utility>

#include "secnet/config.hpp"

namespace secnet {

struct OptimizerConstants {
  double alpha = 0.0;
  double x = 0.0;  // single-antenna X, Y, Z
  double y = 0.0;
  double z = 0.0;
  double x_t = 0.0;  // multi-antenna X~, Y~, Z~ (NaN in single-antenna mode; Z~ needs n_j = 1)
  double y_t = 0.0;
  double z_t = 0.0;
  double lambda_lower = 0.0;  // lambda_f^L; +inf when the targets are incompatible, 0 for n_j >= 2
  double lambda_upper = 0.0;  // lambda_f^U (or its multi-antenna form); +inf when t_c = 0
  bool multi_antenna = false;

  /// (X, Y, Z) of the active mode.
  double active_x() const noexcept { return multi_antenna ? x_t : x; }
  double active_y() const noexcept { return multi_antenna ? y_t : y; }
  double active_z() const noexcept { return multi_antenna ? z_t : z; }
};

OptimizerConstants optimizer_constants(const QoSTargets& targets, const NetworkConfig& cfg);

/// Whether the connection and secrecy targets admit a positive throughput for
/// some lambda_f. Single-antenna mode, or multi-antenna with n_j = 1.
bool feasibility(const QoSTargets& targets, const NetworkConfig& cfg);

/// (lambda_f^L, lambda_f^U). Throws Error(infeasible) when lambda_f^U <= 0.
std::pair<double, double> lambda_bounds(const QoSTargets& targets, const NetworkConfig& cfg);

/// F(lambda) = lambda ln(f1 / f2) in the active mode's constants.
double auxiliary_f(double lambda, const OptimizerConstants& consts);

/// G(lambda) = 1 + lambda f'(lambda) / f(lambda) with f = ln(f1 / f2), so that
/// F' = f G. Decreasing on (lambda^L, inf), which makes F unimodal there.
double auxiliary_g(double lambda, const OptimizerConstants& consts);

/// dF/dlambda written out in closed form; positive then negative above lambda^L.
double stationarity_lhs(double lambda, const OptimizerConstants& consts, double alpha);

struct ThroughputSolution {
  bool feasible = false;
  std::optional<double> lambda_f_star;
  /// Unconstrained stationary point (closed-form modes only).
  std::optional<double> lambda_stationary;
  double t_s_star = 0.0;
  double r_t = 0.0;
  double r_e = 0.0;
  double r_s = 0.0;
  std::string reason;
};

ThroughputSolution solve_optimal_density(const QoSTargets& targets, const NetworkConfig& cfg);

/// Network-wide secrecy throughput at FD-tier density lambda_f.
double throughput(double lambda_f, const QoSTargets& targets, const NetworkConfig& cfg);

}  // namespace secnet
