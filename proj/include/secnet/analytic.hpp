#pragma once

// Closed-form and quadrature-based connection / secrecy-outage probabilities
// of a typical FD receiver, and the SIR thresholds that invert them.
//
// Functions return the raw formula value. Approximations can leave [0, 1]
// outside their validity region; clamping is left to the caller.

#include <vector>

#include "secnet/config.hpp"

namespace secnet {

enum class Side { lower, upper };
enum class OutageVariant { small_df, large_ne };

/// Aggregate interference coefficients of the bound / approximation formulas.
/// In multi-antenna mode `lambda_f_upper` is NaN (no upper bound exists there).
struct LambdaCoefficients {
  double lambda_f_lower = 0.0;
  double lambda_f_upper = 0.0;
  double lambda_h = 0.0;
};

LambdaCoefficients lambda_coefficients(const NetworkConfig& cfg);

/// Scaled derivatives y_m = s^m d^m/ds^m eta(s), m = 0..max_order, of the
/// log-Laplace transform eta of the aggregate interference at a single-antenna
/// FD receiver. y_0 = eta(s).
std::vector<double> laplace_exponent_scaled(double s, const NetworkConfig& cfg, int max_order);

/// order-th s-derivative of eta(s) (order 0 is eta itself).
double laplace_exponent_if(double s, const NetworkConfig& cfg, int order);

/// Exact connection probability of the single-antenna FD receiver.
double connection_probability_exact(double beta_t, const NetworkConfig& cfg);

/// Lower/upper bound in single-antenna mode; lower bound only in multi-antenna mode.
double connection_probability_bound(double beta_t, const NetworkConfig& cfg, Side side);

/// First-order approximation 1 - Lambda beta^delta K.
double fd_connection_approx(double beta_t, const NetworkConfig& cfg, Side side = Side::lower);

/// HD receiver connection approximation 1 - Lambda_h beta_c^delta K_{alpha,N_h}.
double hd_connection_approx(double beta_c, const NetworkConfig& cfg);

/// Exact single-antenna secrecy outage probability (nested quadrature).
double secrecy_outage_exact(double beta_e, const NetworkConfig& cfg);

/// Small-D_f approximation or its large-N_e envelope.
double secrecy_outage_approx(double beta_e, const NetworkConfig& cfg, OutageVariant variant);

/// Multi-antenna secrecy outage with N_j jamming streams (partition closed form).
double secrecy_outage_ma(double beta_e, const NetworkConfig& cfg);

/// Limit of secrecy_outage_ma as N_j grows without bound; cfg.n_j is ignored.
double secrecy_outage_ma_limit(double beta_e, const NetworkConfig& cfg);

/// beta_t at which the first-order FD approximation equals sigma.
double threshold_beta_t(double sigma, const NetworkConfig& cfg);

/// beta_e meeting the outage target epsilon: the large-N_e inverse in
/// single-antenna mode and for n_j = 1, a bisection on secrecy_outage_ma otherwise.
double threshold_beta_e(double epsilon, const NetworkConfig& cfg);

/// Closed-form inverse of the large-N_e outage expression.
double threshold_beta_e_large_ne(double epsilon, const NetworkConfig& cfg);

}  // namespace secnet
