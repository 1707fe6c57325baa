#include "secnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "secnet/error.hpp"
#include "secnet/math_core.hpp"
#include "secnet/quadrature.hpp"
#include "secnet/simd/kernels.hpp"

namespace secnet {

namespace {

constexpr double kPi = std::numbers::pi;

void require_single(const NetworkConfig& cfg, const char* what) {
  if (!cfg.single_antenna()) {
    throw Error(ErrorCode::mode, std::string(what) + " is defined for single-antenna jamming only");
  }
}

void require_multi(const NetworkConfig& cfg, const char* what) {
  if (cfg.single_antenna()) {
    throw Error(ErrorCode::mode, std::string(what) + " is defined for multi-antenna jamming only");
  }
}

// Falling factorial delta (delta - 1) ... (delta - m + 1).
double falling(double delta, int m) {
  double v = 1.0;
  for (int i = 0; i < m; ++i) v *= delta - i;
  return v;
}

// e^{-x} [1 + sum_{m=1}^{M} (1/m!) sum_{n=1}^{m} (delta x)^n Upsilon_{m,n}].
double bound_series(double x, double delta, int max_m) {
  double sum = 1.0;
  double inv_fact = 1.0;
  for (int m = 1; m <= max_m; ++m) {
    inv_fact /= m;
    double inner = 0.0;
    double pw = 1.0;
    for (int n = 1; n <= m; ++n) {
      pw *= delta * x;
      inner += pw * upsilon(m, n, delta);
    }
    sum += inv_fact * inner;
  }
  return std::exp(-x) * sum;
}

// Scaled s-derivatives of the cross term 2 int_0^inf int_0^pi (1-h_a)(1-h_b) r dtheta dr.
std::vector<double> cross_term_scaled(double s, const NetworkConfig& cfg, int max_order) {
  const std::size_t dim = static_cast<std::size_t>(max_order) + 1;
  const double alpha = cfg.alpha;
  const double df = cfg.d_f;
  const double inv_near = 1.0 / (cfg.p_f * s);
  const double inv_far = 1.0 / (cfg.p_t * s);
  const simd::KernelTable& kernels = simd::active();

  const quad::Tolerance inner_tol{1e-14, 1e-10, 2000};
  const quad::Tolerance outer_tol{1e-10, 1e-8, 4000};

  std::vector<double> near(dim);
  std::vector<double> d2;

  // Angular integral at radius r, all orders at once.
  auto angular = [&](double r, std::span<double> result) {
    const double t = std::pow(r, alpha) * inv_near;
    const double p = 1.0 / (1.0 + t);
    const double one_minus_p = t * p;
    near[0] = p;
    double pk = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= max_order; ++k) {
      pk *= p;
      fact *= k;
      near[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact * pk * one_minus_p;
    }
    const quad::BatchIntegrand inner = [&](std::span<const double> theta, std::span<double> out) {
      const std::size_t n = theta.size();
      d2.resize(n);
      const double diff = r - df;
      for (std::size_t i = 0; i < n; ++i) {
        const double sh = std::sin(0.5 * theta[i]);
        d2[i] = diff * diff + 4.0 * r * df * sh * sh;
      }
      kernels.pair_cross_derivatives(near.data(), max_order, d2.data(), n, 0.5 * alpha, inv_far,
                                     out.data());
    };
    const quad::Result res = quad::integrate(inner, 0.0, kPi, static_cast<int>(dim), inner_tol);
    for (std::size_t c = 0; c < dim; ++c) result[c] = 2.0 * res.value[c];
  };

  std::vector<double> slice(dim);
  const quad::BatchIntegrand radial = [&](std::span<const double> r, std::span<double> out) {
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
      angular(r[i], slice);
      for (std::size_t c = 0; c < dim; ++c) out[c * n + i] = slice[c] * r[i];
    }
  };

  const double reach = std::max({df, std::pow(cfg.p_f * s, 1.0 / alpha),
                                 std::pow(cfg.p_t * s, 1.0 / alpha)});
  const double r_split = df + 4.0 * reach;

  std::vector<double> total(dim, 0.0);
  auto accumulate = [&](const quad::Result& res) {
    for (std::size_t c = 0; c < dim; ++c) total[c] += res.value[c];
  };
  accumulate(quad::integrate(radial, 0.0, df, static_cast<int>(dim), outer_tol));
  accumulate(quad::integrate(radial, df, r_split, static_cast<int>(dim), outer_tol));

  // Tail r = r_split u^{-1/(alpha-1)}: the r^{1-2 alpha} decay becomes linear in u.
  const double g = 1.0 / (alpha - 1.0);
  std::vector<double> r_nodes;
  const quad::BatchIntegrand tail = [&](std::span<const double> u, std::span<double> out) {
    const std::size_t n = u.size();
    r_nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) r_nodes[i] = r_split * std::pow(u[i], -g);
    radial(r_nodes, out);
    for (std::size_t i = 0; i < n; ++i) {
      const double jac = g * r_nodes[i] / u[i];
      for (std::size_t c = 0; c < dim; ++c) out[c * n + i] *= jac;
    }
  };
  accumulate(quad::integrate(tail, 0.0, 1.0, static_cast<int>(dim), outer_tol));
  return total;
}

// e^{-t} sum_{j<k} t^j / j!.
double poisson_cdf_below(int k, double t) {
  double term = std::exp(-t);
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= t / (j + 1);
  }
  return sum;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Root of a non-increasing f(beta) - target in log beta, bracket grown geometrically.
template <class F>
double invert_decreasing(F&& f, double target, double start) {
  double lo = start;
  double hi = start;
  int grow = 0;
  while (f(lo) < target) {
    lo *= 0.5;
    if (++grow > 200) throw Error(ErrorCode::bracket, "outage target not reached for small beta_e");
  }
  grow = 0;
  while (f(hi) > target) {
    hi *= 2.0;
    if (++grow > 200) throw Error(ErrorCode::bracket, "outage stays above target for large beta_e");
  }
  if (lo == hi) return lo;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

LambdaCoefficients lambda_coefficients(const NetworkConfig& cfg) {
  const double delta = delta_of(cfg.alpha);
  const double c2 = c_alpha_n(cfg.alpha, 2);
  const double df2 = cfg.d_f * cfg.d_f;
  const double dh2 = cfg.d_h * cfg.d_h;
  const double hd_at_f = std::pow(cfg.p_hf(), delta) * cfg.lambda_h;
  LambdaCoefficients out;
  if (cfg.single_antenna()) {
    const double fd = (1.0 + std::pow(cfg.p_tf(), delta)) * cfg.lambda_f;
    out.lambda_f_lower = c2 * df2 * (hd_at_f + fd);
    out.lambda_f_upper = c2 * df2 * (hd_at_f + 0.5 * (1.0 + delta) * fd);
    out.lambda_h = c2 * dh2 *
                   (cfg.lambda_h + (std::pow(cfg.p_fh(), delta) + std::pow(cfg.p_th(), delta)) *
                                       cfg.lambda_f);
  } else {
    const double cj = c_alpha_n(cfg.alpha, cfg.n_j + 1);
    const double nj = cfg.n_j;
    out.lambda_f_lower = c2 * hd_at_f * df2 + c2 * cfg.lambda_f * df2 +
                         cj * std::pow(cfg.p_tf() / nj, delta) * cfg.lambda_f * df2;
    out.lambda_f_upper = std::numeric_limits<double>::quiet_NaN();
    out.lambda_h = c2 * cfg.lambda_h * dh2 + c2 * std::pow(cfg.p_fh(), delta) * cfg.lambda_f * dh2 +
                   cj * std::pow(cfg.p_th() / nj, delta) * cfg.lambda_f * dh2;
  }
  return out;
}

std::vector<double> laplace_exponent_scaled(double s, const NetworkConfig& cfg, int max_order) {
  require_single(cfg, "the FD Laplace exponent");
  cfg.validate();
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorCode::domain, "s must be finite and >= 0");
  if (max_order < 0) throw Error(ErrorCode::domain, "derivative order must be >= 0");
  const std::size_t dim = static_cast<std::size_t>(max_order) + 1;
  std::vector<double> y(dim, 0.0);
  if (s == 0.0) return y;

  const double delta = delta_of(cfg.alpha);
  const double c2 = c_alpha_n(cfg.alpha, 2);
  const double whole_plane = c2 * (cfg.lambda_h * std::pow(cfg.p_h * s, delta) +
                                   cfg.lambda_f * (std::pow(cfg.p_f * s, delta) +
                                                   std::pow(cfg.p_t * s, delta)));
  for (int m = 0; m <= max_order; ++m) y[m] = -whole_plane * falling(delta, m);

  if (cfg.lambda_f > 0.0) {
    const std::vector<double> cross = cross_term_scaled(s, cfg, max_order);
    for (std::size_t m = 0; m < dim; ++m) y[m] += cfg.lambda_f * cross[m];
  }
  return y;
}

double laplace_exponent_if(double s, const NetworkConfig& cfg, int order) {
  const std::vector<double> y = laplace_exponent_scaled(s, cfg, order);
  if (order == 0) return y[0];
  if (s == 0.0) {
    if (cfg.lambda_h == 0.0 && cfg.lambda_f == 0.0) return 0.0;
    throw Error(ErrorCode::domain, "derivatives of the Laplace exponent diverge at s = 0");
  }
  return y[order] / std::pow(s, order);
}

double connection_probability_exact(double beta_t, const NetworkConfig& cfg) {
  require_single(cfg, "the exact connection probability");
  cfg.validate();
  if (!(beta_t > 0.0)) throw Error(ErrorCode::domain, "beta_t must be positive");
  const int max_m = cfg.n_f - 3;
  const double s = std::pow(cfg.d_f, cfg.alpha) * beta_t / cfg.p_f;
  const std::vector<double> y = laplace_exponent_scaled(s, cfg, max_m);
  // Bell polynomials are homogeneous, so scaled derivatives give s^m d^m/ds^m e^eta directly.
  const std::vector<double> bell = complete_bell(y);
  double sum = 0.0;
  double inv_fact = 1.0;
  for (int m = 0; m <= max_m; ++m) {
    if (m > 0) inv_fact /= m;
    sum += ((m % 2 == 0) ? 1.0 : -1.0) * inv_fact * bell[m];
  }
  return std::clamp(std::exp(y[0]) * sum, 0.0, 1.0);
}

double connection_probability_bound(double beta_t, const NetworkConfig& cfg, Side side) {
  cfg.validate();
  if (!(beta_t >= 0.0)) throw Error(ErrorCode::domain, "beta_t must be non-negative");
  const double delta = delta_of(cfg.alpha);
  const LambdaCoefficients lc = lambda_coefficients(cfg);
  if (cfg.single_antenna()) {
    const double lambda = side == Side::lower ? lc.lambda_f_lower : lc.lambda_f_upper;
    return bound_series(lambda * std::pow(beta_t, delta), delta, cfg.n_f - 3);
  }
  if (side == Side::upper) {
    throw Error(ErrorCode::mode, "no upper bound exists for multi-antenna jamming");
  }
  return bound_series(lc.lambda_f_lower * std::pow(beta_t, delta), delta, cfg.n_f - cfg.n_t - 1);
}

double fd_connection_approx(double beta_t, const NetworkConfig& cfg, Side side) {
  cfg.validate();
  const double delta = delta_of(cfg.alpha);
  const LambdaCoefficients lc = lambda_coefficients(cfg);
  if (cfg.single_antenna()) {
    const double lambda = side == Side::lower ? lc.lambda_f_lower : lc.lambda_f_upper;
    return 1.0 - lambda * std::pow(beta_t, delta) * k_alpha_n(cfg.alpha, cfg.n_f - 2);
  }
  if (side == Side::upper) {
    throw Error(ErrorCode::mode, "no upper approximation exists for multi-antenna jamming");
  }
  return 1.0 -
         lc.lambda_f_lower * std::pow(beta_t, delta) * k_alpha_n(cfg.alpha, cfg.n_f - cfg.n_t);
}

double hd_connection_approx(double beta_c, const NetworkConfig& cfg) {
  cfg.validate();
  const double delta = delta_of(cfg.alpha);
  return 1.0 - lambda_coefficients(cfg).lambda_h * std::pow(beta_c, delta) *
                   k_alpha_n(cfg.alpha, cfg.n_h);
}

double secrecy_outage_exact(double beta_e, const NetworkConfig& cfg) {
  require_single(cfg, "the exact secrecy outage probability");
  cfg.validate();
  if (!(beta_e > 0.0)) throw Error(ErrorCode::domain, "beta_e must be positive");
  if (cfg.lambda_e == 0.0) return 0.0;
  if (cfg.lambda_f == 0.0) return 1.0;

  const double delta = delta_of(cfg.alpha);
  const double a = c_alpha_n(cfg.alpha, 2) * cfg.lambda_f * std::pow(cfg.p_tf() * beta_e, delta);
  const double gain = cfg.p_tf() * beta_e;
  const double half_alpha = 0.5 * cfg.alpha;
  const double df = cfg.d_f;
  const int ne = cfg.n_e;

  // Radial cutoff: beyond t = a r^2 the weight e^{-t} E_{N_e}(t) (1 + t) is below 1e-12.
  double t_max = 27.7;
  while (poisson_cdf_below(ne, t_max) * (1.0 + t_max) > 1e-12) t_max *= 1.1;
  const double r_max = std::sqrt(t_max / a);

  const simd::KernelTable& kernels = simd::active();
  std::vector<double> ratio;
  std::vector<double> powered;
  // Angular integrals Q_0 (weight 1/(1+u)) and Q_1 (weight u/(1+u)) at radius r.
  auto angular = [&](double r, double& q0, double& q1) {
    const quad::BatchIntegrand inner = [&](std::span<const double> theta, std::span<double> out) {
      const std::size_t n = theta.size();
      ratio.resize(n);
      powered.resize(n);
      const double diff = r - df;
      for (std::size_t i = 0; i < n; ++i) {
        const double sh = std::sin(0.5 * theta[i]);
        ratio[i] = (diff * diff + 4.0 * r * df * sh * sh) / (r * r);
      }
      // v = (D_oe / r)^alpha; u = gain / v, so 1/(1+u) = v/(v+gain).
      kernels.power(ratio.data(), n, half_alpha, powered.data());
      for (std::size_t i = 0; i < n; ++i) {
        const double v = powered[i];
        out[i] = v / (v + gain);
        out[n + i] = gain / (v + gain);
      }
    };
    const quad::Result res = quad::integrate(inner, 0.0, kPi, 2, {1e-14, 1e-11, 2000});
    q0 = 2.0 * res.value[0];
    q1 = 2.0 * res.value[1];
  };

  const quad::BatchIntegrand radial = [&](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      double q0 = 0.0;
      double q1 = 0.0;
      angular(r[i], q0, q1);
      const double t = a * r[i] * r[i];
      out[i] = (q0 * poisson_cdf_below(ne, t) + q1 * poisson_cdf_below(ne - 1, t)) * r[i];
    }
  };

  const quad::Tolerance tol{1e-10 / cfg.lambda_e, 1e-9, 4000};
  double integral = 0.0;
  if (df < r_max) {
    integral += quad::integrate(radial, 0.0, df, 1, tol).value[0];
    integral += quad::integrate(radial, df, r_max, 1, tol).value[0];
  } else {
    integral += quad::integrate(radial, 0.0, r_max, 1, tol).value[0];
  }
  return 1.0 - std::exp(-cfg.lambda_e * integral);
}

double secrecy_outage_approx(double beta_e, const NetworkConfig& cfg, OutageVariant variant) {
  cfg.validate();
  if (!cfg.single_antenna() && cfg.n_j != 1) {
    throw Error(ErrorCode::mode, "the single-stream outage approximation needs n_j = 1");
  }
  if (cfg.lambda_e == 0.0) return 0.0;
  if (cfg.lambda_f == 0.0) return 1.0;
  const double delta = delta_of(cfg.alpha);
  const double x = cfg.p_tf() * beta_e;
  const double scale = kPi * cfg.lambda_e /
                       (c_alpha_n(cfg.alpha, 2) * cfg.lambda_f * std::pow(x, delta));
  const double factor = variant == OutageVariant::small_df ? cfg.n_e - 1.0 + 1.0 / (1.0 + x)
                                                           : static_cast<double>(cfg.n_e);
  return 1.0 - std::exp(-scale * factor);
}

double secrecy_outage_ma(double beta_e, const NetworkConfig& cfg) {
  require_multi(cfg, "the multi-stream secrecy outage");
  cfg.validate();
  if (!(beta_e > 0.0)) throw Error(ErrorCode::domain, "beta_e must be positive");
  if (cfg.lambda_e == 0.0) return 0.0;
  if (cfg.lambda_f == 0.0) return 1.0;
  const double delta = delta_of(cfg.alpha);
  const int nj = cfg.n_j;
  const double x = cfg.p_tf() * beta_e / nj;
  const double base = std::pow(1.0 + x, -static_cast<double>(nj));

  // S_k = sum_j (-1)^{|xi_j|} |xi_j|! Xi_{j,k} for k < N_e.
  std::vector<double> s(static_cast<std::size_t>(cfg.n_e), 0.0);
  for (int k = 0; k < cfg.n_e; ++k) {
    const PartitionTable table = partitions(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
      const int parts = table.part_count(j);
      acc += ((parts % 2 == 0) ? 1.0 : -1.0) * std::tgamma(parts + 1.0) *
             xi_coefficient(table, j, nj, delta);
    }
    s[k] = acc;
  }

  double total = 0.0;
  for (int n = 0; n < cfg.n_e; ++n) {
    for (int i = 0; i <= std::min(n, nj); ++i) {
      total += binomial(nj, i) * std::pow(x, i - delta) * base * s[n - i];
    }
  }
  total *= kPi * cfg.lambda_e / (c_alpha_n(cfg.alpha, nj + 1) * cfg.lambda_f);
  return 1.0 - std::exp(-total);
}

double secrecy_outage_ma_limit(double beta_e, const NetworkConfig& cfg) {
  if (!(cfg.alpha > 2.0)) throw Error(ErrorCode::domain, "alpha must exceed 2");
  if (!(beta_e > 0.0)) throw Error(ErrorCode::domain, "beta_e must be positive");
  if (cfg.n_e < 1) throw Error(ErrorCode::domain, "n_e must be at least 1");
  if (cfg.lambda_e == 0.0) return 0.0;
  if (cfg.lambda_f == 0.0) return 1.0;
  const double delta = delta_of(cfg.alpha);
  const double x = cfg.p_tf() * beta_e;

  std::vector<double> t(static_cast<std::size_t>(cfg.n_e), 0.0);
  for (int k = 0; k < cfg.n_e; ++k) {
    const PartitionTable table = partitions(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
      double prod = 1.0;
      for (int part : table.row(j)) {
        for (int q = 1; q <= part; ++q) prod *= (q - 1 - delta) / q;
      }
      for (int mult : table.multiplicities(j)) prod /= std::tgamma(mult + 1.0);
      const int parts = table.part_count(j);
      acc += std::tgamma(parts + 1.0) * prod * ((parts % 2 == 0) ? 1.0 : -1.0);
    }
    t[k] = acc;
  }

  double total = 0.0;
  for (int n = 0; n < cfg.n_e; ++n) {
    double poisson = std::exp(-x) * std::pow(x, -delta);  // e^{-x} x^{i-delta} / i!
    for (int i = 0; i <= n; ++i) {
      if (i > 0) poisson *= x / i;
      total += poisson * t[n - i];
    }
  }
  total *= cfg.lambda_e / (std::tgamma(1.0 - delta) * cfg.lambda_f);
  return 1.0 - std::exp(-total);
}

double threshold_beta_t(double sigma, const NetworkConfig& cfg) {
  cfg.validate();
  const double delta = delta_of(cfg.alpha);
  const LambdaCoefficients lc = lambda_coefficients(cfg);
  const int order = cfg.single_antenna() ? cfg.n_f - 2 : cfg.n_f - cfg.n_t;
  return std::pow((1.0 - sigma) / (lc.lambda_f_lower * k_alpha_n(cfg.alpha, order)),
                  1.0 / delta);
}

double threshold_beta_e_large_ne(double epsilon, const NetworkConfig& cfg) {
  cfg.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::domain, "epsilon must lie in (0, 1)");
  if (cfg.lambda_e == 0.0) return 0.0;
  const double c2 = c_alpha_n(cfg.alpha, 2);
  const double inner = kPi * cfg.lambda_e * cfg.n_e /
                       (c2 * cfg.lambda_f * std::log(1.0 / (1.0 - epsilon)));
  return std::pow(inner, 0.5 * cfg.alpha) / cfg.p_tf();
}

double threshold_beta_e(double epsilon, const NetworkConfig& cfg) {
  cfg.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::domain, "epsilon must lie in (0, 1)");
  if (cfg.single_antenna() || cfg.n_j == 1) return threshold_beta_e_large_ne(epsilon, cfg);
  if (cfg.lambda_e == 0.0) return 0.0;
  if (cfg.lambda_f == 0.0) throw Error(ErrorCode::bracket, "no jamming: outage is 1 for every beta_e");
  const double start = std::max(threshold_beta_e_large_ne(epsilon, cfg), 1e-300);
  return invert_decreasing([&](double b) { return secrecy_outage_ma(b, cfg); }, epsilon, start);
}

}  // namespace secnet
