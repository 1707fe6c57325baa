#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fd_weights.hpp"
#include "secnet/analytic.hpp"
#include "secnet/error.hpp"
#include "secnet/math_core.hpp"

using namespace secnet;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: log-Laplace transform of the interference at the typical
// FD receiver and its first s-derivative, by nested quadrature (Boost).
struct EtaPair {
  double value;
  double slope;
};

EtaPair eta_oracle(double s, const NetworkConfig& c) {
  const double delta = delta_of(c.alpha);
  const double c2 = c_alpha_n(c.alpha, 2);
  auto radial = [&](double r, bool slope) {
    auto f = [&](double th) {
      const double d2 = r * r + c.d_f * c.d_f - 2.0 * r * c.d_f * std::cos(th);
      const double ka = c.p_f * std::pow(r, -c.alpha);
      const double kb = c.p_t * std::pow(d2, -0.5 * c.alpha);
      const double ha = 1.0 / (1.0 + ka * s);
      const double hb = 1.0 / (1.0 + kb * s);
      if (!slope) return 1.0 - ha * hb;
      return ka * ha * ha * hb + kb * hb * hb * ha;
    };
    return 2.0 * gauss_kronrod<double, 31>::integrate(f, 0.0, kPi, 10, 1e-10) * r;
  };
  auto integral = [&](bool slope) {
    auto g = [&](double r) { return radial(r, slope); };
    const double cut = 4.0 * c.d_f + 10.0;
    return gauss_kronrod<double, 31>::integrate(g, 0.0, c.d_f, 10, 1e-9) +
           gauss_kronrod<double, 31>::integrate(g, c.d_f, cut, 10, 1e-9) +
           gauss_kronrod<double, 31>::integrate(g, cut, std::numeric_limits<double>::infinity(), 10,
                                                1e-9);
  };
  return {-c.lambda_h * c2 * std::pow(c.p_h * s, delta) - c.lambda_f * integral(false),
          -c.lambda_h * c2 * delta * std::pow(c.p_h, delta) * std::pow(s, delta - 1.0) -
              c.lambda_f * integral(true)};
}

// Connection probability for N_f <= 4, where only L and L' are needed.
double pt_oracle(double beta, const NetworkConfig& c) {
  const double s = std::pow(c.d_f, c.alpha) * beta / c.p_f;
  const EtaPair e = eta_oracle(s, c);
  const double l = std::exp(e.value);
  return c.n_f == 3 ? l : l - s * l * e.slope;
}

// Secrecy outage straight from the PGFL expression, integrating over the
// eavesdropper position in polar coordinates around the transmitter.
double pso_oracle(double beta, const NetworkConfig& c) {
  const double delta = delta_of(c.alpha);
  const double a = c_alpha_n(c.alpha, 2) * c.lambda_f * std::pow(c.p_tf() * beta, delta);
  auto q = [&](int i, double r) {
    auto f = [&](double th) {
      const double ratio = r / std::sqrt(r * r + c.d_f * c.d_f - 2.0 * r * c.d_f * std::cos(th));
      const double x = c.p_tf() * beta * std::pow(ratio, c.alpha);
      return std::pow(x, i) / (1.0 + x);
    };
    return 2.0 * gauss_kronrod<double, 31>::integrate(f, 0.0, kPi, 10, 1e-10);
  };
  auto radial = [&](double r) {
    const double qr[2] = {q(0, r), q(1, r)};
    double sum = 0.0;
    for (int n = 0; n <= c.n_e - 1; ++n) {
      for (int i = 0; i <= std::min(n, 1); ++i) {
        const int k = n - i;
        double kf = 1.0;
        for (int j = 2; j <= k; ++j) kf *= j;
        sum += std::pow(a, k) / kf * qr[i] * std::pow(r, 2 * k);
      }
    }
    return sum * std::exp(-a * r * r) * r;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const double i1 = gauss_kronrod<double, 31>::integrate(radial, 0.0, c.d_f, 10, 1e-9);
  const double i2 = gauss_kronrod<double, 31>::integrate(radial, c.d_f, 3.0 * c.d_f, 10, 1e-9);
  const double i3 = gauss_kronrod<double, 31>::integrate(radial, 3.0 * c.d_f, inf, 10, 1e-9);
  return 1.0 - std::exp(-c.lambda_e * (i1 + i2 + i3));
}

NetworkConfig ma_config(int n_j, int n_t, int n_f) {
  NetworkConfig c;
  c.n_t = n_t;
  c.n_j = n_j;
  c.n_f = n_f;
  return c;
}

}  // namespace

TEST_CASE("Laplace exponent matches brute-force quadrature") {
  NetworkConfig c;
  c.lambda_f = 2e-3;
  c.p_t = 3.0;
  c.d_f = 1.5;
  for (double s : {0.05, 7.0}) {
    const std::vector<double> y = laplace_exponent_scaled(s, c, 1);
    const EtaPair e = eta_oracle(s, c);
    CAPTURE(s);
    // The oracle integrates the slow r^(1-alpha) tail head-on and only settles to ~1e-7.
    CHECK(y[0] == doctest::Approx(e.value).epsilon(1e-6));
    CHECK(y[1] == doctest::Approx(s * e.slope).epsilon(1e-8));
  }
  CHECK(laplace_exponent_scaled(0.0, c, 3) == std::vector<double>(4, 0.0));
  CHECK_THROWS_AS(laplace_exponent_if(0.0, c, 1), Error);
}

TEST_CASE("each derivative order is the derivative of the previous one") {
  NetworkConfig c;
  c.lambda_f = 2e-2;
  c.d_f = 0.7;
  for (double s : {0.5, 2.0}) {
    const std::vector<double> y = laplace_exponent_scaled(s, c, 8);
    for (int m = 1; m <= 8; ++m) {
      CHECK(laplace_exponent_if(s, c, m) == doctest::Approx(y[m] / std::pow(s, m)).epsilon(1e-12));
      const double fd = testing::fd_derivative(
          [&](double x) { return laplace_exponent_if(x, c, m - 1); }, s, 1, 0.01 * s, 4);
      CHECK(laplace_exponent_if(s, c, m) == doctest::Approx(fd).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact connection probability against the oracle") {
  for (int nf : {3, 4}) {
    NetworkConfig c;
    c.n_f = nf;
    c.lambda_f = 5e-3;
    const double exact = connection_probability_exact(2.0, c);
    CHECK(exact == doctest::Approx(pt_oracle(2.0, c)).epsilon(1e-7));
  }
}

TEST_CASE("closed-form bounds around the exact value") {
  for (int nf : {3, 4, 6, 8}) {
    for (double lf : {1e-4, 1e-3, 5e-3, 2e-2}) {
      for (double beta : {0.5, 1.0, 4.0}) {
        NetworkConfig c;
        c.n_f = nf;
        c.lambda_f = lf;
        const double lo = connection_probability_bound(beta, c, Side::lower);
        const double hi = connection_probability_bound(beta, c, Side::upper);
        const double ex = connection_probability_exact(beta, c);
        CAPTURE(nf);
        CAPTURE(lf);
        CAPTURE(beta);
        CHECK(ex <= hi + 1e-12);
        if (nf == 3) {
          // Only the m = 0 term: the Laplace-transform ordering carries over directly.
          CHECK(lo <= ex + 1e-12);
        } else {
          // With derivative terms the lower expression can overshoot slightly.
          CHECK(lo <= ex + 2e-3);
        }
      }
    }
  }
}

TEST_CASE("pure power-law exponent: exact and both bounds coincide") {
  for (int nf : {3, 5, 8, 12}) {
    NetworkConfig c;
    c.n_f = nf;
    c.lambda_f = 0.0;
    c.lambda_h = 2e-2;
    const double ex = connection_probability_exact(0.5, c);
    CHECK(connection_probability_bound(0.5, c, Side::lower) == doctest::Approx(ex).epsilon(1e-13));
    CHECK(connection_probability_bound(0.5, c, Side::upper) == doctest::Approx(ex).epsilon(1e-13));
  }
}

TEST_CASE("no FD tier: exact connection reduces to the HD term") {
  NetworkConfig c;
  c.lambda_f = 0.0;
  c.n_f = 3;
  const double s = 1.0;
  CHECK(connection_probability_exact(1.0, c) ==
        doctest::Approx(std::exp(-c.lambda_h * c_alpha_n(c.alpha, 2) * std::pow(s, delta_of(c.alpha))))
            .epsilon(1e-13));
}

TEST_CASE("first-order approximations and thresholds") {
  NetworkConfig c;
  c.n_f = 6;
  const double beta = threshold_beta_t(0.95, c);
  CHECK(fd_connection_approx(beta, c) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(hd_connection_approx(0.0, c) == 1.0);
  const LambdaCoefficients l = lambda_coefficients(c);
  CHECK(l.lambda_f_lower > l.lambda_f_upper);
  CHECK(std::isnan(lambda_coefficients(ma_config(1, 2, 4)).lambda_f_upper));
  CHECK_THROWS_AS(connection_probability_bound(1.0, ma_config(1, 2, 4), Side::upper), Error);
  CHECK_THROWS_AS(connection_probability_exact(1.0, ma_config(1, 2, 4)), Error);
}

TEST_CASE("exact secrecy outage against the oracle") {
  for (double df : {0.5, 1.0, 2.0}) {
    for (double le : {1e-4, 1e-3}) {
      NetworkConfig c;
      c.p_t = 10.0;
      c.d_f = df;
      c.lambda_e = le;
      CHECK(secrecy_outage_exact(1.0, c) == doctest::Approx(pso_oracle(1.0, c)).epsilon(1e-7));
    }
  }
}

TEST_CASE("secrecy outage limits") {
  NetworkConfig c;
  c.lambda_e = 0.0;
  CHECK(secrecy_outage_exact(1.0, c) == 0.0);
  c.lambda_e = 1e-4;
  c.lambda_f = 0.0;
  CHECK(secrecy_outage_exact(1.0, c) == 1.0);
  c = {};
  c.d_f = 1e-3;
  CHECK(secrecy_outage_exact(1.0, c) ==
        doctest::Approx(secrecy_outage_approx(1.0, c, OutageVariant::small_df)).epsilon(1e-5));
  c.n_e = 64;
  CHECK(secrecy_outage_approx(1.0, c, OutageVariant::small_df) <=
        secrecy_outage_approx(1.0, c, OutageVariant::large_ne));
}

TEST_CASE("multi-stream outage: single stream and many-stream limits") {
  for (int ne : {1, 2, 4, 8}) {
    NetworkConfig c = ma_config(1, 2, 4);
    c.n_e = ne;
    c.p_t = 10.0;
    const double ma = secrecy_outage_ma(1.0, c);
    const double sa = secrecy_outage_approx(1.0, c, OutageVariant::small_df);
    CHECK(std::abs(ma - sa) <= 1e-12 * sa);
  }
  NetworkConfig c = ma_config(40, 41, 42);
  c.n_e = 4;
  const double lim = secrecy_outage_ma_limit(1.0, c);
  double previous = 2.0;
  for (int nj : {5, 10, 20, 40}) {
    c.n_j = nj;
    const double gap = std::abs(secrecy_outage_ma(1.0, c) - lim);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 5e-3);
  CHECK_THROWS_AS(secrecy_outage_ma(1.0, NetworkConfig{}), Error);
}

TEST_CASE("beta_e thresholds invert the outage expressions") {
  NetworkConfig c;
  c.lambda_e = 1e-3;
  const double b = threshold_beta_e(0.1, c);
  CHECK(b == threshold_beta_e_large_ne(0.1, c));
  CHECK(secrecy_outage_approx(b, c, OutageVariant::large_ne) == doctest::Approx(0.1).epsilon(1e-12));

  NetworkConfig m = ma_config(3, 4, 6);
  m.lambda_e = 1e-3;
  const double bm = threshold_beta_e(0.05, m);
  CHECK(secrecy_outage_ma(bm, m) == doctest::Approx(0.05).epsilon(1e-9));

  m.lambda_e = 0.0;
  CHECK(threshold_beta_e_large_ne(0.1, m) == 0.0);
  CHECK_THROWS_AS(threshold_beta_e(1.0, c), Error);
}
