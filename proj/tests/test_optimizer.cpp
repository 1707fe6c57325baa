#include <cmath>

#include "doctest.h"
#include "fd_weights.hpp"
#include "secnet/analytic.hpp"
#include "secnet/error.hpp"
#include "secnet/optimizer.hpp"

using namespace secnet;

namespace {

// Operating point of the figure 9 preset, single-antenna variant.
NetworkConfig base_config() {
  NetworkConfig c;
  c.p_t = 100.0;
  c.n_f = 8;
  c.n_e = 8;
  c.lambda_e = 1e-4;
  return c;
}

QoSTargets base_targets() {
  QoSTargets q;
  q.sigma = 0.9;
  q.sigma_c = 0.9;
  q.epsilon = 0.02;
  q.t_c = 1e-3;
  return q;
}

}  // namespace

TEST_CASE("constants reproduce the approximate thresholds") {
  const NetworkConfig c = base_config();
  const QoSTargets q = base_targets();
  const OptimizerConstants k = optimizer_constants(q, c);
  for (double lf : {1e-4, 1e-3, 1e-2}) {
    NetworkConfig at = c;
    at.lambda_f = lf;
    CHECK(k.x * std::pow(1.0 + k.y * lf, -0.5 * c.alpha) ==
          doctest::Approx(threshold_beta_t(q.sigma, at)).epsilon(1e-12));
    CHECK(k.z * std::pow(lf, -0.5 * c.alpha) ==
          doctest::Approx(threshold_beta_e(q.epsilon, at)).epsilon(1e-12));
  }
  CHECK(k.lambda_lower > 0.0);
  CHECK(k.lambda_upper > k.lambda_lower);
}

TEST_CASE("stationarity condition is dF/dlambda and G carries its sign") {
  const OptimizerConstants k = optimizer_constants(base_targets(), base_config());
  for (double f : {1.5, 3.0, 10.0, 100.0}) {
    const double lambda = k.lambda_lower * f;
    const double fd = testing::fd_derivative([&](double x) { return auxiliary_f(x, k); }, lambda, 1,
                                             1e-3 * lambda, 4);
    CHECK(stationarity_lhs(lambda, k, k.alpha) == doctest::Approx(fd).epsilon(1e-7));
    CHECK(stationarity_lhs(lambda, k, k.alpha) ==
          doctest::Approx(auxiliary_f(lambda, k) / lambda * auxiliary_g(lambda, k)).epsilon(1e-10));
  }
}

TEST_CASE("closed-form optimum maximizes throughput") {
  const NetworkConfig c = base_config();
  const QoSTargets q = base_targets();
  const ThroughputSolution sol = solve_optimal_density(q, c);
  REQUIRE(sol.feasible);
  REQUIRE(sol.lambda_f_star);
  const double l = *sol.lambda_f_star;
  CHECK(sol.t_s_star == doctest::Approx(throughput(l, q, c)).epsilon(1e-12));
  for (double f : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) {
    if (l * f > optimizer_constants(q, c).lambda_upper) continue;
    CHECK(throughput(l * f, q, c) <= sol.t_s_star * (1.0 + 1e-12));
  }
  CHECK(sol.r_s == doctest::Approx(sol.r_t - sol.r_e));
}

TEST_CASE("infeasible targets") {
  NetworkConfig c = base_config();
  QoSTargets q = base_targets();
  q.sigma = 0.999;
  q.epsilon = 1e-4;
  c.lambda_e = 1e-2;
  CHECK_FALSE(feasibility(q, c));
  CHECK_FALSE(solve_optimal_density(q, c).feasible);

  q = base_targets();
  q.t_c = 1.0;  // HD tier cannot deliver this
  CHECK_THROWS_AS(lambda_bounds(q, base_config()), Error);
  CHECK_FALSE(solve_optimal_density(q, base_config()).feasible);
}

TEST_CASE("closed-form feasibility agrees with lambda^L finiteness (single antenna)") {
  QoSTargets q = base_targets();
  for (double eps : {0.01, 0.05, 0.2, 0.5}) {
    for (double sigma : {0.5, 0.9, 0.99}) {
      q.epsilon = eps;
      q.sigma = sigma;
      const NetworkConfig c = base_config();
      CHECK(feasibility(q, c) == std::isfinite(optimizer_constants(q, c).lambda_lower));
    }
  }
}

TEST_CASE("multi-antenna: closed form for one stream, search otherwise") {
  NetworkConfig c = base_config();
  c.n_t = 6;
  c.n_j = 1;
  const QoSTargets q = base_targets();
  const ThroughputSolution one = solve_optimal_density(q, c);
  CHECK(one.feasible);
  CHECK(one.lambda_stationary.has_value());

  c.n_j = 3;
  const ThroughputSolution three = solve_optimal_density(q, c);
  REQUIRE(three.feasible);
  CHECK_FALSE(three.lambda_stationary.has_value());
  const double l = *three.lambda_f_star;
  for (double f : {0.8, 0.95, 1.05, 1.25}) {
    if (l * f > optimizer_constants(q, c).lambda_upper) continue;
    CHECK(throughput(l * f, q, c) <= three.t_s_star * (1.0 + 1e-9));
  }
  CHECK_THROWS_AS(feasibility(q, c), Error);
}

TEST_CASE("t_c = 0 removes the upper density limit") {
  QoSTargets q = base_targets();
  q.t_c = 0.0;
  const OptimizerConstants k = optimizer_constants(q, base_config());
  CHECK(std::isinf(k.lambda_upper));
  const ThroughputSolution sol = solve_optimal_density(q, base_config());
  CHECK(sol.feasible);
  CHECK(sol.lambda_f_star == sol.lambda_stationary);
}
