#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature over a finite interval.
//
// The integrand is evaluated a batch of nodes at a time and may be vector
// valued, so the expensive per-node work (path-loss powers) runs through the
// SIMD kernels and is shared between components.

#include <functional>
#include <span>
#include <vector>

namespace secnet::quad {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;
  int max_intervals = 4000;
};

/// f(nodes, values): values[c * nodes.size() + i] is component c at node i.
using BatchIntegrand = std::function<void(std::span<const double>, std::span<double>)>;

struct Result {
  std::vector<double> value;
  std::vector<double> error;
  int intervals = 0;
};

/// Integrates every component of `f` over [a, b]. Throws QuadratureError when
/// `max_intervals` subdivisions do not meet max(abs, rel |I|) for all components.
Result integrate(const BatchIntegrand& f, double a, double b, int components,
                 const Tolerance& tol = {});

/// Scalar convenience wrapper.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

}  // namespace secnet::quad
