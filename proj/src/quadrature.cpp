#include "secnet/quadrature.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <sstream>

#include "secnet/error.hpp"

namespace secnet::quad {

namespace {

constexpr int kPoints = 21;
constexpr int kHalf = 11;

struct Rule {
  // Full node set on [-1, 1] (kPoints) with Kronrod and embedded Gauss weights.
  std::array<double, kPoints> nodes{};
  std::array<double, kPoints> kronrod{};
  std::array<double, kPoints> gauss{};
};

const Rule& rule() {
  static const Rule r = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& kx = gauss_kronrod<double, kPoints>::abscissa();
    const auto& kw = gauss_kronrod<double, kPoints>::weights();
    const auto& gw = gauss<double, 10>::weights();
    Rule out;
    // kx[0] = 0; odd positive indices are the 10-point Gauss nodes.
    out.nodes[kHalf - 1] = kx[0];
    out.kronrod[kHalf - 1] = kw[0];
    for (int i = 1; i < kHalf; ++i) {
      const double g = (i % 2 == 1) ? gw[(i - 1) / 2] : 0.0;
      out.nodes[kHalf - 1 - i] = -kx[i];
      out.nodes[kHalf - 1 + i] = kx[i];
      out.kronrod[kHalf - 1 - i] = out.kronrod[kHalf - 1 + i] = kw[i];
      out.gauss[kHalf - 1 - i] = out.gauss[kHalf - 1 + i] = g;
    }
    return out;
  }();
  return r;
}

struct Interval {
  double a;
  double b;
  std::vector<double> value;
  std::vector<double> error;
  double score;

  bool operator<(const Interval& other) const { return score < other.score; }
};

}  // namespace

Result integrate(const BatchIntegrand& f, double a, double b, int components,
                 const Tolerance& tol) {
  const Rule& gk = rule();
  const std::size_t dim = static_cast<std::size_t>(components);

  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> scale(dim, tol.abs);

  // Evaluates the rule on each [lo, hi] pair in one batched integrand call.
  auto evaluate = [&](std::span<const std::pair<double, double>> pieces) {
    const std::size_t count = pieces.size() * kPoints;
    nodes.resize(count);
    values.assign(count * dim, 0.0);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      const double mid = 0.5 * (pieces[p].first + pieces[p].second);
      const double half = 0.5 * (pieces[p].second - pieces[p].first);
      for (int i = 0; i < kPoints; ++i) nodes[p * kPoints + i] = mid + half * gk.nodes[i];
    }
    f(nodes, values);
    std::vector<Interval> out;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      const double half = 0.5 * (pieces[p].second - pieces[p].first);
      Interval iv{pieces[p].first, pieces[p].second, std::vector<double>(dim),
                  std::vector<double>(dim), 0.0};
      for (std::size_t c = 0; c < dim; ++c) {
        double kr = 0.0;
        double ga = 0.0;
        for (int i = 0; i < kPoints; ++i) {
          const double v = values[c * count + p * kPoints + i];
          kr += gk.kronrod[i] * v;
          ga += gk.gauss[i] * v;
        }
        iv.value[c] = kr * half;
        iv.error[c] = std::abs((kr - ga) * half);
      }
      out.push_back(std::move(iv));
    }
    return out;
  };

  auto score_of = [&](const Interval& iv) {
    double s = 0.0;
    for (std::size_t c = 0; c < dim; ++c) s = std::max(s, iv.error[c] / scale[c]);
    return s;
  };

  const std::pair<double, double> whole{a, b};
  Interval first = std::move(evaluate({&whole, 1}).front());
  for (std::size_t c = 0; c < dim; ++c) {
    scale[c] = std::max(tol.abs, tol.rel * std::abs(first.value[c]));
  }
  first.score = score_of(first);

  std::priority_queue<Interval> heap;
  std::vector<double> total = first.value;
  std::vector<double> total_err = first.error;
  heap.push(std::move(first));
  int intervals = 1;

  auto converged = [&] {
    for (std::size_t c = 0; c < dim; ++c) {
      const double target = std::max(tol.abs, tol.rel * std::abs(total[c]));
      if (!(total_err[c] <= target)) return false;
    }
    return true;
  };

  while (!converged()) {
    if (intervals >= tol.max_intervals) {
      double achieved = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        achieved = std::max(achieved, total_err[c] / std::max(std::abs(total[c]), tol.abs));
      }
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] stopped after " << intervals
          << " intervals with relative error " << achieved;
      throw QuadratureError(msg.str(), achieved);
    }
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const std::array<std::pair<double, double>, 2> halves{{{worst.a, mid}, {mid, worst.b}}};
    auto children = evaluate(halves);
    for (std::size_t c = 0; c < dim; ++c) {
      total[c] += children[0].value[c] + children[1].value[c] - worst.value[c];
      total_err[c] += children[0].error[c] + children[1].error[c] - worst.error[c];
    }
    for (auto& child : children) {
      child.score = score_of(child);
      heap.push(std::move(child));
    }
    ++intervals;
  }

  // Re-sum from the leaves so the running updates do not leave cancellation residue.
  Result result{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), intervals};
  while (!heap.empty()) {
    const Interval& iv = heap.top();
    for (std::size_t c = 0; c < dim; ++c) {
      result.value[c] += iv.value[c];
      result.error[c] += iv.error[c];
    }
    heap.pop();
  }
  return result;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
  const BatchIntegrand batch = [&f](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  };
  return integrate(batch, a, b, 1, tol).value.front();
}

}  // namespace secnet::quad
