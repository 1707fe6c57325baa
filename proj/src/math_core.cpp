#include "secnet/math_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "secnet/error.hpp"

namespace secnet {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::domain, "path-loss exponent must exceed 2, got " + std::to_string(alpha));
  }
}

// Gamma(x + d) / Gamma(x) for x >= 1.
double gamma_ratio(double x, double d) {
  if (x + d < 150.0) return std::tgamma(x + d) / std::tgamma(x);
  return std::exp(std::lgamma(x + d) - std::lgamma(x));
}

void enumerate(int remaining, int max_part, PartitionTable::Row& prefix,
               std::vector<PartitionTable::Row>& out) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    enumerate(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

double delta_of(double alpha) {
  require_alpha(alpha);
  return 2.0 / alpha;
}

double c_alpha_n(double alpha, int n) {
  const double d = delta_of(alpha);
  if (n < 2) throw Error(ErrorCode::domain, "C_{alpha,N} needs N >= 2, got " + std::to_string(n));
  return std::numbers::pi * gamma_ratio(n - 1.0, d) * std::tgamma(1.0 - d);
}

double k_alpha_n(double alpha, int n) {
  const double d = delta_of(alpha);
  if (n < 1) throw Error(ErrorCode::domain, "K_{alpha,N} needs N >= 1, got " + std::to_string(n));
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < n; ++m) {
    term *= (m - 1 - d) / m;
    sum += term;
  }
  return sum;
}

DerivedConstants::DerivedConstants(double alpha, int max_n)
    : alpha_(alpha), delta_(delta_of(alpha)), max_n_(std::max(max_n, 2)) {
  c_.assign(max_n_ + 1, 0.0);
  k_.assign(max_n_ + 1, 0.0);
  for (int n = 2; n <= max_n_; ++n) c_[n] = c_alpha_n(alpha, n);
  double term = 1.0;
  k_[1] = 1.0;
  for (int n = 2; n <= max_n_; ++n) {
    term *= (n - 2 - delta_) / (n - 1);
    k_[n] = k_[n - 1] + term;
  }
}

double DerivedConstants::c(int n) const {
  if (n < 2 || n > max_n_) throw Error(ErrorCode::domain, "C_{alpha,N} index out of table: " + std::to_string(n));
  return c_[n];
}

double DerivedConstants::k(int n) const {
  if (n < 1 || n > max_n_) throw Error(ErrorCode::domain, "K_{alpha,N} index out of table: " + std::to_string(n));
  return k_[n];
}

double upsilon(int m, int n, double delta) {
  if (m < 1 || n < 1 || n > m) {
    throw Error(ErrorCode::domain, "upsilon needs 1 <= n <= m, got m=" + std::to_string(m) +
                                       " n=" + std::to_string(n));
  }
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::domain, "upsilon needs 0 < delta < 1");
  const int pick = m - n;
  // dp[j]: sum over subsets of the elements seen so far with j members, each
  // member weighted by its rank within the subset.
  std::vector<double> dp(pick + 1, 0.0);
  dp[0] = 1.0;
  for (int l = 1; l <= m - 1; ++l) {
    for (int j = std::min(pick - 1, l - 1); j >= 0; --j) {
      dp[j + 1] += dp[j] * (l - delta * (l - j));
    }
  }
  return dp[pick];
}

PartitionTable::PartitionTable(int k, std::vector<Row> rows) : k_(k), rows_(std::move(rows)) {}

const PartitionTable::Row& PartitionTable::row(std::size_t j) const {
  if (j >= rows_.size()) throw Error(ErrorCode::domain, "partition row index out of range");
  return rows_[j];
}

int PartitionTable::part_count(std::size_t j) const { return static_cast<int>(row(j).size()); }

int PartitionTable::entry(std::size_t i, std::size_t j) const {
  const Row& r = row(j);
  if (i >= r.size()) throw Error(ErrorCode::domain, "partition entry index out of range");
  return r[i];
}

std::vector<int> PartitionTable::multiplicities(std::size_t j) const {
  const Row& r = row(j);
  std::vector<int> counts;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i == 0 || r[i] != r[i - 1]) {
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }
  return counts;
}

int PartitionTable::distinct_count(std::size_t j) const {
  return static_cast<int>(multiplicities(j).size());
}

PartitionTable partitions(int k, int cap) {
  if (k < 0) throw Error(ErrorCode::domain, "partitions of a negative integer");
  if (k > cap) {
    throw Error(ErrorCode::resource, "partition table for k=" + std::to_string(k) +
                                         " exceeds cap " + std::to_string(cap));
  }
  std::vector<PartitionTable::Row> rows;
  PartitionTable::Row prefix;
  prefix.reserve(k);
  enumerate(k, k, prefix, rows);
  return PartitionTable(k, std::move(rows));
}

double xi_coefficient(const PartitionTable& table, std::size_t j, int streams, double delta) {
  if (streams < 1) throw Error(ErrorCode::domain, "jamming stream count must be >= 1");
  const PartitionTable::Row& r = table.row(j);
  double value = 1.0;
  for (int part : r) {
    for (int q = 1; q <= part; ++q) {
      value *= (streams + 1.0 - q) * (q - 1.0 - delta) / (q * (streams - q + delta));
    }
  }
  for (int mult : table.multiplicities(j)) value /= std::tgamma(mult + 1.0);
  return value;
}

std::vector<double> complete_bell(std::span<const double> x) {
  const std::size_t m = x.empty() ? 0 : x.size() - 1;
  std::vector<double> bell(m + 1, 0.0);
  bell[0] = 1.0;
  // Pascal row of binomial(n, i), updated in place as n grows.
  std::vector<double> binom(m + 1, 0.0);
  for (std::size_t n = 0; n < m; ++n) {
    binom[n] = 1.0;
    for (std::size_t i = n - 1; i >= 1 && i < n; --i) binom[i] += binom[i - 1];
    binom[0] = 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += binom[i] * bell[n - i] * x[i + 1];
    bell[n + 1] = acc;
  }
  return bell;
}

double exp_derivative(std::span<const double> eta_derivs) {
  if (eta_derivs.empty()) throw Error(ErrorCode::domain, "exp_derivative needs eta(s)");
  const auto bell = complete_bell(eta_derivs);
  return bell.back() * std::exp(eta_derivs[0]);
}

}  // namespace secnet
