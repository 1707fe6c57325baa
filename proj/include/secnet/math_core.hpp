#pragma once

// Special-function constants, combinatorial sums and derivative composition
// shared by all closed-form probability expressions.

#include <cstddef>
#include <span>
#include <vector>

namespace secnet {

/// Path-loss shape parameter 2/alpha. Requires alpha > 2.
double delta_of(double alpha);

/// C_{alpha,N} = pi Gamma(N-1+delta) Gamma(1-delta) / Gamma(N-1), N >= 2.
double c_alpha_n(double alpha, int n);

/// K_{alpha,N} = 1 + sum_{m=1}^{N-1} (1/m!) prod_{l=0}^{m-1} (l - delta), N >= 1.
double k_alpha_n(double alpha, int n);

/// Eagerly tabulated delta, C_{alpha,N} and K_{alpha,N} for one path-loss exponent.
///
/// Built once per configuration and read-only afterwards, so a single instance
/// can be shared between sweep workers.
class DerivedConstants {
 public:
  DerivedConstants(double alpha, int max_n);

  double alpha() const noexcept { return alpha_; }
  double delta() const noexcept { return delta_; }
  int max_n() const noexcept { return max_n_; }

  /// C_{alpha,n} for 2 <= n <= max_n.
  double c(int n) const;
  /// K_{alpha,n} for 1 <= n <= max_n.
  double k(int n) const;

 private:
  double alpha_;
  double delta_;
  int max_n_;
  std::vector<double> c_;
  std::vector<double> k_;
};

/// Upsilon_{m,n}: sum over the (m-n)-subsets {l_1 < ... < l_{m-n}} of {1..m-1}
/// of prod_i (l_i - delta (l_i - i + 1)). Upsilon_{m,m} = 1.
double upsilon(int m, int n, double delta);

inline constexpr int kDefaultPartitionCap = 40;

/// All integer partitions of k, rows in reverse-lexicographic order
/// (largest-first, so the last row is k ones).
///
/// For k = 0 the table holds a single empty row: one partition with zero parts.
class PartitionTable {
 public:
  using Row = std::vector<int>;

  PartitionTable(int k, std::vector<Row> rows);

  int k() const noexcept { return k_; }
  /// Number of partitions, |xi_k|.
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  const Row& row(std::size_t j) const;

  /// Number of parts of row j, |xi_{j,k}|.
  int part_count(std::size_t j) const;
  /// i-th part (0-based) of row j, xi_{i,j,k}.
  int entry(std::size_t i, std::size_t j) const;
  /// Multiplicity of each distinct value in row j, largest value first (phi_{.,j,k}).
  std::vector<int> multiplicities(std::size_t j) const;
  /// Number of distinct values in row j, |phi_{j,k}|.
  int distinct_count(std::size_t j) const;

 private:
  int k_;
  std::vector<Row> rows_;
};

/// Enumerates the partitions of k. Throws a resource error when k > cap.
PartitionTable partitions(int k, int cap = kDefaultPartitionCap);

/// Xi_{j,n} for row j of `table` (n = table.k()) with `streams` jamming streams:
///   prod_parts prod_{q=1}^{part} (N+1-q)(q-1-delta) / (q (N-q+delta))  /  prod phi!
/// Xi_{j,0} = 1.
double xi_coefficient(const PartitionTable& table, std::size_t j, int streams, double delta);

/// Complete Bell polynomials B_0..B_m of (x_1..x_m); `x[0]` is ignored.
std::vector<double> complete_bell(std::span<const double> x);

/// d^m/ds^m exp(eta(s)) given eta_derivs = (eta, eta', ..., eta^(m)).
double exp_derivative(std::span<const double> eta_derivs);

}  // namespace secnet
