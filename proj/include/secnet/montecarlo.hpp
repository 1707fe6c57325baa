#pragma once

// Monte Carlo simulation of the two-tier network: Poisson point sets in a
// disk, Rayleigh fading and the receivers' combiners, used as an independent
// check on the analytic expressions.
//
// Nodes outside the disk are not dropped: their mean interference is added
// back (a scalar at the receivers, a multiple of the identity in the
// eavesdropper covariance). Each far node is weak, so this is the first-order
// term of the probability generating functional. Eavesdroppers are placed in
// the inner half of the disk, where that tail stays small.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "secnet/config.hpp"
#include "secnet/random.hpp"

namespace secnet {

struct SimSettings {
  long long trials = 10000;
  /// Smallest disk radius; the disk grows so that it holds about 200 FD receivers.
  double window_radius = 100.0;
  std::uint64_t seed = 1;
  double confidence_level = 0.95;
  int threads = 0;  // 0: one worker per hardware thread
  /// Ridge added to a rank-deficient eavesdropper covariance, relative to trace/N_e.
  /// A value of 0 disables it; a singular covariance then raises an error.
  double ridge = 1e-12;

  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Node positions of one trial. The typical receiver sits at the origin and is
/// not part of these sets; its transmitter is at (D, 0).
struct NetworkRealization {
  std::vector<Point> hd_rx;
  std::vector<Point> hd_tx;
  std::vector<Point> fd_rx;
  std::vector<Point> fd_tx;
  std::vector<Point> eve;  // within window / 2
  double window = 0.0;
};

struct ProbabilityEstimate {
  double value = 0.0;
  double half_width = 0.0;
  long long trials = 0;
  long long hits = 0;
};

/// Normal-approximation interval z sqrt(v (1 - v) / n) at `confidence`.
ProbabilityEstimate make_estimate(long long hits, long long trials, double confidence);

/// Disk radius used for `cfg`: window_radius, enlarged for sparse FD tiers (at most 20x).
double effective_window(const NetworkConfig& cfg, const SimSettings& sim);

NetworkRealization sample_network(const NetworkConfig& cfg, const SimSettings& sim,
                                  long long trial_index);

/// Fraction of trials with SIR at the typical FD receiver above beta_t.
ProbabilityEstimate estimate_fd_connection(double beta_t, const NetworkConfig& cfg,
                                           const SimSettings& sim);

/// Fraction of trials with SIR at a typical HD receiver (MRC) above beta_c.
ProbabilityEstimate estimate_hd_connection(double beta_c, const NetworkConfig& cfg,
                                           const SimSettings& sim);

/// Fraction of trials in which some MMSE eavesdropper reaches SIR >= beta_e.
ProbabilityEstimate estimate_secrecy_outage(double beta_e, const NetworkConfig& cfg,
                                            const SimSettings& sim);

namespace mc {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Integral of |x - p|^{-alpha} over |x| > window for a point at distance s < window
/// from the center. Multiply by density and power for the mean tail interference.
double outside_window_interference(double s, double window, double alpha);

/// n i.i.d. CN(0, 1) entries.
CVector complex_gaussian(Eigen::Index n, PhiloxStream& rng);
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, PhiloxStream& rng);

/// Unit-norm ZF-MRC combiner: the projection of `desired` onto the orthogonal
/// complement of `self_interference`, normalized.
CVector zf_mrc_weight(const CVector& desired, const CVector& self_interference);

/// Orthonormal columns (count of them) spanning part of the null space of the row
/// vector `row`, i.e. row * basis = 0.
CMatrix null_space_basis(const Eigen::RowVectorXcd& row, Eigen::Index count);

/// g^H R^{-1} g for Hermitian positive semidefinite R; `ridge` is applied
/// (relative to trace/n) when R is not positive definite.
double mmse_gain(const CVector& g, const CMatrix& cov, double ridge);

/// |g^H g|^2 / (g^H R g): SIR gain of matched filtering on the same draw.
double mrc_gain(const CVector& g, const CMatrix& cov);

}  // namespace mc

}  // namespace secnet
