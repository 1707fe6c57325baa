#include "secnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "secnet/error.hpp"
#include "secnet/simd/kernels.hpp"

namespace secnet {

namespace {

// Substream ids inside one trial's key space.
enum Substream : std::uint32_t { kGeometry = 0, kFadingFd = 1, kFadingHd = 2, kFadingEve = 3 };

constexpr double kNullingTolerance = 1e-10;
constexpr long long kChunk = 64;

// Window sizing: enough FD receivers for the MMSE eavesdroppers to see a
// realistic jammer field, without letting sparse tiers blow up the disk.
constexpr double kTargetJammers = 200.0;
constexpr double kMaxWindowScale = 20.0;

void scatter(double lambda, double radius, double pair_distance, PhiloxStream& rng,
             std::vector<Point>& rx, std::vector<Point>* tx) {
  if (lambda <= 0.0) return;
  std::poisson_distribution<long long> count(lambda * std::numbers::pi * radius * radius);
  const long long n = count(rng);
  rx.reserve(static_cast<std::size_t>(n));
  if (tx) tx->reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const Point p{r * std::cos(phi), r * std::sin(phi)};
    rx.push_back(p);
    if (tx) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      tx->push_back({p.x + pair_distance * std::cos(theta), p.y + pair_distance * std::sin(theta)});
    }
  }
}

double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Runs `trial(index) -> bool` for every trial index and counts the true results.
// Each index owns its random streams, so the split across workers is irrelevant.
template <class Trial>
ProbabilityEstimate run_trials(const SimSettings& sim, Trial&& trial) {
  sim.validate();
  int workers = sim.threads > 0 ? sim.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long long>(workers, (sim.trials + kChunk - 1) / kChunk));
  workers = std::max(workers, 1);

  std::atomic<long long> next{0};
  std::atomic<long long> hits{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    long long local = 0;
    try {
      for (;;) {
        const long long begin = next.fetch_add(kChunk);
        if (begin >= sim.trials) break;
        const long long end = std::min(begin + kChunk, sim.trials);
        for (long long t = begin; t < end; ++t) local += trial(t) ? 1 : 0;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(sim.trials);
    }
    hits.fetch_add(local);
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return make_estimate(hits.load(), sim.trials, sim.confidence_level);
}

// Collects interferer (squared distance, power x fading) pairs seen from `at`.
struct InterferenceSum {
  std::vector<double> d2;
  std::vector<double> weight;

  void add(const std::vector<Point>& sources, const Point& at, double power,
           const std::function<double()>& fading) {
    for (const Point& p : sources) {
      d2.push_back(dist2(p, at));
      weight.push_back(power * fading());
    }
  }

  double total(double alpha) const {
    return simd::weighted_power_sum(d2, weight, -0.5 * alpha);
  }
};

// Adds FD-receiver jamming as seen through a unit-norm combiner: one stream
// gives Exp(1) fading, N_j streams of power P_t/N_j give Gamma(N_j, 1)/N_j.
std::function<double()> jamming_fading(const NetworkConfig& cfg, PhiloxStream& rng) {
  if (cfg.single_antenna()) {
    return [&rng] { return std::exponential_distribution<double>(1.0)(rng); };
  }
  const double nj = cfg.n_j;
  return [&rng, nj] { return std::gamma_distribution<double>(nj, 1.0)(rng) / nj; };
}

// Power-weighted density of every interferer tier at a receiver.
double tail_density(const NetworkConfig& cfg) {
  return cfg.lambda_h * cfg.p_h + cfg.lambda_f * (cfg.p_f + cfg.p_t);
}

}  // namespace

void SimSettings::validate() const {
  if (trials < 1) throw Error(ErrorCode::config, "trials must be at least 1");
  if (!(window_radius > 0.0)) throw Error(ErrorCode::config, "window_radius must be positive");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw Error(ErrorCode::config, "confidence_level must lie in (0, 1)");
  }
  if (threads < 0) throw Error(ErrorCode::config, "threads must be >= 0");
  if (!(ridge >= 0.0)) throw Error(ErrorCode::config, "ridge must be >= 0");
}

ProbabilityEstimate make_estimate(long long hits, long long trials, double confidence) {
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 0.5 + 0.5 * confidence);
  const double v = static_cast<double>(hits) / static_cast<double>(trials);
  return {v, z * std::sqrt(v * (1.0 - v) / static_cast<double>(trials)), trials, hits};
}

double effective_window(const NetworkConfig& cfg, const SimSettings& sim) {
  double w = sim.window_radius;
  if (cfg.lambda_f > 0.0) {
    w = std::max(w, std::sqrt(kTargetJammers / (std::numbers::pi * cfg.lambda_f)));
  }
  return std::min(w, kMaxWindowScale * sim.window_radius);
}

NetworkRealization sample_network(const NetworkConfig& cfg, const SimSettings& sim,
                                  long long trial_index) {
  if (trial_index < 0) throw Error(ErrorCode::domain, "trial index must be non-negative");
  PhiloxStream rng(sim.seed, static_cast<std::uint64_t>(trial_index), kGeometry);
  NetworkRealization net;
  net.window = effective_window(cfg, sim);
  scatter(cfg.lambda_h, net.window, cfg.d_h, rng, net.hd_rx, &net.hd_tx);
  scatter(cfg.lambda_f, net.window, cfg.d_f, rng, net.fd_rx, &net.fd_tx);
  scatter(cfg.lambda_e, 0.5 * net.window, 0.0, rng, net.eve, nullptr);
  return net;
}

ProbabilityEstimate estimate_fd_connection(double beta_t, const NetworkConfig& cfg,
                                           const SimSettings& sim) {
  cfg.validate();
  const Point origin{};
  const double signal_scale = cfg.p_f * std::pow(cfg.d_f, -cfg.alpha);
  return run_trials(sim, [&](long long t) {
    const NetworkRealization net = sample_network(cfg, sim, t);
    PhiloxStream rng(sim.seed, static_cast<std::uint64_t>(t), kFadingFd);

    double gain = 0.0;
    if (cfg.single_antenna()) {
      // N_f - 1 receive antennas; the combiner nulls the self-interference channel.
      while (!(gain > 0.0)) {
        const mc::CVector f = mc::complex_gaussian(cfg.n_f - 1, rng);
        const mc::CVector f_oo = mc::complex_gaussian(cfg.n_f - 1, rng);
        const mc::CVector w = mc::zf_mrc_weight(f, f_oo);
        if (std::abs(w.dot(f_oo)) > kNullingTolerance * f_oo.norm()) {
          throw Error(ErrorCode::domain, "ZF-MRC combiner failed to null self-interference");
        }
        gain = std::norm(w.dot(f));
      }
    } else {
      // N_f - N_t receive antennas with MRC; jamming precoded into the null
      // space of the combined self-interference channel.
      const Eigen::Index nr = cfg.n_f - cfg.n_t;
      mc::CVector f;
      while (!(gain > 0.0)) {
        f = mc::complex_gaussian(nr, rng);
        gain = f.squaredNorm();
      }
      const mc::CMatrix f_oo = mc::complex_gaussian(nr, cfg.n_t, rng);
      const Eigen::RowVectorXcd combined = (f.adjoint() / f.norm()) * f_oo;
      const mc::CMatrix precoder = mc::null_space_basis(combined, cfg.n_j);
      if ((combined * precoder).norm() > kNullingTolerance) {
        throw Error(ErrorCode::domain, "jamming precoder leaks into the receive combiner");
      }
    }

    std::exponential_distribution<double> fading(1.0);
    const std::function<double()> rayleigh = [&] { return fading(rng); };
    InterferenceSum sum;
    sum.add(net.hd_tx, origin, cfg.p_h, rayleigh);
    sum.add(net.fd_tx, origin, cfg.p_f, rayleigh);
    sum.add(net.fd_rx, origin, cfg.p_t, jamming_fading(cfg, rng));
    const double tail = tail_density(cfg) * mc::outside_window_interference(0.0, net.window, cfg.alpha);
    return signal_scale * gain > beta_t * (sum.total(cfg.alpha) + tail);
  });
}

ProbabilityEstimate estimate_hd_connection(double beta_c, const NetworkConfig& cfg,
                                           const SimSettings& sim) {
  cfg.validate();
  const Point origin{};
  const double signal_scale = cfg.p_h * std::pow(cfg.d_h, -cfg.alpha);
  return run_trials(sim, [&](long long t) {
    const NetworkRealization net = sample_network(cfg, sim, t);
    PhiloxStream rng(sim.seed, static_cast<std::uint64_t>(t), kFadingHd);
    double gain = 0.0;
    while (!(gain > 0.0)) gain = mc::complex_gaussian(cfg.n_h, rng).squaredNorm();

    std::exponential_distribution<double> fading(1.0);
    const std::function<double()> rayleigh = [&] { return fading(rng); };
    InterferenceSum sum;
    sum.add(net.hd_tx, origin, cfg.p_h, rayleigh);
    sum.add(net.fd_tx, origin, cfg.p_f, rayleigh);
    sum.add(net.fd_rx, origin, cfg.p_t, jamming_fading(cfg, rng));
    const double tail = tail_density(cfg) * mc::outside_window_interference(0.0, net.window, cfg.alpha);
    return signal_scale * gain > beta_c * (sum.total(cfg.alpha) + tail);
  });
}

ProbabilityEstimate estimate_secrecy_outage(double beta_e, const NetworkConfig& cfg,
                                            const SimSettings& sim) {
  cfg.validate();
  const Point tx{cfg.d_f, 0.0};
  const double stream_power = cfg.p_t / cfg.n_j;
  return run_trials(sim, [&](long long t) {
    const NetworkRealization net = sample_network(cfg, sim, t);
    if (net.eve.empty()) return false;
    PhiloxStream rng(sim.seed, static_cast<std::uint64_t>(t), kFadingEve);

    // Jammers: the typical FD receiver at the origin plus every other FD receiver.
    std::vector<Point> jammers;
    jammers.reserve(net.fd_rx.size() + 1);
    jammers.push_back(Point{});
    jammers.insert(jammers.end(), net.fd_rx.begin(), net.fd_rx.end());

    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(net.eve.size());
    for (std::size_t e = 0; e < net.eve.size(); ++e) order.emplace_back(dist2(net.eve[e], tx), e);
    std::sort(order.begin(), order.end());

    std::vector<double> d2(jammers.size());
    std::vector<double> path(jammers.size());
    mc::CMatrix cov(cfg.n_e, cfg.n_e);
    for (const auto& [tx_d2, e] : order) {
      const Point& eve = net.eve[e];
      const mc::CVector g = mc::complex_gaussian(cfg.n_e, rng);
      const double signal = cfg.p_f * std::pow(tx_d2, -0.5 * cfg.alpha);
      const double tail = cfg.lambda_f * cfg.p_t *
                          mc::outside_window_interference(std::hypot(eve.x, eve.y), net.window,
                                                          cfg.alpha);
      // The covariance is at least tail * I, which caps the SIR.
      if (tail > 0.0 && signal * g.squaredNorm() / tail < beta_e) continue;

      for (std::size_t z = 0; z < jammers.size(); ++z) d2[z] = dist2(jammers[z], eve);
      simd::power(d2, -0.5 * cfg.alpha, path);
      cov = mc::CMatrix::Identity(cfg.n_e, cfg.n_e) * tail;
      for (std::size_t z = 0; z < jammers.size(); ++z) {
        const mc::CMatrix h = mc::complex_gaussian(cfg.n_e, cfg.n_j, rng);
        cov.noalias() += (stream_power * path[z]) * (h * h.adjoint());
      }
      if (signal * mc::mmse_gain(g, cov, sim.ridge) >= beta_e) return true;
    }
    return false;
  });
}

namespace mc {

double outside_window_interference(double s, double window, double alpha) {
  if (!(window > 0.0) || !(alpha > 2.0) || !(s >= 0.0) || !(s < window)) {
    throw Error(ErrorCode::domain, "outside_window_interference needs 0 <= s < window, alpha > 2");
  }
  // Angular mean of |x - p|^{-alpha} at radius r is r^{-alpha} 2F1(a, a; 1; s^2 / r^2)
  // with a = alpha / 2; integrating the series term by term over r > window:
  const double a = 0.5 * alpha;
  const double z = (s / window) * (s / window);
  double coeff = 1.0;  // ((a)_k / k!)^2
  double zk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double term = coeff * zk / (alpha - 2.0 + 2.0 * k);
    sum += term;
    if (term < 1e-16 * sum) break;
    const double ratio = (a + k) / (k + 1.0);
    coeff *= ratio * ratio;
    zk *= z;
  }
  return 2.0 * std::numbers::pi * std::pow(window, 2.0 - alpha) * sum;
}

CVector complex_gaussian(Eigen::Index n, PhiloxStream& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = {re, im};
  }
  return v;
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, PhiloxStream& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = {re, im};
    }
  }
  return m;
}

CVector zf_mrc_weight(const CVector& desired, const CVector& self_interference) {
  const std::complex<double> overlap = self_interference.dot(desired);
  CVector projected = desired - (overlap / self_interference.squaredNorm()) * self_interference;
  // One re-orthogonalization pass keeps the residual at rounding level.
  projected -= (self_interference.dot(projected) / self_interference.squaredNorm()) *
               self_interference;
  return projected / projected.norm();
}

CMatrix null_space_basis(const Eigen::RowVectorXcd& row, Eigen::Index count) {
  const Eigen::Index n = row.size();
  if (count < 1 || count > n - 1) {
    throw Error(ErrorCode::domain, "null space of a row vector has dimension n - 1");
  }
  Eigen::HouseholderQR<CMatrix> qr(CMatrix(row.adjoint()));
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q.block(0, 1, n, count);
}

double mmse_gain(const CVector& g, const CMatrix& cov, double ridge) {
  const Eigen::Index n = cov.rows();
  const double trace = cov.real().trace();
  Eigen::LLT<CMatrix> llt(cov);
  bool singular = llt.info() != Eigen::Success;
  if (!singular) {
    const auto diag = llt.matrixLLT().diagonal().real();
    singular = diag.minCoeff() * diag.minCoeff() <= 1e-13 * trace / static_cast<double>(n);
  }
  if (singular) {
    if (ridge <= 0.0) throw Error(ErrorCode::domain, "eavesdropper covariance is singular");
    llt.compute(cov + CMatrix::Identity(n, n) * (ridge * trace / static_cast<double>(n)));
  }
  return g.dot(llt.solve(g)).real();
}

double mrc_gain(const CVector& g, const CMatrix& cov) {
  const double signal = g.squaredNorm();
  return signal * signal / g.dot(cov * g).real();
}

}  // namespace mc

}  // namespace secnet
