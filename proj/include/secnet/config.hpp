#pragma once

// Physical parameters of the two-tier network, QoS targets, and the flat
// key = value file format the CLI reads them from.

#include <istream>
#include <string>
#include <vector>

namespace secnet {

/// Deployment and radio parameters. Powers are linear and share one unit
/// (the CLI uses milliwatts); only ratios and products P*s enter the formulas.
struct NetworkConfig {
  double lambda_h = 1e-3;  // HD receivers per unit area
  double lambda_f = 1e-3;  // FD receivers per unit area
  double lambda_e = 1e-4;  // eavesdroppers per unit area
  double p_h = 1.0;        // HD transmit power
  double p_f = 1.0;        // FD-tier transmit power
  double p_t = 1.0;        // jamming power of an FD receiver
  double alpha = 3.5;
  int n_f = 4;  // antennas at an FD receiver
  int n_h = 4;  // antennas at an HD receiver
  int n_e = 4;  // antennas at an eavesdropper
  int n_t = 1;  // jamming antennas; 1 selects the single-antenna model
  int n_j = 1;  // jamming streams
  double d_f = 1.0;
  double d_h = 1.0;

  bool single_antenna() const noexcept { return n_t == 1; }

  double p_tf() const noexcept { return p_t / p_f; }
  double p_hf() const noexcept { return p_h / p_f; }
  double p_fh() const noexcept { return p_f / p_h; }
  double p_th() const noexcept { return p_t / p_h; }

  /// Throws Error(domain) naming the first violated invariant.
  void validate() const;
};

/// Reliability, secrecy and HD-tier throughput targets for the optimizer.
struct QoSTargets {
  double sigma = 0.9;    // FD connection probability target
  double sigma_c = 0.9;  // HD connection probability target
  double epsilon = 0.1;  // secrecy outage target
  double t_c = 1e-3;     // HD-tier throughput floor, bits/s/Hz per unit area

  void validate() const;
};

/// 10^(dBm/10), i.e. milliwatts.
double dbm_to_mw(double dbm) noexcept;

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped, values
/// may be double quoted. Throws Error(config) with "source:line: ..." context.
std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source);

/// Strict numeric conversions that reject trailing garbage; `where` prefixes the
/// error message.
double parse_real(const std::string& text, const std::string& where);
long long parse_integer(const std::string& text, const std::string& where);

}  // namespace secnet
