#pragma once

// Experiment orchestration behind the `secnet` command line: scenario loading,
// parameter sweeps, figure presets and table output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "secnet/config.hpp"
#include "secnet/montecarlo.hpp"

namespace secnet {

/// Everything a single evaluation needs: network, targets, thresholds, MC settings.
struct Scenario {
  NetworkConfig net;
  QoSTargets qos;
  double beta_t = 1.0;
  double beta_e = 1.0;
  double beta_c = 1.0;
  SimSettings sim;
};

/// Names accepted by config files, --set and --axis.
const std::vector<std::string>& parameter_names();

/// Sets one named parameter from text. Power keys ending in `_dbm` take dBm.
void apply_setting(Scenario& sc, const std::string& key, const std::string& value,
                   const std::string& where);

/// Numeric form used by sweeps; integer parameters must receive integral values.
void set_parameter(Scenario& sc, const std::string& name, double value);

/// Baseline for figure N (2..9); other parameters keep the common defaults.
Scenario figure_preset(int figure);

/// Reads a flat key = value file on top of `base`.
Scenario load_scenario(const std::string& path, Scenario base);

struct SweepAxis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  int points = 0;
  bool log_scale = false;

  /// Parses name:from:to:points[:log].
  static SweepAxis parse(const std::string& text);
  /// Throws a config error for an empty range, bad point count or unusable log bounds.
  void validate() const;
  std::vector<double> values() const;
};

struct Column {
  std::string name;
  std::string unit;
};

/// Rectangular result table; NaN marks a value that does not apply to a row.
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

Table run_analytic(const Scenario& sc);
Table run_simulate(const Scenario& sc);
Table run_optimize(const Scenario& sc);

struct SweepOptions {
  bool simulate = false;
  bool optimize = false;
};

/// Cartesian sweep over one or two axes; each row holds the axis values
/// followed by the analytic metrics (and MC / optimizer columns when asked).
Table run_sweep(const Scenario& sc, const std::vector<SweepAxis>& axes, const SweepOptions& opts);

/// Curves of figure N. MC columns use `sc.sim`.
Table run_figure(int figure, const Scenario& sc);

enum class Mode { analytic, simulate, optimize, sweep, figure };
enum class Format { csv, json };

struct ExperimentSpec {
  Mode mode = Mode::analytic;
  int figure = 0;
  std::optional<int> preset;
  std::optional<std::string> config_path;
  std::vector<std::string> settings;  // key=value overrides, applied after the config file
  std::vector<SweepAxis> axes;
  SweepOptions sweep;
  std::optional<std::string> out_path;
  Format format = Format::csv;
  std::optional<unsigned long long> seed;
  std::optional<long long> trials;
  std::optional<int> threads;
};

/// Runs the experiment, writes the table, and returns the process exit status.
/// Errors are reported on `err` as "error[<code>]: <message>".
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace secnet
