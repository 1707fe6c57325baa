#include "secnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "secnet/analytic.hpp"
#include "secnet/error.hpp"
#include "secnet/optimizer.hpp"

namespace secnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Kind { real, integer, dbm, linear_power };

struct Parameter {
  const char* name;
  Kind kind;
  std::function<void(Scenario&, double)> set;
};

const std::vector<Parameter>& parameters() {
  static const std::vector<Parameter> table = {
      {"lambda_h", Kind::real, [](Scenario& s, double v) { s.net.lambda_h = v; }},
      {"lambda_f", Kind::real, [](Scenario& s, double v) { s.net.lambda_f = v; }},
      {"lambda_e", Kind::real, [](Scenario& s, double v) { s.net.lambda_e = v; }},
      {"p_h_dbm", Kind::dbm, [](Scenario& s, double v) { s.net.p_h = dbm_to_mw(v); }},
      {"p_f_dbm", Kind::dbm, [](Scenario& s, double v) { s.net.p_f = dbm_to_mw(v); }},
      {"p_t_dbm", Kind::dbm, [](Scenario& s, double v) { s.net.p_t = dbm_to_mw(v); }},
      {"p_h_mw", Kind::linear_power, [](Scenario& s, double v) { s.net.p_h = v; }},
      {"p_f_mw", Kind::linear_power, [](Scenario& s, double v) { s.net.p_f = v; }},
      {"p_t_mw", Kind::linear_power, [](Scenario& s, double v) { s.net.p_t = v; }},
      {"alpha", Kind::real, [](Scenario& s, double v) { s.net.alpha = v; }},
      {"n_f", Kind::integer, [](Scenario& s, double v) { s.net.n_f = static_cast<int>(v); }},
      {"n_h", Kind::integer, [](Scenario& s, double v) { s.net.n_h = static_cast<int>(v); }},
      {"n_e", Kind::integer, [](Scenario& s, double v) { s.net.n_e = static_cast<int>(v); }},
      {"n_t", Kind::integer, [](Scenario& s, double v) { s.net.n_t = static_cast<int>(v); }},
      {"n_j", Kind::integer, [](Scenario& s, double v) { s.net.n_j = static_cast<int>(v); }},
      {"d_f", Kind::real, [](Scenario& s, double v) { s.net.d_f = v; }},
      {"d_h", Kind::real, [](Scenario& s, double v) { s.net.d_h = v; }},
      {"sigma", Kind::real, [](Scenario& s, double v) { s.qos.sigma = v; }},
      {"sigma_c", Kind::real, [](Scenario& s, double v) { s.qos.sigma_c = v; }},
      {"epsilon", Kind::real, [](Scenario& s, double v) { s.qos.epsilon = v; }},
      {"t_c", Kind::real, [](Scenario& s, double v) { s.qos.t_c = v; }},
      {"beta_t", Kind::real, [](Scenario& s, double v) { s.beta_t = v; }},
      {"beta_e", Kind::real, [](Scenario& s, double v) { s.beta_e = v; }},
      {"beta_c", Kind::real, [](Scenario& s, double v) { s.beta_c = v; }},
      {"trials", Kind::integer, [](Scenario& s, double v) { s.sim.trials = static_cast<long long>(v); }},
      {"seed", Kind::integer,
       [](Scenario& s, double v) { s.sim.seed = static_cast<std::uint64_t>(v); }},
      {"threads", Kind::integer, [](Scenario& s, double v) { s.sim.threads = static_cast<int>(v); }},
      {"window_radius", Kind::real, [](Scenario& s, double v) { s.sim.window_radius = v; }},
      {"confidence_level", Kind::real, [](Scenario& s, double v) { s.sim.confidence_level = v; }},
      {"ridge", Kind::real, [](Scenario& s, double v) { s.sim.ridge = v; }},
  };
  return table;
}

const Parameter& lookup(const std::string& name, const std::string& where) {
  for (const Parameter& p : parameters()) {
    if (name == p.name) return p;
  }
  throw Error(ErrorCode::config, where + "unknown parameter '" + name + "'");
}

// Re-raises validation failures as configuration errors: they stem from user input.
void validate_scenario(const Scenario& sc, const std::string& context) {
  try {
    sc.net.validate();
    sc.qos.validate();
    sc.sim.validate();
    if (!(sc.beta_t > 0.0) || !(sc.beta_e > 0.0) || !(sc.beta_c > 0.0)) {
      throw Error(ErrorCode::domain, "SIR thresholds must be positive");
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::config, context + e.what());
  }
}

std::vector<double> logspace(double from, double to, int n) {
  SweepAxis axis{"", from, to, n, true};
  return axis.values();
}

std::vector<double> linspace(double from, double to, int n) {
  SweepAxis axis{"", from, to, n, false};
  return axis.values();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// --- metric groups shared by the modes -------------------------------------

const std::vector<Column> kThresholdColumns = {
    {"beta_t", "linear"}, {"beta_e", "linear"}, {"beta_c", "linear"}};

const std::vector<Column> kAnalyticColumns = {
    {"pt_exact", "prob"},     {"pt_lower", "prob"},     {"pt_upper", "prob"},
    {"pt_approx", "prob"},    {"pc_approx", "prob"},    {"pso_exact", "prob"},
    {"pso_small_df", "prob"}, {"pso_large_ne", "prob"}, {"pso_ma", "prob"},
    {"pso_ma_limit", "prob"}};

const std::vector<Column> kSimulationColumns = {
    {"pt_mc", "prob"}, {"pt_mc_ci", "prob"}, {"pc_mc", "prob"},
    {"pc_mc_ci", "prob"}, {"pso_mc", "prob"}, {"pso_mc_ci", "prob"}};

const std::vector<Column> kOptimizerColumns = {
    {"feasible", "bool"},         {"lambda_f_star", "per unit area"},
    {"lambda_lower", "per unit area"}, {"lambda_upper", "per unit area"},
    {"t_s_star", "bits/s/Hz/area"},    {"r_t", "bits/s/Hz"},
    {"r_e", "bits/s/Hz"},              {"r_s", "bits/s/Hz"}};

std::vector<double> analytic_values(const Scenario& sc) {
  const NetworkConfig& n = sc.net;
  std::vector<double> v;
  if (n.single_antenna()) {
    v.push_back(connection_probability_exact(sc.beta_t, n));
    v.push_back(connection_probability_bound(sc.beta_t, n, Side::lower));
    v.push_back(connection_probability_bound(sc.beta_t, n, Side::upper));
  } else {
    v.push_back(kNaN);
    v.push_back(connection_probability_bound(sc.beta_t, n, Side::lower));
    v.push_back(kNaN);
  }
  v.push_back(fd_connection_approx(sc.beta_t, n));
  v.push_back(hd_connection_approx(sc.beta_c, n));
  v.push_back(n.single_antenna() ? secrecy_outage_exact(sc.beta_e, n) : kNaN);
  const bool single_stream = n.single_antenna() || n.n_j == 1;
  v.push_back(single_stream ? secrecy_outage_approx(sc.beta_e, n, OutageVariant::small_df) : kNaN);
  v.push_back(single_stream ? secrecy_outage_approx(sc.beta_e, n, OutageVariant::large_ne) : kNaN);
  v.push_back(n.single_antenna() ? kNaN : secrecy_outage_ma(sc.beta_e, n));
  v.push_back(n.single_antenna() ? kNaN : secrecy_outage_ma_limit(sc.beta_e, n));
  return v;
}

std::vector<double> simulation_values(const Scenario& sc) {
  const ProbabilityEstimate pt = estimate_fd_connection(sc.beta_t, sc.net, sc.sim);
  const ProbabilityEstimate pc = estimate_hd_connection(sc.beta_c, sc.net, sc.sim);
  const ProbabilityEstimate pso = estimate_secrecy_outage(sc.beta_e, sc.net, sc.sim);
  return {pt.value, pt.half_width, pc.value, pc.half_width, pso.value, pso.half_width};
}

std::vector<double> optimizer_values(const Scenario& sc) {
  const OptimizerConstants k = optimizer_constants(sc.qos, sc.net);
  const ThroughputSolution sol = solve_optimal_density(sc.qos, sc.net);
  return {sol.feasible ? 1.0 : 0.0,
          sol.lambda_f_star.value_or(kNaN),
          k.lambda_lower,
          k.lambda_upper,
          sol.t_s_star,
          sol.feasible ? sol.r_t : kNaN,
          sol.feasible ? sol.r_e : kNaN,
          sol.feasible ? sol.r_s : 0.0};
}

void append(std::vector<Column>& to, const std::vector<Column>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

void append(std::vector<double>& to, const std::vector<double>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::string unit_of(const std::string& name) {
  const Parameter& p = lookup(name, "");
  switch (p.kind) {
    case Kind::dbm: return "dBm";
    case Kind::linear_power: return "mW";
    case Kind::integer: return "count";
    case Kind::real: break;
  }
  if (name.rfind("lambda_", 0) == 0) return "per unit area";
  if (name == "d_f" || name == "d_h" || name == "window_radius") return "length";
  if (name == "t_c") return "bits/s/Hz/area";
  return "";
}

// --- figures ------------------------------------------------------------------

Table figure2(Scenario sc) {
  Table t{{{"n_f", "count"},
           {"lambda_f", "per unit area"},
           {"pt_lower", "prob"},
           {"pt_upper", "prob"},
           {"pt_exact", "prob"},
           {"pt_mc", "prob"},
           {"pt_mc_ci", "prob"}},
          {}};
  for (int nf : {3, 4, 6}) {
    for (double lf : logspace(1e-4, 1e-2, 7)) {
      sc.net.n_f = nf;
      sc.net.lambda_f = lf;
      const ProbabilityEstimate mc = estimate_fd_connection(sc.beta_t, sc.net, sc.sim);
      t.rows.push_back({double(nf), lf, connection_probability_bound(sc.beta_t, sc.net, Side::lower),
                        connection_probability_bound(sc.beta_t, sc.net, Side::upper),
                        connection_probability_exact(sc.beta_t, sc.net), mc.value, mc.half_width});
    }
  }
  return t;
}

Table figure3(Scenario sc) {
  Table t{{{"d_f", "length"},
           {"lambda_e", "per unit area"},
           {"pso_exact", "prob"},
           {"pso_small_df", "prob"},
           {"pso_mc", "prob"},
           {"pso_mc_ci", "prob"}},
          {}};
  for (double df : {0.5, 1.0, 2.0}) {
    for (double le : logspace(1e-5, 1e-3, 5)) {
      sc.net.d_f = df;
      sc.net.lambda_e = le;
      const ProbabilityEstimate mc = estimate_secrecy_outage(sc.beta_e, sc.net, sc.sim);
      t.rows.push_back({df, le, secrecy_outage_exact(sc.beta_e, sc.net),
                        secrecy_outage_approx(sc.beta_e, sc.net, OutageVariant::small_df), mc.value,
                        mc.half_width});
    }
  }
  return t;
}

Table figure4(Scenario sc) {
  Table t{{{"sigma", "prob"},
           {"epsilon", "prob"},
           {"feasible", "bool"},
           {"lambda_f_star", "per unit area"},
           {"t_s_star", "bits/s/Hz/area"}},
          {}};
  for (double sigma : linspace(0.05, 0.95, 10)) {
    for (double eps : linspace(0.05, 0.95, 10)) {
      sc.qos.sigma = sigma;
      sc.qos.epsilon = eps;
      const ThroughputSolution sol = solve_optimal_density(sc.qos, sc.net);
      t.rows.push_back({sigma, eps, sol.feasible ? 1.0 : 0.0, sol.lambda_f_star.value_or(kNaN),
                        sol.t_s_star});
    }
  }
  return t;
}

Table figure5(Scenario sc) {
  Table t{{{"n_e", "count"},
           {"lambda_e", "per unit area"},
           {"lambda_f", "per unit area"},
           {"pso_exact", "prob"},
           {"pso_small_df", "prob"},
           {"pso_large_ne", "prob"},
           {"pso_mc", "prob"},
           {"pso_mc_ci", "prob"}},
          {}};
  for (int ne : {4, 8}) {
    for (double le : {1e-4, 1e-3}) {
      for (double lf : logspace(1e-4, 1e-2, 5)) {
        sc.net.n_e = ne;
        sc.net.lambda_e = le;
        sc.net.lambda_f = lf;
        const ProbabilityEstimate mc = estimate_secrecy_outage(sc.beta_e, sc.net, sc.sim);
        t.rows.push_back({double(ne), le, lf, secrecy_outage_exact(sc.beta_e, sc.net),
                          secrecy_outage_approx(sc.beta_e, sc.net, OutageVariant::small_df),
                          secrecy_outage_approx(sc.beta_e, sc.net, OutageVariant::large_ne),
                          mc.value, mc.half_width});
      }
    }
  }
  return t;
}

Table figure6(Scenario sc) {
  Table t{{{"lambda_f", "per unit area"},
           {"p_t_dbm", "dBm"},
           {"t_s", "bits/s/Hz/area"},
           {"r_t", "bits/s/Hz"},
           {"r_e", "bits/s/Hz"},
           {"lambda_upper", "per unit area"},
           {"within_constraint", "bool"}},
          {}};
  for (double lf : {5e-4, 1e-3, 2e-3}) {
    for (double pt : linspace(-10.0, 40.0, 11)) {
      sc.net.lambda_f = lf;
      sc.net.p_t = dbm_to_mw(pt);
      const double r_t = std::log2(1.0 + threshold_beta_t(sc.qos.sigma, sc.net));
      const double r_e = std::log2(1.0 + threshold_beta_e(sc.qos.epsilon, sc.net));
      const double upper = optimizer_constants(sc.qos, sc.net).lambda_upper;
      t.rows.push_back({lf, pt, throughput(lf, sc.qos, sc.net), r_t, r_e, upper,
                        lf <= upper ? 1.0 : 0.0});
    }
  }
  return t;
}

Table figure7(Scenario sc) {
  Table t{{{"n_j", "count"},
           {"n_t", "count"},
           {"pt_lower", "prob"},
           {"pt_approx", "prob"},
           {"pt_mc", "prob"},
           {"pt_mc_ci", "prob"}},
          {}};
  for (int nj : {1, 2, 3}) {
    for (int nt = 2; nt <= 7; ++nt) {
      if (nj > nt - 1) continue;
      sc.net.n_j = nj;
      sc.net.n_t = nt;
      const ProbabilityEstimate mc = estimate_fd_connection(sc.beta_t, sc.net, sc.sim);
      t.rows.push_back({double(nj), double(nt),
                        connection_probability_bound(sc.beta_t, sc.net, Side::lower),
                        fd_connection_approx(sc.beta_t, sc.net), mc.value, mc.half_width});
    }
  }
  return t;
}

Table figure8(Scenario sc) {
  Table t{{{"n_e", "count"},
           {"lambda_f", "per unit area"},
           {"n_j", "count"},
           {"pso_ma", "prob"},
           {"pso_ma_limit", "prob"},
           {"pso_mc", "prob"},
           {"pso_mc_ci", "prob"}},
          {}};
  for (int ne : {2, 4}) {
    for (double lf : {1e-3, 2e-3}) {
      for (int nj = 1; nj <= 8; ++nj) {
        sc.net.n_e = ne;
        sc.net.lambda_f = lf;
        sc.net.n_j = nj;
        sc.net.n_t = nj + 1;
        sc.net.n_f = std::max(sc.net.n_f, sc.net.n_t + 1);
        const ProbabilityEstimate mc = estimate_secrecy_outage(sc.beta_e, sc.net, sc.sim);
        t.rows.push_back({double(ne), lf, double(nj), secrecy_outage_ma(sc.beta_e, sc.net),
                          secrecy_outage_ma_limit(sc.beta_e, sc.net), mc.value, mc.half_width});
      }
    }
  }
  return t;
}

Table figure9(Scenario sc) {
  Table t{{{"n_j", "count"},
           {"lambda_f", "per unit area"},
           {"t_s", "bits/s/Hz/area"},
           {"lambda_upper", "per unit area"},
           {"within_constraint", "bool"}},
          {}};
  for (int nj = 1; nj <= 5; ++nj) {
    sc.net.n_j = nj;
    const double upper = optimizer_constants(sc.qos, sc.net).lambda_upper;
    for (double lf : logspace(1e-4, 1e-1, 13)) {
      t.rows.push_back({double(nj), lf, throughput(lf, sc.qos, sc.net), upper,
                        lf <= upper ? 1.0 : 0.0});
    }
  }
  return t;
}

void write_table(const Table& table, Format format, std::ostream& os) {
  os << (format == Format::csv ? table.to_csv() : table.to_json());
}

}  // namespace

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Parameter& p : parameters()) out.emplace_back(p.name);
    return out;
  }();
  return names;
}

void apply_setting(Scenario& sc, const std::string& key, const std::string& value,
                   const std::string& where) {
  const Parameter& p = lookup(key, where);
  if (p.kind == Kind::integer) {
    const long long v = parse_integer(value, where + key + ": ");
    if (v < 0) throw Error(ErrorCode::config, where + key + ": must be non-negative");
    p.set(sc, static_cast<double>(v));
  } else {
    p.set(sc, parse_real(value, where + key + ": "));
  }
}

void set_parameter(Scenario& sc, const std::string& name, double value) {
  const Parameter& p = lookup(name, "");
  if (p.kind == Kind::integer) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 * std::max(1.0, std::abs(value)) || rounded < 0) {
      throw Error(ErrorCode::config,
                  "parameter '" + name + "' needs a non-negative integer, got " + format_number(value));
    }
    value = rounded;
  }
  p.set(sc, value);
}

Scenario figure_preset(int figure) {
  Scenario sc;  // common defaults: alpha 3.5, 0 dBm powers, N_h = 4, lambda_h = 1e-3, D = 1
  auto& n = sc.net;
  auto& q = sc.qos;
  switch (figure) {
    case 2:
      break;
    case 3:
      n.p_t = dbm_to_mw(10.0);
      n.n_e = 4;
      n.lambda_f = 1e-3;
      break;
    case 4:
      n.p_t = dbm_to_mw(20.0);
      n.n_f = 4;
      n.n_e = 8;
      n.lambda_e = 1e-2;
      q.sigma_c = 0.9;
      q.t_c = 1e-3;
      break;
    case 5:
      n.p_t = dbm_to_mw(20.0);
      break;
    case 6:
      n.n_f = 4;
      n.n_e = 4;
      n.lambda_e = 1e-3;
      q.sigma = 0.9;
      q.sigma_c = 0.9;
      q.epsilon = 0.1;
      q.t_c = 1e-3;
      break;
    case 7:
      n.p_t = dbm_to_mw(20.0);
      n.n_f = 8;
      n.lambda_f = 1e-3;
      n.n_t = 2;
      n.n_j = 1;
      break;
    case 8:
      n.p_t = dbm_to_mw(10.0);
      n.lambda_e = 1e-4;
      n.n_t = 2;
      n.n_j = 1;
      break;
    case 9:
      n.p_t = dbm_to_mw(20.0);
      n.n_f = 8;
      n.n_e = 8;
      n.n_t = 6;
      n.n_j = 1;
      n.lambda_e = 1e-4;
      q.sigma = 0.9;
      q.sigma_c = 0.9;
      q.epsilon = 0.02;
      q.t_c = 1e-3;
      break;
    default:
      throw Error(ErrorCode::config, "figure must be between 2 and 9, got " + std::to_string(figure));
  }
  return sc;
}

Scenario load_scenario(const std::string& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open config file '" + path + "'");
  for (const KeyValue& kv : parse_key_values(in, path)) {
    apply_setting(base, kv.key, kv.value, path + ":" + std::to_string(kv.line) + ": ");
  }
  return base;
}

SweepAxis SweepAxis::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5) {
    throw Error(ErrorCode::config, "axis '" + text + "' must be name:from:to:points[:log]");
  }
  const std::string where = "axis '" + text + "': ";
  lookup(parts[0], where);
  SweepAxis axis;
  axis.name = parts[0];
  axis.from = parse_real(parts[1], where);
  axis.to = parse_real(parts[2], where);
  const long long points = parse_integer(parts[3], where);
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin") {
      throw Error(ErrorCode::config, where + "scale must be 'log' or 'lin'");
    }
    axis.log_scale = parts[4] == "log";
  }
  if (points < 2 || points > 100000) {
    throw Error(ErrorCode::config, where + "points must be in [2, 100000]");
  }
  axis.points = static_cast<int>(points);
  axis.validate();
  return axis;
}

void SweepAxis::validate() const {
  const std::string where = "axis '" + name + "': ";
  lookup(name, where);
  if (points < 2 || points > 100000) {
    throw Error(ErrorCode::config, where + "points must be in [2, 100000]");
  }
  if (!std::isfinite(from) || !std::isfinite(to)) {
    throw Error(ErrorCode::config, where + "bounds must be finite");
  }
  if (from == to) throw Error(ErrorCode::config, where + "empty sweep range");
  if (log_scale && !(from > 0.0 && to > 0.0)) {
    throw Error(ErrorCode::config, where + "log scale needs positive bounds");
  }
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    out[i] = log_scale ? std::exp(std::log(from) + f * (std::log(to) - std::log(from)))
                       : from + f * (to - from);
  }
  if (points > 1) {
    out.front() = from;
    out.back() = to;
  }
  return out;
}

std::string Table::to_csv() const {
  std::string s;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) s += ',';
    s += columns[c].name;
    if (!columns[c].unit.empty()) s += " [" + columns[c].unit + "]";
  }
  s += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_number(row[c]);
    }
    s += '\n';
  }
  return s;
}

std::string Table::to_json() const {
  nlohmann::ordered_json doc;
  doc["columns"] = nlohmann::ordered_json::array();
  for (const Column& c : columns) doc["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::isfinite(row[c])) {
        r[columns[c].name] = row[c];
      } else if (std::isinf(row[c])) {
        r[columns[c].name] = row[c] > 0 ? "inf" : "-inf";
      } else {
        r[columns[c].name] = nullptr;
      }
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

Table run_analytic(const Scenario& sc) {
  Table t;
  append(t.columns, kThresholdColumns);
  append(t.columns, kAnalyticColumns);
  std::vector<double> row = {sc.beta_t, sc.beta_e, sc.beta_c};
  append(row, analytic_values(sc));
  t.rows.push_back(std::move(row));
  return t;
}

Table run_simulate(const Scenario& sc) {
  Table t = run_analytic(sc);
  append(t.columns, kSimulationColumns);
  append(t.rows.front(), simulation_values(sc));
  return t;
}

Table run_optimize(const Scenario& sc) {
  Table t;
  append(t.columns, kOptimizerColumns);
  t.rows.push_back(optimizer_values(sc));
  return t;
}

Table run_sweep(const Scenario& sc, const std::vector<SweepAxis>& axes, const SweepOptions& opts) {
  if (axes.empty()) throw Error(ErrorCode::config, "sweep needs at least one --axis");
  if (axes.size() > 2) throw Error(ErrorCode::config, "sweep supports at most two axes");
  for (const SweepAxis& a : axes) a.validate();
  Table t;
  for (const SweepAxis& a : axes) t.columns.push_back({a.name, unit_of(a.name)});
  append(t.columns, kAnalyticColumns);
  if (opts.simulate) append(t.columns, kSimulationColumns);
  if (opts.optimize) append(t.columns, kOptimizerColumns);

  const std::vector<double> first = axes[0].values();
  const std::vector<double> second = axes.size() > 1 ? axes[1].values() : std::vector<double>{kNaN};
  for (double u : first) {
    for (double v : second) {
      Scenario point = sc;
      set_parameter(point, axes[0].name, u);
      std::vector<double> row = {u};
      if (axes.size() > 1) {
        set_parameter(point, axes[1].name, v);
        row.push_back(v);
      }
      validate_scenario(point, "sweep point: ");
      append(row, analytic_values(point));
      if (opts.simulate) append(row, simulation_values(point));
      if (opts.optimize) append(row, optimizer_values(point));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table run_figure(int figure, const Scenario& sc) {
  switch (figure) {
    case 2: return figure2(sc);
    case 3: return figure3(sc);
    case 4: return figure4(sc);
    case 5: return figure5(sc);
    case 6: return figure6(sc);
    case 7: return figure7(sc);
    case 8: return figure8(sc);
    case 9: return figure9(sc);
    default:
      throw Error(ErrorCode::config, "figure must be between 2 and 9, got " + std::to_string(figure));
  }
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc;
    if (spec.mode == Mode::figure) {
      sc = figure_preset(spec.figure);
    } else if (spec.preset) {
      sc = figure_preset(*spec.preset);
    }
    if (spec.config_path) sc = load_scenario(*spec.config_path, sc);
    for (const std::string& kv : spec.settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::config, "--set expects key=value, got '" + kv + "'");
      }
      apply_setting(sc, kv.substr(0, eq), kv.substr(eq + 1), "--set: ");
    }
    if (spec.seed) sc.sim.seed = *spec.seed;
    if (spec.trials) sc.sim.trials = *spec.trials;
    if (spec.threads) sc.sim.threads = *spec.threads;
    validate_scenario(sc, spec.config_path ? *spec.config_path + ": " : "");
    if (spec.mode != Mode::sweep && !spec.axes.empty()) {
      throw Error(ErrorCode::config, "--axis is only valid with the sweep command");
    }

    Table table;
    bool infeasible_result = false;
    switch (spec.mode) {
      case Mode::analytic: table = run_analytic(sc); break;
      case Mode::simulate: table = run_simulate(sc); break;
      case Mode::optimize:
        // The fig. 4 preset describes a (sigma, epsilon) grid rather than one point.
        if (spec.preset && *spec.preset == 4) {
          table = run_figure(4, sc);
        } else {
          table = run_optimize(sc);
          infeasible_result = table.rows.front().front() == 0.0;
        }
        break;
      case Mode::sweep: table = run_sweep(sc, spec.axes, spec.sweep); break;
      case Mode::figure: table = run_figure(spec.figure, sc); break;
    }

    if (spec.out_path) {
      std::ofstream file(*spec.out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(ErrorCode::config, "cannot write '" + *spec.out_path + "'");
      write_table(table, spec.format, file);
    } else {
      write_table(table, spec.format, out);
    }
    if (infeasible_result) {
      err << "error[" << to_string(ErrorCode::infeasible)
          << "]: QoS targets admit no positive secrecy throughput\n";
      return exit_status(ErrorCode::infeasible);
    }
    return 0;
  } catch (const QuadratureError& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what()
        << " (achieved " << e.achieved_tolerance() << ")\n";
    return exit_status(e.code());
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace secnet
