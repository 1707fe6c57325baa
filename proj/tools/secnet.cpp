#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "secnet/error.hpp"
#include "secnet/experiments.hpp"

int main(int argc, char** argv) {
  secnet::ExperimentSpec spec;
  CLI::App app{"Secrecy analysis of two-tier networks with full-duplex jamming receivers"};
  app.require_subcommand(1);

  std::string config, out, format = "csv";
  unsigned long long seed = 0;
  long long trials = 0;
  int threads = 0;
  int preset = 0;
  std::vector<std::string> axes;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Flat key = value scenario file");
    cmd->add_option("--out", out, "Write the table here instead of stdout");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", seed, "Monte Carlo seed");
    cmd->add_option("--trials", trials, "Monte Carlo trials per estimate")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--set", spec.settings, "Override one parameter, key=value")
        ->allow_extra_args(false);
  };
  auto add_preset = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Start from the parameter set of figure N")
        ->check(CLI::Range(2, 9));
  };

  std::map<CLI::App*, secnet::Mode> modes;
  auto* analytic = app.add_subcommand("analytic", "Closed-form metrics at one point");
  auto* simulate = app.add_subcommand("simulate", "Closed forms plus Monte Carlo estimates");
  auto* optimize = app.add_subcommand("optimize", "Throughput-optimal FD-tier density");
  auto* sweep = app.add_subcommand("sweep", "Metrics over one or two parameter axes");
  auto* figure = app.add_subcommand("figure", "Data behind figure N");
  modes = {{analytic, secnet::Mode::analytic},
           {simulate, secnet::Mode::simulate},
           {optimize, secnet::Mode::optimize},
           {sweep, secnet::Mode::sweep},
           {figure, secnet::Mode::figure}};
  for (auto& [cmd, mode] : modes) add_common(cmd);
  add_preset(analytic);
  add_preset(simulate);
  add_preset(optimize);
  add_preset(sweep);
  sweep->add_option("--axis", axes, "name:from:to:points[:log]; repeat for a second axis")
      ->required()
      ->allow_extra_args(false);
  sweep->add_flag("--simulate", spec.sweep.simulate, "Add Monte Carlo columns");
  sweep->add_flag("--optimize", spec.sweep.optimize, "Add optimizer columns");
  figure->add_option("n", spec.figure, "Figure number")->required()->check(CLI::Range(2, 9));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[" << secnet::to_string(secnet::ErrorCode::config) << "]: " << e.what()
              << "\n";
    return secnet::exit_status(secnet::ErrorCode::config);
  }

  for (auto& [cmd, mode] : modes) {
    if (cmd->parsed()) spec.mode = mode;
  }
  CLI::App* active = app.get_subcommands().front();
  if (!config.empty()) spec.config_path = config;
  if (!out.empty()) spec.out_path = out;
  spec.format = format == "json" ? secnet::Format::json : secnet::Format::csv;
  if (active->count("--seed")) spec.seed = seed;
  if (active->count("--trials")) spec.trials = trials;
  if (active->count("--threads")) spec.threads = threads;
  if (active->get_option_no_throw("--preset") && active->count("--preset")) spec.preset = preset;

  try {
    for (const std::string& a : axes) spec.axes.push_back(secnet::SweepAxis::parse(a));
  } catch (const secnet::Error& e) {
    std::cerr << "error[" << secnet::to_string(e.code()) << "]: " << e.what() << "\n";
    return secnet::exit_status(e.code());
  }
  return secnet::run(spec, std::cout, std::cerr);
}
