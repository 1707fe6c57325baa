#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "secnet/error.hpp"
#include "secnet/experiments.hpp"

using namespace secnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_spec(const ExperimentSpec& spec) {
  std::ostringstream out, err;
  const int status = run(spec, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(SECNET_TEST_TMPDIR) / name;
  fs::remove(p);
  return p;
}

}  // namespace

TEST_CASE("sweep axis parsing") {
  const SweepAxis a = SweepAxis::parse("lambda_f:1e-4:1e-2:3:log");
  CHECK(a.log_scale);
  const auto v = a.values();
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 1e-4);
  CHECK(v[1] == doctest::Approx(1e-3));
  CHECK(v[2] == 1e-2);
  const auto lin = SweepAxis::parse("n_f:3:7:5").values();
  CHECK(lin == std::vector<double>{3, 4, 5, 6, 7});

  for (const char* bad : {"lambda_f:1:1:4", "lambda_f:1:2:1", "bogus:1:2:3", "lambda_f:0:1:3:log",
                          "lambda_f:1:2", "lambda_f:a:2:3", "lambda_f:1:2:3:cubic"}) {
    CAPTURE(bad);
    try {
      SweepAxis::parse(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::config);
    }
  }
}

TEST_CASE("settings and presets") {
  Scenario sc;
  apply_setting(sc, "p_t_dbm", "20", "");
  CHECK(sc.net.p_t == doctest::Approx(100.0));
  apply_setting(sc, "n_f", "6", "");
  CHECK(sc.net.n_f == 6);
  CHECK_THROWS_AS(apply_setting(sc, "n_f", "6.5", ""), Error);
  CHECK_THROWS_AS(apply_setting(sc, "nope", "1", ""), Error);
  CHECK_THROWS_AS(set_parameter(sc, "n_e", 2.5), Error);
  set_parameter(sc, "n_e", 3.0000000000001);
  CHECK(sc.net.n_e == 3);

  const Scenario f2 = figure_preset(2);
  CHECK(f2.net.alpha == 3.5);
  CHECK(f2.net.p_t == 1.0);
  CHECK(f2.net.n_h == 4);
  CHECK(f2.net.lambda_h == 1e-3);
  CHECK(f2.net.n_t == 1);
  CHECK(f2.beta_t == 1.0);
  const Scenario f3 = figure_preset(3);
  CHECK(f3.net.p_t == doctest::Approx(10.0));
  CHECK(f3.net.n_e == 4);
  CHECK(f3.net.lambda_f == 1e-3);
  const Scenario f4 = figure_preset(4);
  CHECK(f4.net.n_e == 8);
  CHECK(f4.net.lambda_e == 1e-2);
  const Scenario f9 = figure_preset(9);
  CHECK(f9.net.n_t == 6);
  CHECK(f9.qos.epsilon == 0.02);
  CHECK(f9.net.p_t == doctest::Approx(100.0));
  CHECK_THROWS_AS(figure_preset(1), Error);
  for (int f = 2; f <= 9; ++f) {
    const Scenario s = figure_preset(f);
    CHECK_NOTHROW(s.net.validate());
    CHECK_NOTHROW(s.qos.validate());
  }
}

TEST_CASE("table rendering") {
  Table t{{{"a", "prob"}, {"b", ""}}, {{0.5, std::nan("")}, {1e-20, 3.0}}};
  CHECK(t.to_csv() == "a [prob],b\n0.5,nan\n1e-20,3\n");
  const auto j = nlohmann::json::parse(t.to_json());
  CHECK(j["columns"][0]["unit"] == "prob");
  CHECK(j["rows"][0]["b"].is_null());
  CHECK(j["rows"][1]["b"] == 3.0);
}

TEST_CASE("analytic mode writes one row") {
  ExperimentSpec spec;
  spec.settings = {"lambda_f=2e-3"};
  const Outcome o = run_spec(spec);
  CHECK(o.status == 0);
  CHECK(o.err.empty());
  std::istringstream lines(o.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header.rfind("beta_t [linear],", 0) == 0);
  CHECK_FALSE(std::getline(lines, extra));
}

TEST_CASE("config file errors name the line and map to exit 2") {
  const fs::path cfg = scratch("bad.cfg");
  std::ofstream(cfg) << "lambda_f = 1e-3\nn_f = 6\nalpha = two\n";
  ExperimentSpec spec;
  spec.config_path = cfg.string();
  const Outcome o = run_spec(spec);
  CHECK(o.status == 2);
  CHECK(o.err.find("error[config]: ") == 0);
  CHECK(o.err.find("bad.cfg:3:") != std::string::npos);

  std::ofstream(cfg, std::ios::trunc) << "n_t = 3\nn_j = 3\n";
  const Outcome invalid = run_spec(spec);
  CHECK(invalid.status == 2);

  std::ofstream(cfg, std::ios::trunc) << "p_t_dbm = 10\nlambda_e = 1e-3\n";
  CHECK(run_spec(spec).status == 0);
}

TEST_CASE("empty sweep range: validation error and no output file") {
  ExperimentSpec spec;
  spec.mode = Mode::sweep;
  const fs::path out = scratch("empty_sweep.csv");
  fs::remove(out);
  spec.out_path = out.string();
  spec.axes = {SweepAxis{"lambda_f", 1e-3, 1e-3, 4, false}};
  const Outcome o = run_spec(spec);
  CHECK(o.status == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("sweeps over one and two axes") {
  ExperimentSpec spec;
  spec.mode = Mode::sweep;
  spec.axes = {SweepAxis::parse("lambda_f:1e-4:1e-2:3:log"), SweepAxis::parse("n_f:3:4:2")};
  spec.sweep.optimize = true;
  spec.format = Format::json;
  const Outcome o = run_spec(spec);
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["rows"].size() == 6);
  CHECK(j["rows"][5]["n_f"] == 4.0);
  CHECK(j["rows"][0].contains("t_s_star"));

  spec.axes = {SweepAxis{"n_f", 3.0, 4.5, 3, false}};
  CHECK(run_spec(spec).status == 2);
}

TEST_CASE("optimize: feasible, infeasible and the fig. 4 grid") {
  ExperimentSpec spec;
  spec.mode = Mode::optimize;
  spec.preset = 9;
  CHECK(run_spec(spec).status == 0);

  spec.preset.reset();
  spec.settings = {"t_c=5"};
  const fs::path out = scratch("infeasible.csv");
  spec.out_path = out.string();
  const Outcome o = run_spec(spec);
  CHECK(o.status == 3);
  CHECK(o.err.find("error[infeasible]") == 0);
  CHECK(fs::exists(out));

  ExperimentSpec grid;
  grid.mode = Mode::optimize;
  grid.preset = 4;
  const Outcome g = run_spec(grid);
  REQUIRE(g.status == 0);
  std::istringstream lines(g.out);
  std::string line;
  int rows = -1, zeros = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (rows > 0 && line.substr(line.rfind(',') + 1) == "0") ++zeros;
  }
  CHECK(rows == 100);
  CHECK(zeros > 0);
}

TEST_CASE("figure output is reproducible for a fixed seed") {
  ExperimentSpec spec;
  spec.mode = Mode::figure;
  spec.figure = 7;
  spec.seed = 3;
  spec.trials = 300;
  spec.threads = 1;
  const Outcome a = run_spec(spec);
  spec.threads = 2;
  const Outcome b = run_spec(spec);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  spec.seed = 4;
  CHECK(run_spec(spec).out != a.out);
}
