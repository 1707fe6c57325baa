#include <sstream>

#include "doctest.h"
#include "secnet/config.hpp"
#include "secnet/error.hpp"

using namespace secnet;

TEST_CASE("defaults are valid") {
  NetworkConfig n;
  QoSTargets q;
  CHECK_NOTHROW(n.validate());
  CHECK_NOTHROW(q.validate());
  CHECK(n.single_antenna());
}

TEST_CASE("invalid network configurations") {
  NetworkConfig n;
  n.alpha = 2.0;
  CHECK_THROWS_AS(n.validate(), Error);
  n = {};
  n.n_j = 2;
  CHECK_THROWS_AS(n.validate(), Error);
  n = {};
  n.n_t = 3;
  n.n_j = 3;
  CHECK_THROWS_AS(n.validate(), Error);
  n.n_j = 2;
  n.n_f = 3;
  CHECK_THROWS_AS(n.validate(), Error);
  n.n_f = 4;
  CHECK_NOTHROW(n.validate());
  QoSTargets q;
  q.epsilon = 1.0;
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_mw(0.0) == 1.0);
  CHECK(dbm_to_mw(20.0) == doctest::Approx(100.0));
  CHECK(dbm_to_mw(-10.0) == doctest::Approx(0.1));
}

TEST_CASE("key-value parsing") {
  std::istringstream in(
      "# scenario\n"
      "lambda_f = 2e-3   # inline comment\n"
      "\n"
      "name = \"a # b\"\n"
      "n_f=6\n");
  const auto kv = parse_key_values(in, "test.cfg");
  REQUIRE(kv.size() == 3);
  CHECK(kv[0].key == "lambda_f");
  CHECK(kv[0].value == "2e-3");
  CHECK(kv[0].line == 2);
  CHECK(kv[1].value == "a # b");
  CHECK(kv[2].key == "n_f");
  CHECK(kv[2].line == 5);
}

TEST_CASE("parse errors carry the line number") {
  auto message = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      parse_key_values(in, "s.cfg");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::config);
      return e.what();
    }
    return "";
  };
  CHECK(message("a = 1\n[net]\n").find("s.cfg:2:") == 0);
  CHECK(message("a = 1\nno equals\n").find("s.cfg:2:") == 0);
  CHECK(message("a = 1\nb = 2\na = 3\n").find("s.cfg:3:") == 0);
  CHECK(message("a =\n").find("s.cfg:1:") == 0);
}

TEST_CASE("strict number parsing") {
  CHECK(parse_real("1.5e-3", "") == 1.5e-3);
  CHECK_THROWS_AS(parse_real("1.5x", ""), Error);
  CHECK_THROWS_AS(parse_real("inf", ""), Error);
  CHECK(parse_integer("42", "") == 42);
  CHECK_THROWS_AS(parse_integer("4.2", ""), Error);
}
