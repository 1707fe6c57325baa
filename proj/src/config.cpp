#include "secnet/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "secnet/error.hpp"

namespace secnet {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::domain, what); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool probability_open(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

void NetworkConfig::validate() const {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) bad("alpha must exceed 2");
  if (!(lambda_h >= 0.0) || !(lambda_f >= 0.0) || !(lambda_e >= 0.0)) {
    bad("densities must be non-negative");
  }
  if (!(p_h > 0.0) || !(p_f > 0.0) || !(p_t > 0.0)) bad("powers must be positive");
  if (!(d_f > 0.0) || !(d_h > 0.0)) bad("pair distances must be positive");
  if (n_h < 1 || n_e < 1) bad("n_h and n_e must be at least 1");
  if (n_t < 1) bad("n_t must be at least 1");
  if (single_antenna()) {
    if (n_j != 1) bad("single-antenna jamming (n_t = 1) requires n_j = 1");
    if (n_f < 3) bad("single-antenna jamming requires n_f >= 3");
  } else {
    if (n_j < 1 || n_j > n_t - 1) bad("multi-antenna jamming requires 1 <= n_j <= n_t - 1");
    if (n_f < n_t + 1) bad("multi-antenna jamming requires n_f >= n_t + 1");
  }
}

void QoSTargets::validate() const {
  if (!probability_open(sigma)) bad("sigma must lie in (0, 1)");
  if (!probability_open(sigma_c)) bad("sigma_c must lie in (0, 1)");
  if (!probability_open(epsilon)) bad("epsilon must lie in (0, 1)");
  if (!(t_c >= 0.0) || !std::isfinite(t_c)) bad("t_c must be non-negative");
}

double dbm_to_mw(double dbm) noexcept { return std::pow(10.0, dbm / 10.0); }

std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source) {
  std::vector<KeyValue> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto where = [&] { return source + ":" + std::to_string(line) + ": "; };
    std::string text = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '"') quoted = !quoted;
      if (text[i] == '#' && !quoted) {
        text.resize(i);
        break;
      }
    }
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      throw Error(ErrorCode::config, where() + "sections are not supported, keys are flat");
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::config, where() + "expected 'key = value', got '" + text + "'");
    }
    KeyValue kv{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
    if (kv.key.empty()) throw Error(ErrorCode::config, where() + "missing key");
    if (kv.value.size() >= 2 && kv.value.front() == '"' && kv.value.back() == '"') {
      kv.value = kv.value.substr(1, kv.value.size() - 2);
    } else if (kv.value.empty()) {
      throw Error(ErrorCode::config, where() + "missing value for '" + kv.key + "'");
    }
    for (const auto& prev : out) {
      if (prev.key == kv.key) {
        throw Error(ErrorCode::config, where() + "duplicate key '" + kv.key + "' (first on line " +
                                           std::to_string(prev.line) + ")");
      }
    }
    out.push_back(std::move(kv));
  }
  return out;
}

double parse_real(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::config, where + "'" + text + "' is not a finite number");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw Error(ErrorCode::config, where + "'" + text + "' is not an integer");
  }
  return v;
}

}  // namespace secnet
