#pragma once

#include <stdexcept>
#include <string>

namespace secnet {

enum class ErrorCode {
  domain,         // argument outside the mathematical domain
  resource,       // request exceeds a configured resource cap
  mode,           // operation not defined for the active antenna mode
  quadrature,     // adaptive quadrature did not reach its tolerance
  bracket,        // root bracket could not be established
  infeasible,     // QoS targets cannot be met
  search,         // optimizer search found no admissible point
  config,         // configuration / command line problem
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type carried by every module; `code()` is machine readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Quadrature failure; keeps the tolerance that was actually reached.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(ErrorCode::quadrature, what), achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Process exit status for an error code (0 is reserved for success).
int exit_status(ErrorCode code) noexcept;

}  // namespace secnet
