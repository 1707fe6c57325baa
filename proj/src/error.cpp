#include "secnet/error.hpp"

namespace secnet {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::resource: return "resource";
    case ErrorCode::mode: return "mode";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::bracket: return "bracket";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::search: return "search";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config: return 2;
    case ErrorCode::infeasible: return 3;
    default: return 4;
  }
}

}  // namespace secnet
