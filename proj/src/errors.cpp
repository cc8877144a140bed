#include "sdeproj/errors.hpp"

namespace sdeproj {

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::precondition:
      return false;
    default:
      return true;
  }
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::config: return "config";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::non_positive_sigma: return "non_positive_sigma";
    case ErrorCode::simulation_diverged: return "simulation_diverged";
    case ErrorCode::degenerate_knots: return "degenerate_knots";
    case ErrorCode::missing_fine_grid: return "missing_fine_grid";
    case ErrorCode::singular_design: return "singular_design";
    case ErrorCode::codebook_infeasible: return "codebook_infeasible";
    case ErrorCode::quadrature_failure: return "quadrature_failure";
    case ErrorCode::degenerate_abscissae: return "degenerate_abscissae";
    case ErrorCode::insufficient_rungs: return "insufficient_rungs";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace sdeproj
