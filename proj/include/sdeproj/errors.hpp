#pragma once

#include <stdexcept>
#include <string>

namespace sdeproj {

enum class ErrorCode {
  config,               // bad configuration or arguments
  precondition,         // caller violated a documented precondition
  non_positive_sigma,   // diffusion coefficient not strictly positive
  simulation_diverged,  // non-finite state during path simulation
  degenerate_knots,     // basis has too few intervals / frequencies
  missing_fine_grid,    // operation needs sub-grid data that was not retained
  singular_design,      // normal equations singular with the ball constraint slack
  codebook_infeasible,  // requested more codewords than the search can place
  quadrature_failure,   // adaptive quadrature did not converge
  degenerate_abscissae, // slope fit with fewer than 3 distinct x values
  insufficient_rungs,   // ladder with fewer than 4 rungs
};

// True for failures of the numerics rather than of the input description.
bool is_numerical(ErrorCode code);

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace sdeproj
