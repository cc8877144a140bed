#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdeproj/basis.hpp"
#include "sdeproj/regression.hpp"

namespace sdeproj {

// Least-squares projection of u on the basis span, with the coefficient
// vector confined to a Euclidean ball. `active`/`lambda` record whether the
// ball constraint binds and the multiplier found for it.
struct Estimate {
  BasisSpec spec;
  std::vector<double> coeffs;
  ConstraintBall constraint{};
  bool active = false;
  double lambda = 0.0;
  std::optional<double> truncation_level;  // set by truncate()

  std::string to_json() const;
  static Estimate from_json(const std::string& text);
  void save_json(const std::string& path) const;
  static Estimate load_json_file(const std::string& path);
};

// Minimizes (1/Nn) sum (u_i - h(x_i))^2 over h in the span with
// sum coeffs^2 <= radius_sq. Basis functions whose design column is
// identically zero (never-visited support) get coefficient 0 and are
// excluded from the solve. Throws singular_design when the reduced normal
// matrix is numerically singular and the ball constraint is slack.
Estimate fit(const RegressionData& data, const BasisSpec& spec,
             const ConstraintBall& ball);

// h(x) = sum coeffs_l phi_l(x), clipped from above at the truncation level
// when one is set. Spline estimates vanish outside [A, B].
double evaluate(const Estimate& estimate, double x);

// Returns a copy clipped from above at log(N): estimated values are capped
// but never raised, and negative values pass through unchanged.
Estimate truncate(const Estimate& estimate, std::size_t N);

// The empirical contrast (1/Nn) sum (u_i - fn(x_i))^2.
double contrast(const RegressionData& data, const ScalarFn& fn);
double contrast(const RegressionData& data, const Estimate& estimate);

// Data-size-driven model dimension for each asymptotic regime; never less
// than 2.
enum class DimensionRegime {
  compact_single_path,  // ceil(c * n^{1/(2 beta + 1)})
  compact_repeated,     // ceil(c * (N n)^{1/(2 beta + 1)})
  growing_interval,     // ceil(c * N^{2/(2 beta + 1)} / log(N)^{5/2})
};
std::size_t dimension_rule(DimensionRegime regime, std::size_t N, std::size_t n,
                           double beta, double c = 1.0);

}  // namespace sdeproj
