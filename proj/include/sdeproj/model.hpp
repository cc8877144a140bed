#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sdeproj {

using ScalarFn = std::function<double(double)>;

// Time-homogeneous scalar diffusion dX = b(X)dt + sigma(X)dW on [0, 1],
// with analytic first/second derivatives supplied alongside the
// coefficients. kappa0/kappa1 are the declared ellipticity bounds
// 0 < kappa0 <= sigma <= kappa1.
struct DiffusionModel {
  std::string name;
  ScalarFn b;
  ScalarFn b_prime;
  ScalarFn sigma;
  ScalarFn sigma_prime;
  ScalarFn sigma_double_prime;
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double x0 = 0.0;
  bool sup_sigma_at_most_one = false;

  double sigma_sq(double x) const {
    const double s = sigma(x);
    return s * s;
  }

  // Same dynamics seen from the starting point: coefficients translated so
  // the process starts at 0.
  DiffusionModel shifted_to_origin() const;
};

struct ProbeGrid {
  double lo = -10.0;
  double hi = 10.0;
  std::size_t points = 2001;

  std::vector<double> values() const;
  static ProbeGrid standard() { return ProbeGrid{}; }
};

// Smoothness ball used to parametrize estimators and benchmarks: functions
// whose derivative of order d (the largest integer strictly below beta) is
// Holder of exponent beta - d with constant R.
struct HolderClassSpec {
  enum class Support { compact, growing, real_line };
  double beta = 2.0;
  double R = 1.0;
  Support support = Support::compact;
  double A = -1.0;
  double B = 1.0;
  double growing_a = 1.0;  // growing windows use [-a sqrt(log N), a sqrt(log N)]

  int derivative_order() const;  // largest integer strictly below beta
};

struct AssumptionReport {
  // coefficient regularity: max slope of |b(x)-b(y)| + |sigma(x)-sigma(y)|
  // over consecutive probe points
  double lipschitz_estimate = 0.0;
  bool lipschitz_finite = false;

  double min_sigma = 0.0;
  double max_sigma = 0.0;
  double ellipticity_lower_margin = 0.0;  // min sigma - kappa0
  double ellipticity_upper_margin = 0.0;  // kappa1 - max sigma
  bool elliptic = false;

  // |sigma'| + |sigma''| <= C (1 + |x|)^gamma fitted on the probe grid
  double growth_exponent = 0.0;
  double growth_constant = 0.0;

  // tail condition: |∫_0^A du/sigma(u)| >= |A| at each probe-grid endpoint
  struct TailCheck {
    double a = 0.0;
    double s_abs = 0.0;
    bool holds = false;
  };
  std::vector<TailCheck> integral_condition;
  bool integral_condition_holds = false;

  bool sup_sigma_at_most_one = false;
};

// Probes the model on the given grid and reports constants for the standing
// regularity/ellipticity/tail conditions. Throws non_positive_sigma when
// sigma is not strictly positive somewhere on the grid.
AssumptionReport check_assumptions(const DiffusionModel& model,
                                   const ProbeGrid& grid = ProbeGrid::standard());

// ---- stock models -------------------------------------------------------

DiffusionModel constant_model(double sigma_value, double b_value = 0.0);

// b = 1/(2+cos x), sigma = sqrt(4/5) + 1/(4*pi + x^2); elliptic, sigma < 1.
DiffusionModel example_model();

// b = 0, sigma = 2 + sin x; strongly state-dependent volatility, used by
// the discretization-order probes.
DiffusionModel sine_volatility_model();

// Model from user-supplied coefficient expressions (see compile_expression).
// Derivative expressions are required; a finite-difference cross-check of
// them is part of the standard test battery rather than of construction.
DiffusionModel custom_model(const std::string& b, const std::string& b_prime,
                            const std::string& sigma,
                            const std::string& sigma_prime,
                            const std::string& sigma_double_prime,
                            double kappa0, double kappa1, double x0 = 0.0);

}  // namespace sdeproj
