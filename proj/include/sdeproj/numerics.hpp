#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sdeproj {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t count = 0;
};

MeanSe mean_se(std::span<const double> values);

double sample_variance(std::span<const double> values);

double median(std::vector<double> values);  // by copy; values get reordered

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
};

// Weighted least squares line y ~ intercept + slope * x.
// Throws degenerate_abscissae when fewer than 3 distinct x values carry
// positive weight.
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w);

LineFit line_fit(std::span<const double> x, std::span<const double> y);

// Adaptive Simpson integration; throws quadrature_failure when the recursion
// bottoms out before reaching the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 32);

// Fixed 7-point Gauss-Legendre rule on [a, b]; exact for polynomials up to
// degree 13, used for short smooth segments.
double gauss_legendre7(const std::function<double(double)>& f, double a, double b);

double norm_cdf(double x);
double norm_pdf(double x);

}  // namespace sdeproj
