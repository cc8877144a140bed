#include "sdeproj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(values.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(values.size() - 1);
}

double median(std::vector<double> values) {
  require(!values.empty(), ErrorCode::precondition, "median of empty range");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  std::nth_element(values.begin(), values.begin() + mid - 1, values.end());
  return 0.5 * (values[mid - 1] + hi);
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w) {
  require(x.size() == y.size() && x.size() == w.size(), ErrorCode::precondition,
          "line fit inputs must have equal length");
  std::vector<double> xs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] > 0.0) xs.push_back(x[i]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());
  require(xs.size() >= 3, ErrorCode::degenerate_abscissae,
          "slope fit needs at least 3 distinct abscissae with positive weight");

  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;

  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += w[i] * (y[i] - pred) * (y[i] - pred);
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  const std::size_t nobs = x.size();
  if (nobs > 2) {
    // residual-based slope standard error, weights treated as 1/variance scale
    const double dof = static_cast<double>(nobs - 2);
    fit.slope_se = std::sqrt(std::max(0.0, ss_res / dof) / sxx);
  }
  return fit;
}

LineFit line_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size(), 1.0);
  return weighted_line_fit(x, y, w);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  require(depth > 0, ErrorCode::quadrature_failure,
          "adaptive integration did not converge");
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  require(std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fm),
          ErrorCode::quadrature_failure, "non-finite integrand");
  const double whole = simpson(a, fa, b, fb, fm);
  return sign * adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double gauss_legendre7(const std::function<double(double)>& f, double a, double b) {
  // nodes/weights for [-1, 1]
  static const double node[7] = {
      0.0,
      0.4058451513773971669066064,  -0.4058451513773971669066064,
      0.7415311855993944398638648,  -0.7415311855993944398638648,
      0.9491079123427585245261897,  -0.9491079123427585245261897};
  static const double weight[7] = {
      0.4179591836734693877551020,
      0.3818300505051189449503698, 0.3818300505051189449503698,
      0.2797053914892766679014678, 0.2797053914892766679014678,
      0.1294849661688696932706114, 0.1294849661688696932706114};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) sum += weight[i] * f(c + h * node[i]);
  return h * sum;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace sdeproj
