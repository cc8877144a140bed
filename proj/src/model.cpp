#include "sdeproj/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"
#include "sdeproj/expression.hpp"
#include "sdeproj/numerics.hpp"

namespace sdeproj {

DiffusionModel DiffusionModel::shifted_to_origin() const {
  if (x0 == 0.0) return *this;
  DiffusionModel out = *this;
  const double shift = x0;
  out.name = name + "(shifted)";
  out.b = [f = b, shift](double x) { return f(x + shift); };
  out.b_prime = [f = b_prime, shift](double x) { return f(x + shift); };
  out.sigma = [f = sigma, shift](double x) { return f(x + shift); };
  out.sigma_prime = [f = sigma_prime, shift](double x) { return f(x + shift); };
  out.sigma_double_prime = [f = sigma_double_prime, shift](double x) {
    return f(x + shift);
  };
  out.x0 = 0.0;
  return out;
}

std::vector<double> ProbeGrid::values() const {
  require(points >= 2, ErrorCode::precondition, "probe grid needs >= 2 points");
  require(hi > lo, ErrorCode::precondition, "probe grid needs hi > lo");
  std::vector<double> xs(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = lo + step * static_cast<double>(i);
  }
  xs.back() = hi;
  return xs;
}

int HolderClassSpec::derivative_order() const {
  require(beta >= 1.0, ErrorCode::precondition, "smoothness index must be >= 1");
  // largest integer strictly below beta
  return static_cast<int>(std::ceil(beta)) - 1;
}

AssumptionReport check_assumptions(const DiffusionModel& model,
                                   const ProbeGrid& grid) {
  const std::vector<double> xs = grid.values();
  AssumptionReport report;
  report.sup_sigma_at_most_one = true;

  std::vector<double> sig(xs.size()), drift(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sig[i] = model.sigma(xs[i]);
    drift[i] = model.b(xs[i]);
    require(std::isfinite(sig[i]) && std::isfinite(drift[i]),
            ErrorCode::non_positive_sigma,
            "non-finite coefficient at x=" + std::to_string(xs[i]));
    require(sig[i] > 0.0, ErrorCode::non_positive_sigma,
            "sigma(x) <= 0 at x=" + std::to_string(xs[i]));
    if (sig[i] > 1.0) report.sup_sigma_at_most_one = false;
  }

  report.min_sigma = *std::min_element(sig.begin(), sig.end());
  report.max_sigma = *std::max_element(sig.begin(), sig.end());
  report.ellipticity_lower_margin = report.min_sigma - model.kappa0;
  report.ellipticity_upper_margin = model.kappa1 - report.max_sigma;
  report.elliptic = model.kappa0 > 0.0 &&
                    report.ellipticity_lower_margin >= -1e-12 &&
                    report.ellipticity_upper_margin >= -1e-12;

  double worst_slope = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double dx = xs[i + 1] - xs[i];
    const double num =
        std::abs(drift[i + 1] - drift[i]) + std::abs(sig[i + 1] - sig[i]);
    worst_slope = std::max(worst_slope, num / dx);
  }
  report.lipschitz_estimate = worst_slope;
  report.lipschitz_finite = std::isfinite(worst_slope);

  // derivative growth: |sigma'| + |sigma''| against (1 + |x|)^gamma
  {
    std::vector<double> lx, ly;
    double cmax = 0.0;
    for (double x : xs) {
      const double mag =
          std::abs(model.sigma_prime(x)) + std::abs(model.sigma_double_prime(x));
      cmax = std::max(cmax, mag / 1.0);
      lx.push_back(std::log1p(std::abs(x)));
      ly.push_back(std::log(mag + 1e-300));
    }
    // guard the fit against the all-zero-derivative case
    if (*std::max_element(ly.begin(), ly.end()) < std::log(1e-290)) {
      report.growth_exponent = 0.0;
      report.growth_constant = 0.0;
    } else {
      const LineFit fit = line_fit(lx, ly);
      report.growth_exponent = fit.slope;
      double c = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double mag = std::exp(ly[i]);
        c = std::max(c, mag / std::pow(1.0 + std::abs(xs[i]),
                                       std::max(0.0, fit.slope)));
      }
      report.growth_constant = c;
    }
  }

  // tail condition at the probe-grid endpoints
  report.integral_condition_holds = true;
  for (double a : {grid.lo, grid.hi}) {
    AssumptionReport::TailCheck check;
    check.a = a;
    const double s =
        integrate([&](double u) { return 1.0 / model.sigma(u); }, 0.0, a, 1e-9);
    check.s_abs = std::abs(s);
    check.holds = check.s_abs >= std::abs(a) - 1e-9;
    report.integral_condition_holds &= check.holds;
    report.integral_condition.push_back(check);
  }

  return report;
}

DiffusionModel constant_model(double sigma_value, double b_value) {
  require(sigma_value > 0.0, ErrorCode::non_positive_sigma,
          "constant model needs sigma > 0");
  DiffusionModel m;
  m.name = b_value == 0.0 && sigma_value == 1.0 ? "constant_unit" : "constant";
  m.b = [b_value](double) { return b_value; };
  m.b_prime = [](double) { return 0.0; };
  m.sigma = [sigma_value](double) { return sigma_value; };
  m.sigma_prime = [](double) { return 0.0; };
  m.sigma_double_prime = [](double) { return 0.0; };
  m.kappa0 = sigma_value;
  m.kappa1 = sigma_value;
  m.sup_sigma_at_most_one = sigma_value <= 1.0;
  return m;
}

DiffusionModel example_model() {
  DiffusionModel m;
  m.name = "example";
  const double four_pi = 4.0 * std::numbers::pi;
  m.b = [](double x) { return 1.0 / (2.0 + std::cos(x)); };
  m.b_prime = [](double x) {
    const double d = 2.0 + std::cos(x);
    return std::sin(x) / (d * d);
  };
  m.sigma = [four_pi](double x) {
    return std::sqrt(0.8) + 1.0 / (four_pi + x * x);
  };
  m.sigma_prime = [four_pi](double x) {
    const double d = four_pi + x * x;
    return -2.0 * x / (d * d);
  };
  m.sigma_double_prime = [four_pi](double x) {
    const double d = four_pi + x * x;
    return -2.0 / (d * d) + 8.0 * x * x / (d * d * d);
  };
  m.kappa0 = std::sqrt(0.8);
  m.kappa1 = std::sqrt(0.8) + 1.0 / four_pi;
  m.sup_sigma_at_most_one = true;
  return m;
}

DiffusionModel sine_volatility_model() {
  DiffusionModel m;
  m.name = "sine_volatility";
  m.b = [](double) { return 0.0; };
  m.b_prime = [](double) { return 0.0; };
  m.sigma = [](double x) { return 2.0 + std::sin(x); };
  m.sigma_prime = [](double x) { return std::cos(x); };
  m.sigma_double_prime = [](double x) { return -std::sin(x); };
  m.kappa0 = 1.0;
  m.kappa1 = 3.0;
  m.sup_sigma_at_most_one = false;
  return m;
}

DiffusionModel custom_model(const std::string& b, const std::string& b_prime,
                            const std::string& sigma,
                            const std::string& sigma_prime,
                            const std::string& sigma_double_prime,
                            double kappa0, double kappa1, double x0) {
  require(kappa0 > 0.0 && kappa1 >= kappa0, ErrorCode::config,
          "custom model needs 0 < kappa0 <= kappa1");
  DiffusionModel m;
  m.name = "custom";
  m.b = compile_expression(b);
  m.b_prime = compile_expression(b_prime);
  m.sigma = compile_expression(sigma);
  m.sigma_prime = compile_expression(sigma_prime);
  m.sigma_double_prime = compile_expression(sigma_double_prime);
  m.kappa0 = kappa0;
  m.kappa1 = kappa1;
  m.x0 = x0;
  m.sup_sigma_at_most_one = kappa1 <= 1.0;
  return m;
}

}  // namespace sdeproj
