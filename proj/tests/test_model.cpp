#include <cmath>
#include <numbers>

#include <doctest.h>

#include "sdeproj/errors.hpp"
#include "sdeproj/expression.hpp"
#include "sdeproj/model.hpp"

#include "test_support.hpp"

using namespace sdeproj;
using testsupport::fd_derivative;

namespace {

void check_model_derivatives(const DiffusionModel& model, double lo, double hi,
                             double tol) {
  for (int i = 0; i <= 20; ++i) {
    const double x = lo + (hi - lo) * i / 20.0;
    CHECK(model.b_prime(x) ==
          doctest::Approx(fd_derivative(model.b, x)).epsilon(tol));
    CHECK(model.sigma_prime(x) ==
          doctest::Approx(fd_derivative(model.sigma, x)).epsilon(tol));
    CHECK(model.sigma_double_prime(x) ==
          doctest::Approx(fd_derivative(model.sigma_prime, x)).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("stock model derivatives match finite differences") {
  check_model_derivatives(example_model(), -3.0, 3.0, 1e-6);
  check_model_derivatives(sine_volatility_model(), -3.0, 3.0, 1e-6);
  check_model_derivatives(constant_model(2.0, 0.5), -3.0, 3.0, 1e-6);
}

TEST_CASE("example model stays strictly inside its ellipticity band") {
  const DiffusionModel m = example_model();
  CHECK(m.kappa0 > 0.0);
  CHECK(m.kappa1 <= 1.0);
  CHECK(m.sup_sigma_at_most_one);
  for (int i = -400; i <= 400; ++i) {
    const double x = i / 40.0;
    const double s = m.sigma(x);
    CHECK(s >= m.kappa0);
    CHECK(s <= m.kappa1);
  }
}

TEST_CASE("expression compiler evaluates composed arithmetic") {
  auto f = compile_expression("2*x^2 + sin(pi*x) - exp(-x)/3");
  const double x = 0.7;
  const double expect =
      2 * x * x + std::sin(std::numbers::pi * x) - std::exp(-x) / 3.0;
  CHECK(f(x) == doctest::Approx(expect).epsilon(1e-14));

  auto g = compile_expression("sqrt(abs(x-1)) + tanh(x)");
  CHECK(g(0.5) ==
        doctest::Approx(std::sqrt(0.5) + std::tanh(0.5)).epsilon(1e-14));
}

TEST_CASE("expression compiler flags malformed input") {
  CHECK_THROWS_AS(compile_expression("2*/x"), Error);
  CHECK_THROWS_AS(compile_expression("sin(x"), Error);
  CHECK_THROWS_AS(compile_expression("x + unknownfn(x)"), Error);
  // unary signs are legal, not malformed
  CHECK(compile_expression("2*+x")(3.0) == doctest::Approx(6.0));
  CHECK(compile_expression("2*-x")(3.0) == doctest::Approx(-6.0));
}

TEST_CASE("custom model wires expressions and start point") {
  const DiffusionModel m = custom_model("x/4", "0.25", "1 + 0.1*cos(x)",
                                        "-0.1*sin(x)", "-0.1*cos(x)", 0.8, 1.2,
                                        0.5);
  CHECK(m.x0 == doctest::Approx(0.5));
  CHECK(m.sigma(0.0) == doctest::Approx(1.1).epsilon(1e-14));
  check_model_derivatives(m, -2.0, 2.0, 1e-6);

  const DiffusionModel shifted = m.shifted_to_origin();
  CHECK(shifted.x0 == doctest::Approx(0.0));
  CHECK(shifted.sigma(0.0) == doctest::Approx(m.sigma(0.5)).epsilon(1e-14));
  CHECK(shifted.b(-0.5) == doctest::Approx(m.b(0.0)).epsilon(1e-14));
}

TEST_CASE("holder spec derivative order is the largest integer below beta") {
  HolderClassSpec spec;
  spec.beta = 2.0;
  CHECK(spec.derivative_order() == 1);
  spec.beta = 2.5;
  CHECK(spec.derivative_order() == 2);
  spec.beta = 3.0;
  CHECK(spec.derivative_order() == 2);
  spec.beta = 1.0;
  CHECK(spec.derivative_order() == 0);
}

TEST_CASE("assumption report certifies the example model") {
  const AssumptionReport rep = check_assumptions(example_model());
  CHECK(rep.lipschitz_finite);
  CHECK(rep.lipschitz_estimate > 0.0);
  CHECK(rep.elliptic);
  CHECK(rep.ellipticity_lower_margin >= 0.0);
  CHECK(rep.ellipticity_upper_margin >= 0.0);
  CHECK(rep.min_sigma > 0.8);
  CHECK(rep.max_sigma < 1.0);
  CHECK(rep.sup_sigma_at_most_one);
  CHECK(rep.integral_condition_holds);
  CHECK(!rep.integral_condition.empty());
  for (const auto& tail : rep.integral_condition) {
    CHECK(tail.holds);
    CHECK(tail.s_abs >= std::abs(tail.a));
  }
}

TEST_CASE("assumption probe rejects vanishing volatility") {
  DiffusionModel bad = constant_model(1.0);
  bad.sigma = [](double x) { return x; };  // zero at the origin
  CHECK_THROWS_AS(check_assumptions(bad), Error);
  try {
    check_assumptions(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_positive_sigma);
  }
}

TEST_CASE("probe grid covers the requested window") {
  ProbeGrid grid;
  grid.lo = -2.0;
  grid.hi = 2.0;
  grid.points = 5;
  const auto v = grid.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == doctest::Approx(-2.0));
  CHECK(v.back() == doctest::Approx(2.0));
  CHECK(v[2] == doctest::Approx(0.0));
}
