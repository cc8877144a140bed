#include <cmath>
#include <cstddef>

#include <doctest.h>

#include "sdeproj/density.hpp"
#include "sdeproj/errors.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/rng.hpp"

using namespace sdeproj;

namespace {

double gaussian_density(double mean, double var, double y) {
  const double s = std::sqrt(var);
  return norm_pdf((y - mean) / s) / s;
}

}  // namespace

TEST_CASE("scale and weight transforms have closed forms for b = 0") {
  const DiffusionModel model = sine_volatility_model();  // sigma = 2 + sin x
  const DensityTransforms transforms(model);
  for (double x : {-3.0, -1.1, 0.0, 0.4, 2.7}) {
    const double s_ref = integrate(
        [&](double u) { return 1.0 / model.sigma(u); }, 0.0, x, 1e-12);
    CHECK(transforms.S(x) == doctest::Approx(s_ref).epsilon(1e-9));
    // with no drift, H(x) = -log(sigma(x)/sigma(0))/2
    const double h_ref = -0.5 * std::log(model.sigma(x) / model.sigma(0.0));
    CHECK(transforms.H(x) == doctest::Approx(h_ref).epsilon(1e-9));
    CHECK(transforms.S_inv(transforms.S(x)) ==
          doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("curvature table G matches its defining composition") {
  const DiffusionModel model = example_model();
  const DensityTransforms transforms(model);
  for (double z : {-2.0, -0.7, 0.0, 0.5, 1.9}) {
    const double x = transforms.S_inv(z);
    const double b = model.b(x), bp = model.b_prime(x);
    const double s = model.sigma(x), sp = model.sigma_prime(x),
                 spp = model.sigma_double_prime(x);
    const double g1 = b / s - sp / 2.0;
    const double g2 = (bp * s - b * sp) / (s * s) - spp / 2.0;
    const double expect = -0.5 * (g1 * g1 + s * g2);
    CHECK(transforms.G(z) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(transforms.G_interp(z) == doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("unit Brownian transition density is exact with zero noise") {
  const DensityTransforms transforms(constant_model(1.0));
  BridgeOptions opt;
  opt.bridges = 200;
  opt.steps = 8;
  RngStream rng(stream_key(42, StreamTag::bridge));
  for (double t : {0.1, 0.5, 1.0}) {
    for (double y : {0.0, 0.7, -1.3, 2.0}) {
      const DensityValue p = transition_density(transforms, 0.0, t, 0.0, y,
                                                opt, rng);
      CHECK(p.value == doctest::Approx(gaussian_density(0.0, t, y))
                           .epsilon(1e-12));
      CHECK(p.se <= 1e-14);
    }
  }
}

TEST_CASE("scaled Brownian density and interior start point") {
  const DensityTransforms transforms(constant_model(2.0));
  BridgeOptions opt;
  opt.bridges = 100;
  opt.steps = 8;
  RngStream rng(stream_key(43, StreamTag::bridge));
  const DensityValue p =
      transition_density(transforms, 0.25, 0.75, 0.4, -0.9, opt, rng);
  CHECK(p.value ==
        doctest::Approx(gaussian_density(0.4, 4.0 * 0.5, -0.9)).epsilon(1e-12));
  CHECK(p.se <= 1e-14);
}

TEST_CASE("first-order factor agrees with the exponential one for flat G") {
  const DensityTransforms transforms(constant_model(1.0));
  BridgeOptions exp_opt, lin_opt;
  exp_opt.bridges = lin_opt.bridges = 64;
  exp_opt.steps = lin_opt.steps = 8;
  lin_opt.first_order = true;
  RngStream r1(stream_key(9, StreamTag::bridge, 1));
  RngStream r2(stream_key(9, StreamTag::bridge, 1));
  const DensityValue a =
      transition_density(transforms, 0.0, 0.5, 0.0, 0.3, exp_opt, r1);
  const DensityValue b =
      transition_density(transforms, 0.0, 0.5, 0.0, 0.3, lin_opt, r2);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-13));
}

TEST_CASE("transition density demands an increasing time pair") {
  const DensityTransforms transforms(constant_model(1.0));
  BridgeOptions opt;
  RngStream rng(stream_key(1, StreamTag::bridge));
  CHECK_THROWS_AS(
      transition_density(transforms, 0.5, 0.5, 0.0, 0.0, opt, rng), Error);
}

TEST_CASE("seeded convenience overload is reproducible") {
  BridgeOptions opt;
  opt.bridges = 50;
  opt.steps = 8;
  const DensityValue a =
      transition_density(example_model(), 0.0, 0.5, 0.0, 0.2, opt, 77);
  const DensityValue b =
      transition_density(example_model(), 0.0, 0.5, 0.0, 0.2, opt, 77);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  CHECK(a.value > 0.0);
  CHECK(a.se > 0.0);  // genuine Monte Carlo spread for a curved model
}

TEST_CASE("occupation density of Brownian motion has a closed form") {
  const DensityTransforms transforms(constant_model(1.0));
  BridgeOptions opt;
  opt.bridges = 100;
  opt.steps = 8;
  const std::size_t n = 8;
  for (double y : {0.33, -0.8, 1.5}) {
    double expect = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      expect += gaussian_density(0.0, double(k) / double(n), y);
    }
    expect /= static_cast<double>(n);
    const DensityValue f = occupation_density(transforms, n, y, opt, 5);
    CHECK(f.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(f.se <= 1e-14);
  }
  CHECK_THROWS_AS(occupation_density(transforms, 1, 0.0, opt, 5), Error);
}

TEST_CASE("exit probability calibrates against the Gaussian tail") {
  // sup over observation times of P(|X_t| > level) for unit Brownian
  // motion is attained at t = 1 where it equals 2(1 - Phi(level))
  const ExitProbability low =
      exit_probability(constant_model(1.0), 1.0, 2000, 25, 2, 5);
  const double expect = 2.0 * (1.0 - norm_cdf(1.0));
  CHECK(low.se > 0.0);
  CHECK(std::abs(low.value - expect) <= 4.0 * low.se);
  CHECK(low.argmax_t > 0.5);
  CHECK(low.argmax_t <= 1.0);

  const ExitProbability high =
      exit_probability(constant_model(1.0), 3.0, 2000, 25, 2, 5);
  CHECK(high.value < low.value);
  CHECK(high.value >= 0.0);
}
