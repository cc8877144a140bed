#pragma once

#include <cstdint>
#include <vector>

#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/rng.hpp"

namespace sdeproj {

// Scale/measure transforms of a diffusion, precomputed on a grid so that
// pointwise queries are cheap and deterministic:
//   S(x)  = int_0^x du / sigma(u)          (unit-diffusion scale)
//   H(x)  = int_0^x [b/sigma^2 - sigma'/(2 sigma)] du  (log density weight)
//   G(z)  = -(1/2)[g1^2 + sigma g2](S^{-1}(z)), with
//           g1 = b/sigma - sigma'/2,
//           g2 = (b' sigma - b sigma')/sigma^2 - sigma''/2
// Grid values carry local Gauss-Legendre corrections, so S/H are accurate to
// ~1e-12 inside the build range; S_inv is a bracketed Newton iteration on S.
class DensityTransforms {
 public:
  explicit DensityTransforms(const DiffusionModel& model, double x_lo = -12.0,
                             double x_hi = 12.0, std::size_t cells = 16384);

  double S(double x) const;
  double S_inv(double z) const;
  double H(double x) const;
  double G(double z) const;         // exact composition
  double G_interp(double z) const;  // table lookup, used in bridge loops

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double z_lo() const { return s_grid_.front(); }
  double z_hi() const { return s_grid_.back(); }
  const DiffusionModel& model() const { return model_; }

 private:
  double cell_integral_s(double a, double b) const;
  double cell_integral_h(double a, double b) const;

  DiffusionModel model_;
  double x_lo_, x_hi_, step_;
  std::vector<double> s_grid_, h_grid_;
  double g_z_lo_ = 0.0, g_step_ = 0.0;
  std::vector<double> g_table_;
};

struct DensityValue {
  double value = 0.0;
  double se = 0.0;  // Monte Carlo standard error
};

struct BridgeOptions {
  std::size_t bridges = 10000;
  std::size_t steps = 64;
  bool first_order = false;  // factor 1 + (t-s) * mean integrated G
};

// Transition density p(s, t, x, y): Gaussian-in-scale prefactor times the
// expected exponential of the integrated G along a Brownian bridge between
// S(x) and S(y). Requires t > s.
DensityValue transition_density(const DensityTransforms& transforms, double s,
                                double t, double x, double y,
                                const BridgeOptions& options, RngStream& rng);

// Convenience overload; builds the transforms internally (expensive, meant
// for one-off evaluations).
DensityValue transition_density(const DiffusionModel& model, double s, double t,
                                double x, double y,
                                const BridgeOptions& options,
                                std::uint64_t seed);

// Occupation-measure density of the observation grid,
// (1/n) sum_{k=1}^{n-1} p(0, k/n, 0, y); needs n >= 2.
DensityValue occupation_density(const DensityTransforms& transforms,
                                std::size_t n, double y,
                                const BridgeOptions& options,
                                std::uint64_t seed);

// sup over grid times k/n, k = 1..n, of P(|X_t| > level), estimated from
// simulated paths; se is the binomial standard error at the maximizing time.
struct ExitProbability {
  double value = 0.0;
  double se = 0.0;
  double argmax_t = 0.0;
};
ExitProbability exit_probability(const DiffusionModel& model, double level,
                                 std::size_t mc_paths, std::size_t n,
                                 std::size_t substeps, std::uint64_t seed);

}  // namespace sdeproj
