#include "sdeproj/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"
#include "sdeproj/simulate.hpp"

namespace sdeproj {

namespace {
constexpr std::size_t kGTableCells = 32768;
}

DensityTransforms::DensityTransforms(const DiffusionModel& model, double x_lo,
                                     double x_hi, std::size_t cells)
    : model_(model.x0 == 0.0 ? model : model.shifted_to_origin()),
      x_lo_(x_lo),
      x_hi_(x_hi) {
  require(x_hi > x_lo, ErrorCode::precondition, "transform range needs hi > lo");
  require(x_lo <= 0.0 && x_hi >= 0.0, ErrorCode::precondition,
          "transform range must contain 0");
  require(cells >= 16, ErrorCode::precondition, "too few transform cells");
  step_ = (x_hi_ - x_lo_) / static_cast<double>(cells);

  // sanity-probe sigma before integrating across the range
  for (std::size_t i = 0; i <= cells; ++i) {
    const double x = x_lo_ + step_ * static_cast<double>(i);
    const double s = model_.sigma(x);
    require(std::isfinite(s) && s > 0.0, ErrorCode::non_positive_sigma,
            "sigma must be strictly positive on the transform range");
  }

  // cumulative grids anchored at 0
  s_grid_.assign(cells + 1, 0.0);
  h_grid_.assign(cells + 1, 0.0);
  const std::size_t zero_cell = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(cells),
                       std::max(0.0, std::floor((0.0 - x_lo_) / step_))));
  // integrate outward from the anchor cell boundary closest to 0
  std::vector<double> ds(cells), dh(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = x_lo_ + step_ * static_cast<double>(i);
    const double b = a + step_;
    ds[i] = cell_integral_s(a, b);
    dh[i] = cell_integral_h(a, b);
  }
  // absolute values at nodes: node i corresponds to x_lo + i*step
  const double anchor = x_lo_ + step_ * static_cast<double>(zero_cell);
  double s_anchor = cell_integral_s(0.0, anchor);
  double h_anchor = cell_integral_h(0.0, anchor);
  s_grid_[zero_cell] = s_anchor;
  h_grid_[zero_cell] = h_anchor;
  for (std::size_t i = zero_cell; i < cells; ++i) {
    s_grid_[i + 1] = s_grid_[i] + ds[i];
    h_grid_[i + 1] = h_grid_[i] + dh[i];
  }
  for (std::size_t i = zero_cell; i-- > 0;) {
    s_grid_[i] = s_grid_[i + 1] - ds[i];
    h_grid_[i] = h_grid_[i + 1] - dh[i];
  }

  // G lookup table over the reachable z range
  g_z_lo_ = s_grid_.front();
  const double z_hi = s_grid_.back();
  g_step_ = (z_hi - g_z_lo_) / static_cast<double>(kGTableCells);
  g_table_.resize(kGTableCells + 1);
  for (std::size_t i = 0; i <= kGTableCells; ++i) {
    const double z = i == kGTableCells ? z_hi
                                       : g_z_lo_ + g_step_ * static_cast<double>(i);
    g_table_[i] = G(z);
  }
}

double DensityTransforms::cell_integral_s(double a, double b) const {
  return gauss_legendre7([&](double u) { return 1.0 / model_.sigma(u); }, a, b);
}

double DensityTransforms::cell_integral_h(double a, double b) const {
  return gauss_legendre7(
      [&](double u) {
        const double sig = model_.sigma(u);
        return model_.b(u) / (sig * sig) -
               model_.sigma_prime(u) / (2.0 * sig);
      },
      a, b);
}

double DensityTransforms::S(double x) const {
  require(x >= x_lo_ && x <= x_hi_, ErrorCode::precondition,
          "x outside the transform build range");
  const double pos = (x - x_lo_) / step_;
  std::size_t cell = static_cast<std::size_t>(std::min(
      static_cast<double>(s_grid_.size() - 2), std::max(0.0, std::floor(pos))));
  const double node = x_lo_ + step_ * static_cast<double>(cell);
  return s_grid_[cell] + cell_integral_s(node, x);
}

double DensityTransforms::H(double x) const {
  require(x >= x_lo_ && x <= x_hi_, ErrorCode::precondition,
          "x outside the transform build range");
  const double pos = (x - x_lo_) / step_;
  std::size_t cell = static_cast<std::size_t>(std::min(
      static_cast<double>(h_grid_.size() - 2), std::max(0.0, std::floor(pos))));
  const double node = x_lo_ + step_ * static_cast<double>(cell);
  return h_grid_[cell] + cell_integral_h(node, x);
}

double DensityTransforms::S_inv(double z) const {
  require(z >= s_grid_.front() - 1e-12 && z <= s_grid_.back() + 1e-12,
          ErrorCode::precondition, "z outside the transform build range");
  const auto it = std::lower_bound(s_grid_.begin(), s_grid_.end(), z);
  std::size_t hi_idx = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(it - s_grid_.begin(), 1,
                                 static_cast<std::ptrdiff_t>(s_grid_.size() - 1)));
  double lo = x_lo_ + step_ * static_cast<double>(hi_idx - 1);
  double hi = x_lo_ + step_ * static_cast<double>(hi_idx);
  // safeguarded Newton on S(x) = z, using S' = 1/sigma
  double x = 0.5 * (lo + hi);
  const double tol = 1e-12 * std::max(1.0, std::abs(z));
  for (int iter = 0; iter < 100; ++iter) {
    const double res = S(x) - z;
    if (std::abs(res) <= tol) break;
    if (res > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - res * model_.sigma(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double DensityTransforms::G(double z) const {
  const double v = S_inv(z);
  const double sig = model_.sigma(v);
  const double sp = model_.sigma_prime(v);
  const double g1 = model_.b(v) / sig - 0.5 * sp;
  const double g2 = (model_.b_prime(v) * sig - model_.b(v) * sp) / (sig * sig) -
                    0.5 * model_.sigma_double_prime(v);
  return -0.5 * (g1 * g1 + sig * g2);
}

double DensityTransforms::G_interp(double z) const {
  if (z <= g_z_lo_) return g_table_.front();
  const double pos = (z - g_z_lo_) / g_step_;
  if (pos >= static_cast<double>(kGTableCells)) return g_table_.back();
  const std::size_t cell = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(cell);
  return g_table_[cell] * (1.0 - frac) + g_table_[cell + 1] * frac;
}

DensityValue transition_density(const DensityTransforms& transforms, double s,
                                double t, double x, double y,
                                const BridgeOptions& options, RngStream& rng) {
  require(t > s, ErrorCode::precondition, "transition density needs t > s");
  require(options.bridges >= 1 && options.steps >= 2, ErrorCode::precondition,
          "need >= 1 bridge replicate and >= 2 bridge steps");
  const double dt = t - s;
  const double sig_y = transforms.model().sigma(y);
  const double sx = transforms.S(x);
  const double sy = transforms.S(y);
  const double prefactor =
      std::exp(-0.5 * (sy - sx) * (sy - sx) / dt + transforms.H(y) -
               transforms.H(x)) /
      std::sqrt(2.0 * std::numbers::pi * dt * sig_y * sig_y);

  const std::size_t steps = options.steps;
  const double du = 1.0 / static_cast<double>(steps);
  const double sqrt_dt = std::sqrt(dt);

  // trapezoid endpoints: the bridge is pinned to 0 at u = 0 and u = 1
  const double g_start = transforms.G_interp(sx);
  const double g_end = transforms.G_interp(sy);

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t rep = 0; rep < options.bridges; ++rep) {
    double integral = 0.5 * (g_start + g_end);
    double bridge = 0.0;
    double u_prev = 0.0;
    for (std::size_t i = 1; i < steps; ++i) {
      const double u = static_cast<double>(i) * du;
      const double remain_prev = 1.0 - u_prev;
      const double mean = bridge * (1.0 - u) / remain_prev;
      const double var = (u - u_prev) * (1.0 - u) / remain_prev;
      bridge = mean + std::sqrt(var) * rng.normal();
      u_prev = u;
      const double z = (1.0 - u) * sx + u * sy + sqrt_dt * bridge;
      integral += transforms.G_interp(z);
    }
    integral *= du;
    const double draw = options.first_order ? dt * integral
                                            : std::exp(dt * integral);
    sum += draw;
    sum_sq += draw * draw;
  }
  const double count = static_cast<double>(options.bridges);
  double mean = sum / count;
  double var = count > 1 ? (sum_sq - sum * sum / count) / (count - 1.0) : 0.0;
  if (var < 0.0) var = 0.0;
  if (options.first_order) mean = 1.0 + mean;

  DensityValue out;
  out.value = prefactor * mean;
  out.se = prefactor * std::sqrt(var / count);
  return out;
}

DensityValue transition_density(const DiffusionModel& model, double s, double t,
                                double x, double y,
                                const BridgeOptions& options,
                                std::uint64_t seed) {
  DensityTransforms transforms(model);
  RngStream rng(stream_key(seed, StreamTag::bridge));
  return transition_density(transforms, s, t, x, y, options, rng);
}

DensityValue occupation_density(const DensityTransforms& transforms,
                                std::size_t n, double y,
                                const BridgeOptions& options,
                                std::uint64_t seed) {
  require(n >= 2, ErrorCode::precondition, "occupation density needs n >= 2");
  const double delta = 1.0 / static_cast<double>(n);
  double sum = 0.0, var_sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    RngStream rng(stream_key(seed, StreamTag::bridge, k));
    const DensityValue p = transition_density(
        transforms, 0.0, delta * static_cast<double>(k), 0.0, y, options, rng);
    sum += p.value;
    var_sum += p.se * p.se;
  }
  DensityValue out;
  out.value = sum / static_cast<double>(n);
  out.se = std::sqrt(var_sum) / static_cast<double>(n);
  return out;
}

ExitProbability exit_probability(const DiffusionModel& model, double level,
                                 std::size_t mc_paths, std::size_t n,
                                 std::size_t substeps, std::uint64_t seed) {
  require(level >= 0.0, ErrorCode::precondition, "level must be >= 0");
  require(mc_paths >= 100, ErrorCode::precondition,
          "exit probability needs >= 100 paths");
  const PathSample sample = simulate_sample(model, mc_paths, n, substeps, seed);
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t j = 0; j < mc_paths; ++j) {
    for (std::size_t k = 1; k <= n; ++k) {
      if (std::abs(sample.value(j, k)) > level) ++counts[k - 1];
    }
  }
  ExitProbability out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  const double p =
      static_cast<double>(counts[best]) / static_cast<double>(mc_paths);
  out.value = p;
  out.se = std::sqrt(p * (1.0 - p) / static_cast<double>(mc_paths));
  out.argmax_t = static_cast<double>(best + 1) / static_cast<double>(n);
  return out;
}

}  // namespace sdeproj
