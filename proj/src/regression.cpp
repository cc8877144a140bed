#include "sdeproj/regression.hpp"

#include "sdeproj/errors.hpp"
#include "sdeproj/io.hpp"

namespace sdeproj {

RegressionData build_regression(const PathSample& sample) {
  require(sample.N >= 1 && sample.n >= 1, ErrorCode::precondition,
          "empty path sample");
  RegressionData data;
  data.N = sample.N;
  data.n = sample.n;
  data.delta = sample.delta;
  data.x.resize(sample.N * sample.n);
  data.u.resize(sample.N * sample.n);
  for (std::size_t j = 0; j < sample.N; ++j) {
    for (std::size_t k = 0; k < sample.n; ++k) {
      const double xk = sample.value(j, k);
      const double inc = sample.value(j, k + 1) - xk;
      data.x[j * sample.n + k] = xk;
      data.u[j * sample.n + k] = inc * inc / sample.delta;
    }
  }
  return data;
}

void RegressionData::save_csv(const std::string& path) const {
  auto os = open_output(path);
  os << "path,k,x,u\n";
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      os << j << ',' << k << ',' << fmt_double(x[j * n + k]) << ','
         << fmt_double(u[j * n + k]) << '\n';
    }
  }
  require(bool(os), ErrorCode::config, "write failed: " + path);
}

ResidualDecomposition decompose_residuals(const PathSample& sample,
                                          const DiffusionModel& model) {
  require(sample.has_fine_grid, ErrorCode::missing_fine_grid,
          "residual decomposition needs the retained sub-grid; simulate with "
          "keep_fine_grid");
  const DiffusionModel local =
      model.x0 == 0.0 ? model : model.shifted_to_origin();

  ResidualDecomposition out;
  out.N = sample.N;
  out.n = sample.n;
  out.delta = sample.delta;
  const std::size_t count = sample.N * sample.n;
  out.zeta1.resize(count);
  out.zeta2.resize(count);
  out.zeta3.resize(count);
  out.r1.resize(count);
  out.r2.resize(count);
  out.r3.resize(count);

  const std::size_t s = sample.substeps;
  const double delta = sample.delta;
  const double dt = delta / static_cast<double>(s);

  for (std::size_t j = 0; j < sample.N; ++j) {
    for (std::size_t k = 0; k < sample.n; ++k) {
      const std::size_t base = k * s;
      const double xk = sample.value(j, k);
      const double b_at_xk = local.b(xk);

      // left-point sums over the sub-grid of [k delta, (k+1) delta)
      double drift_int = 0.0;    // int b dt
      double diff_int = 0.0;     // int sigma dW
      double sigsq_int = 0.0;    // int sigma^2 dt
      double weighted_dw = 0.0;  // int ((k+1)delta - t) sigma' sigma^2 dW
      double weighted_dt = 0.0;  // int ((k+1)delta - t) Phi dt
      for (std::size_t i = 0; i < s; ++i) {
        const double xs = sample.fine_value(j, base + i);
        const double dw = sample.fine_increment(j, base + i);
        const double bv = local.b(xs);
        const double sv = local.sigma(xs);
        const double sp = local.sigma_prime(xs);
        const double spp = local.sigma_double_prime(xs);
        const double time_left =
            delta - static_cast<double>(i) * dt;  // (k+1)delta - t_i
        drift_int += bv * dt;
        diff_int += sv * dw;
        sigsq_int += sv * sv * dt;
        weighted_dw += time_left * sp * sv * sv * dw;
        const double phi = 2.0 * bv * sp * sv + (spp * sv + sp * sp) * sv * sv;
        weighted_dt += time_left * phi * dt;
      }

      const std::size_t idx = j * sample.n + k;
      out.zeta1[idx] = (diff_int * diff_int - sigsq_int) / delta;
      out.zeta2[idx] = 2.0 / delta * weighted_dw;
      out.zeta3[idx] = 2.0 * b_at_xk * diff_int;
      out.r1[idx] = drift_int * drift_int / delta;
      out.r2[idx] = weighted_dt / delta;
      out.r3[idx] = 2.0 / delta * (drift_int - b_at_xk * delta) * diff_int;
    }
  }
  return out;
}

}  // namespace sdeproj
