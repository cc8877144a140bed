#pragma once

#include <string>
#include <vector>

#include "sdeproj/model.hpp"
#include "sdeproj/simulate.hpp"

namespace sdeproj {

// Regression pairs (x, u) with x = X_{k/n} and
// u = (X_{(k+1)/n} - X_{k/n})^2 * n, for k = 0..n-1 on each path; u is the
// normalized squared increment whose conditional mean is sigma^2(x) up to
// a drift-order remainder.
struct RegressionData {
  std::size_t N = 0;
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<double> x;  // N*n, row-major in (path, k)
  std::vector<double> u;

  void save_csv(const std::string& path) const;  // columns path,k,x,u
};

RegressionData build_regression(const PathSample& sample);

// Splits u - sigma^2(x) into three centered fluctuation terms and three
// drift-order remainders, evaluated with the retained sub-grid:
//   zeta1: (I1^2 - int sigma^2)/delta with I1 the sigma-weighted increment sum
//   zeta2: time-weighted sigma' sigma^2 increments
//   zeta3: 2 b(x) I1
//   r1:    (int b)^2/delta
//   r2:    time-weighted drift/curvature integrand 2 b sigma' sigma +
//          (sigma'' sigma + sigma'^2) sigma^2
//   r3:    cross term between the centered drift integral and I1
// Requires sample.has_fine_grid.
struct ResidualDecomposition {
  std::size_t N = 0;
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<double> zeta1, zeta2, zeta3;  // N*n each
  std::vector<double> r1, r2, r3;

  double residual_sum(std::size_t idx) const {
    return r1[idx] + r2[idx] + r3[idx];
  }
  double total(std::size_t idx) const {
    return zeta1[idx] + zeta2[idx] + zeta3[idx] + residual_sum(idx);
  }
};

ResidualDecomposition decompose_residuals(const PathSample& sample,
                                          const DiffusionModel& model);

}  // namespace sdeproj
