#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdeproj/basis.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/simulate.hpp"

namespace sdeproj {

// Monte Carlo estimate of the expected design second-moment matrix
//   psi[l,l'] = E[(1/n) sum_{k=0}^{n-1} phi_l(X_{k/n}) phi_{l'}(X_{k/n})]
// together with its eigenvalue diagnostics. rank_deficient records
// min_eig <= 1e-12 * max_eig; it is a flag, not an error, because a basis
// whose support the paths never visit legitimately produces a singular
// matrix.
struct GramReport {
  Eigen::MatrixXd psi;
  Eigen::MatrixXd psi_se;  // entrywise Monte Carlo standard errors
  double min_eig = 0.0;
  double max_eig = 0.0;
  bool rank_deficient = false;
  double op_norm_inverse = 0.0;  // 1/min_eig; +inf when rank deficient
  double l_m = 0.0;              // probed sup of sum_l phi_l(x)^2
  double product = 0.0;          // l_m * op_norm_inverse
  std::size_t mc_paths = 0;
};

struct GramOptions {
  std::size_t substeps = 16;
  int threads = 0;
};

// Simulates mc_paths fresh paths (streams derived from the seed, disjoint
// from any estimation sample built on the same seed) and averages the
// per-path design moments. Needs mc_paths >= 1000 so the diagnostics carry
// meaningful Monte Carlo error.
GramReport estimate_gram(const DiffusionModel& model, const BasisSpec& spec,
                         std::size_t n, std::size_t mc_paths,
                         std::uint64_t seed, GramOptions options = {});

// One rung of the conditioning sweep over sample sizes. The spline window
// grows as [-a sqrt(log N), a sqrt(log N)], the knot count follows the
// growing-interval dimension rule, and structural_bound evaluates the structural
// bound
//   (m log N / A) * exp( (int_0^A du/sigma)^2 / (2 (1 - 1/log N)) + A )
// with unit constants. ratio divides the measured l_m * op_norm_inverse by
// N / log^2 N; the sweep's purpose is the trend of that column.
struct ConditionRow {
  std::size_t N = 0;
  std::size_t n = 0;
  std::size_t K = 0;  // spline subintervals
  std::size_t m = 0;  // basis dimension
  double A = 0.0;
  double l_m = 0.0;
  double min_eig = 0.0;
  double op_norm_inverse = 0.0;
  double product = 0.0;
  double structural_bound = 0.0;
  double n_over_log_sq = 0.0;
  double ratio = 0.0;
  bool rank_deficient = false;
};

struct ConditionTable {
  std::vector<ConditionRow> rows;
  void save_csv(const std::string& path) const;
};

struct ConditionSweepOptions {
  double beta = 8.0;
  double growth_a = 1.0;  // A_N = growth_a * sqrt(log N)
  int degree = 1;
  double dim_c = 1.0;     // multiplier in the dimension rule
  std::size_t substeps = 16;
  int threads = 0;
};

// N_list must be increasing, each entry >= 8; n = N on every rung.
ConditionTable gram_condition_sweep(const DiffusionModel& model,
                                    const std::vector<std::size_t>& N_list,
                                    std::size_t mc_paths, std::uint64_t seed,
                                    ConditionSweepOptions options = {});

// For each sample, the worst relative gap between the sample quadratic form
// and the expected one over the whole coefficient sphere:
//   deviation = || Psi^{-1/2} (Psi_sample - Psi) Psi^{-1/2} ||_op,
// where Psi is the Monte Carlo reference built from mc_paths fresh paths.
// A sample violates the norm-equivalence event when deviation > 1/2.
struct EventReport {
  std::vector<double> deviations;
  double threshold = 0.5;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  bool rank_deficient = false;
  void save_csv(const std::string& path) const;
};

EventReport norm_equivalence_monitor(const std::vector<PathSample>& samples,
                                     const BasisSpec& spec,
                                     const DiffusionModel& model,
                                     std::size_t mc_paths, std::uint64_t seed,
                                     GramOptions options = {});

}  // namespace sdeproj
