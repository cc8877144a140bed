#pragma once

#include <cstdint>
#include <string>

#include "sdeproj/basis.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/simulate.hpp"

namespace sdeproj {

// (1/(N n)) sum over paths j and k = 0..n-1 of fn(X^j_{k/n})^2.
double empirical_norm_sq(const ScalarFn& fn, const PathSample& sample);

// E[(1/n) sum_{k=0}^{n-1} fn(X_{k/n})^2], estimated over mc_paths fresh
// simulated paths; the k = 0 term contributes fn(0)^2 / n on every path
// (samples are stored in start-at-zero coordinates).
MeanSe theoretical_norm_sq(const ScalarFn& fn, const DiffusionModel& model,
                           std::size_t n, std::size_t mc_paths,
                           std::uint64_t seed, std::size_t substeps = 16,
                           int threads = 0);

// int_0^1 fn(X_t)^2 dt along stored path j, by left-point quadrature on the
// finest grid the sample carries (the sub-grid when retained, the
// observation grid otherwise).
double path_integral_norm_sq(const ScalarFn& fn, const PathSample& sample,
                             std::size_t j);

enum class TargetKind {
  compact,  // sigma^2 restricted to the basis interval, zero outside
  growing,  // same restriction, with a window that grew with N
  full,     // sigma^2 on the whole line
};

// Everything one risk measurement fixes: data size, basis, constraint,
// truncation, and which restriction of sigma^2 the estimate is compared to.
struct ExperimentSpec {
  std::size_t N = 0;
  std::size_t n = 0;
  std::size_t substeps = 16;
  BasisSpec basis;
  bool constrained = true;  // coefficient ball on/off
  bool truncated = false;   // clip the fitted values at log N
  TargetKind target = TargetKind::compact;
  std::size_t eval_paths = 200;
  int threads = 0;
};

struct RiskReport {
  MeanSe risk_n_sq;  // replicate average of ||estimate - target||_n^2
  MeanSe risk_n;     // replicate average of ||estimate - target||_n
  std::size_t replicates = 0;  // replicates that produced a fit
  std::size_t skipped_singular = 0;
  TargetKind target = TargetKind::compact;

  // Appends one row (writing the header first when the file is new).
  void append_csv(const std::string& path, const std::string& experiment_id,
                  const ExperimentSpec& spec, std::uint64_t seed) const;
};

// For each replicate: simulate a training sample, fit the projection
// estimator, and measure the distance to the target restriction of
// sigma^2 with an independent evaluation sample. Replicates whose design
// is singular are skipped and counted.
RiskReport estimation_risk(const DiffusionModel& model,
                           const ExperimentSpec& spec, std::size_t replicates,
                           std::uint64_t seed);

}  // namespace sdeproj
