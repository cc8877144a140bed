#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdeproj/estimator.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/risk.hpp"

namespace sdeproj {

// Sampling regimes for rate-of-convergence ladders. The first three measure
// the squared empirical-norm risk against log(N n); the real-line regime
// measures the first-power risk of the truncated estimator against log N.
enum class LadderRegime {
  compact_single_path,  // N = 1, n grows
  compact_repeated,     // n proportional to N
  growing_interval,     // n proportional to N, interval +-a sqrt(log N)
  real_line,            // truncated estimator, risk over the whole line
};

std::string ladder_regime_name(LadderRegime regime);

struct RungSpec {
  std::size_t N = 0;
  std::size_t n = 0;
};

struct RateLadder {
  LadderRegime regime = LadderRegime::compact_repeated;
  std::vector<RungSpec> sizes;
  double beta = 2.0;
  DiffusionModel truth;
  std::size_t replicates = 20;
  std::uint64_t seed = 0;
  int spline_degree = 3;
  double dim_c = 1.0;     // dimension rule constant
  double growing_a = 1.0; // interval half-width a sqrt(log N) when growing
  double A = -1.0;        // fixed interval for the compact regimes
  double B = 1.0;
  std::size_t substeps = 16;
  std::size_t eval_paths = 200;
  bool use_ball = true;
  std::size_t fixed_K = 0;  // 0 = dimension rule; otherwise pin K
  int threads = 0;
};

struct LadderRung {
  std::size_t N = 0, n = 0, m = 0;
  double A = 0.0, B = 0.0;
  MeanSe risk;  // squared norm, or first power for the real-line regime
  std::size_t skipped = 0;
};

struct LadderResult {
  LadderRegime regime = LadderRegime::compact_repeated;
  std::string coupling;  // "N=1", "n prop N", or "n prop N^2"
  bool first_power = false;
  std::vector<LadderRung> rungs;
  LineFit fit;
  double theoretical_slope = 0.0;
  std::vector<double> log_size;  // fit abscissae: log(Nn), or log N
  std::vector<double> log_risk;
  std::vector<double> weight;

  void save_csv(const std::string& path) const;
  void save_slope_json(const std::string& path) const;
  void save_plotdata(const std::string& path) const;  // gnuplot columns
};

// -2 beta / (2 beta + 1) for the squared-risk regimes;
// -3 beta / (2 (2 beta + 1)) for the real-line first-power regime.
double theoretical_slope(LadderRegime regime, double beta);

// Weighted least-squares line through (log_size, log_risk).
LineFit fit_slope(const std::vector<double>& log_size,
                  const std::vector<double>& log_risk,
                  const std::vector<double>& weight);

// Runs every rung through the risk module and fits the log-log slope.
// Demands >= 4 rungs, >= 20 replicates per rung, and the regime's coupling
// (N identically 1, or n proportional to N or to N^2, exactly).
LadderResult run_ladder(const RateLadder& ladder);

}  // namespace sdeproj
