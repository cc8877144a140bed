#include "sdeproj/bench.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "sdeproj/basis.hpp"
#include "sdeproj/errors.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/rng.hpp"

namespace sdeproj {

using json = nlohmann::ordered_json;

std::string ladder_regime_name(LadderRegime regime) {
  switch (regime) {
    case LadderRegime::compact_single_path: return "compact_single_path";
    case LadderRegime::compact_repeated: return "compact_repeated";
    case LadderRegime::growing_interval: return "growing_interval";
    case LadderRegime::real_line: return "real_line";
  }
  fail(ErrorCode::precondition, "unknown ladder regime");
}

double theoretical_slope(LadderRegime regime, double beta) {
  require(beta > 0.0, ErrorCode::precondition, "beta must be positive");
  if (regime == LadderRegime::real_line) {
    return -3.0 * beta / (2.0 * (2.0 * beta + 1.0));
  }
  return -2.0 * beta / (2.0 * beta + 1.0);
}

LineFit fit_slope(const std::vector<double>& log_size,
                  const std::vector<double>& log_risk,
                  const std::vector<double>& weight) {
  return weighted_line_fit(log_size, log_risk, weight);
}

namespace {

std::string check_coupling(const RateLadder& ladder) {
  const auto& sizes = ladder.sizes;
  if (ladder.regime == LadderRegime::compact_single_path) {
    for (const RungSpec& r : sizes) {
      require(r.N == 1, ErrorCode::precondition,
              "compact_single_path demands N = 1 on every rung");
    }
    return "N=1";
  }
  const RungSpec& base = sizes.front();
  bool linear = true, quadratic = true;
  for (const RungSpec& r : sizes) {
    if (r.n * base.N != r.N * base.n) linear = false;
    if (r.n * base.N * base.N != r.N * r.N * base.n) quadratic = false;
  }
  if (linear) return "n prop N";
  if (quadratic) return "n prop N^2";
  fail(ErrorCode::precondition,
       "rung sizes must keep n proportional to N or to N^2");
}

DimensionRegime dimension_regime(LadderRegime regime) {
  switch (regime) {
    case LadderRegime::compact_single_path:
      return DimensionRegime::compact_single_path;
    case LadderRegime::compact_repeated:
      return DimensionRegime::compact_repeated;
    case LadderRegime::growing_interval:
    case LadderRegime::real_line:
      return DimensionRegime::growing_interval;
  }
  fail(ErrorCode::precondition, "unknown ladder regime");
}

}  // namespace

LadderResult run_ladder(const RateLadder& ladder) {
  if (ladder.sizes.size() < 4) {
    fail(ErrorCode::insufficient_rungs,
         "need at least 4 rungs, got " + std::to_string(ladder.sizes.size()));
  }
  require(ladder.replicates >= 20, ErrorCode::precondition,
          "need at least 20 replicates per rung");
  require(ladder.B > ladder.A, ErrorCode::precondition,
          "interval needs B > A");
  for (const RungSpec& r : ladder.sizes) {
    require(r.N >= 1 && r.n >= 2, ErrorCode::precondition,
            "every rung needs N >= 1 and n >= 2");
  }

  const bool growing = ladder.regime == LadderRegime::growing_interval ||
                       ladder.regime == LadderRegime::real_line;
  const bool first_power = ladder.regime == LadderRegime::real_line;

  LadderResult result;
  result.regime = ladder.regime;
  result.coupling = check_coupling(ladder);
  result.first_power = first_power;
  result.theoretical_slope = theoretical_slope(ladder.regime, ladder.beta);

  for (const RungSpec& size : ladder.sizes) {
    double A = ladder.A, B = ladder.B;
    if (growing) {
      require(size.N >= 3, ErrorCode::precondition,
              "growing intervals need N >= 3 so log N > 1");
      const double half = ladder.growing_a * std::sqrt(std::log(
                              static_cast<double>(size.N)));
      A = -half;
      B = half;
    }
    std::size_t K = ladder.fixed_K;
    if (K == 0) {
      K = dimension_rule(dimension_regime(ladder.regime), size.N, size.n,
                         ladder.beta, ladder.dim_c);
    }

    ExperimentSpec spec;
    spec.N = size.N;
    spec.n = size.n;
    spec.substeps = ladder.substeps;
    spec.basis = BasisSpec::spline(K, ladder.spline_degree, A, B);
    spec.constrained = ladder.use_ball;
    spec.truncated = first_power;
    spec.target = first_power
                      ? TargetKind::full
                      : (growing ? TargetKind::growing : TargetKind::compact);
    spec.eval_paths = ladder.eval_paths;
    spec.threads = ladder.threads;

    const std::uint64_t rung_seed =
        mix_key(mix_key(ladder.seed, size.N), size.n);
    const RiskReport report =
        estimation_risk(ladder.truth, spec, ladder.replicates, rung_seed);

    LadderRung rung;
    rung.N = size.N;
    rung.n = size.n;
    rung.m = spec.basis.dimension();
    rung.A = A;
    rung.B = B;
    rung.risk = first_power ? report.risk_n : report.risk_n_sq;
    rung.skipped = report.skipped_singular;
    result.rungs.push_back(rung);

    require(rung.risk.mean > 0.0, ErrorCode::precondition,
            "rung risk collapsed to zero; nothing to fit");
    const double x = first_power
                         ? std::log(static_cast<double>(size.N))
                         : std::log(static_cast<double>(size.N) *
                                    static_cast<double>(size.n));
    const double se_log = std::max(rung.risk.se / rung.risk.mean, 1e-12);
    result.log_size.push_back(x);
    result.log_risk.push_back(std::log(rung.risk.mean));
    result.weight.push_back(1.0 / (se_log * se_log));
  }

  result.fit = fit_slope(result.log_size, result.log_risk, result.weight);
  return result;
}

void LadderResult::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "rung,N,n,m,A_N,risk,se\n";
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    const LadderRung& r = rungs[i];
    out << i << ',' << r.N << ',' << r.n << ',' << r.m << ','
        << fmt_double(r.B) << ',' << fmt_double(r.risk.mean) << ','
        << fmt_double(r.risk.se) << '\n';
  }
}

void LadderResult::save_slope_json(const std::string& path) const {
  json doc;
  doc["regime"] = ladder_regime_name(regime);
  doc["coupling"] = coupling;
  doc["first_power"] = first_power;
  doc["rungs"] = rungs.size();
  doc["slope"] = fit.slope;
  doc["slope_se"] = fit.slope_se;
  doc["intercept"] = fit.intercept;
  doc["r_squared"] = fit.r_squared;
  doc["theoretical_slope"] = theoretical_slope;
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void LadderResult::save_plotdata(const std::string& path) const {
  auto out = open_output(path);
  out << "# " << ladder_regime_name(regime)
      << (first_power ? ": log risk vs log N\n" : ": log risk vs log(N n)\n");
  out << "# log_size log_risk weight\n";
  for (std::size_t i = 0; i < log_size.size(); ++i) {
    out << fmt_double(log_size[i]) << ' ' << fmt_double(log_risk[i]) << ' '
        << fmt_double(weight[i]) << '\n';
  }
}

}  // namespace sdeproj
