#include "sdeproj/risk.hpp"

#include <cmath>
#include <filesystem>
#include <vector>

#include "sdeproj/errors.hpp"
#include "sdeproj/estimator.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/parallel.hpp"
#include "sdeproj/regression.hpp"
#include "sdeproj/rng.hpp"

namespace sdeproj {

double empirical_norm_sq(const ScalarFn& fn, const PathSample& sample) {
  require(sample.N >= 1 && sample.n >= 1, ErrorCode::precondition,
          "empty sample");
  double sum = 0.0;
  for (std::size_t j = 0; j < sample.N; ++j) {
    for (std::size_t k = 0; k < sample.n; ++k) {
      const double v = fn(sample.value(j, k));
      sum += v * v;
    }
  }
  return sum / (static_cast<double>(sample.N) * static_cast<double>(sample.n));
}

MeanSe theoretical_norm_sq(const ScalarFn& fn, const DiffusionModel& model,
                           std::size_t n, std::size_t mc_paths,
                           std::uint64_t seed, std::size_t substeps,
                           int threads) {
  require(mc_paths >= 100, ErrorCode::precondition,
          "norm estimate needs at least 100 paths");
  SimulateOptions sim;
  sim.threads = threads;
  const PathSample sample =
      simulate_sample(model, mc_paths, n, substeps,
                      stream_key(seed, StreamTag::evaluation), sim);
  std::vector<double> per_path(mc_paths, 0.0);
  parallel_for(
      mc_paths,
      [&](std::size_t j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double v = fn(sample.value(j, k));
          sum += v * v;
        }
        per_path[j] = sum / static_cast<double>(n);
      },
      threads);
  return mean_se(per_path);
}

double path_integral_norm_sq(const ScalarFn& fn, const PathSample& sample,
                             std::size_t j) {
  require(j < sample.N, ErrorCode::precondition, "path index out of range");
  if (sample.has_fine_grid) {
    const std::size_t steps = sample.n * sample.substeps;
    const double dt = 1.0 / static_cast<double>(steps);
    double sum = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const double v = fn(sample.fine_value(j, i));
      sum += v * v;
    }
    return sum * dt;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < sample.n; ++k) {
    const double v = fn(sample.value(j, k));
    sum += v * v;
  }
  return sum * sample.delta;
}

namespace {

const char* target_name(TargetKind kind) {
  switch (kind) {
    case TargetKind::compact: return "compact";
    case TargetKind::growing: return "growing";
    case TargetKind::full: return "full";
  }
  return "unknown";
}

}  // namespace

void RiskReport::append_csv(const std::string& path,
                            const std::string& experiment_id,
                            const ExperimentSpec& spec,
                            std::uint64_t seed) const {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  require(bool(out), ErrorCode::config, "cannot open for append: " + path);
  if (fresh) {
    out << "experiment,N,n,m,seed,target,replicates,skipped_singular,"
           "risk_n_sq,risk_n_sq_se,risk_n,risk_n_se\n";
  }
  out << experiment_id << ',' << spec.N << ',' << spec.n << ','
      << spec.basis.dimension() << ',' << seed << ',' << target_name(target)
      << ',' << replicates << ',' << skipped_singular << ','
      << fmt_double(risk_n_sq.mean) << ',' << fmt_double(risk_n_sq.se) << ','
      << fmt_double(risk_n.mean) << ',' << fmt_double(risk_n.se) << '\n';
}

RiskReport estimation_risk(const DiffusionModel& model,
                           const ExperimentSpec& spec, std::size_t replicates,
                           std::uint64_t seed) {
  require(replicates >= 1, ErrorCode::precondition, "need >= 1 replicate");
  require(spec.N >= 1 && spec.n >= 1, ErrorCode::precondition,
          "experiment needs N >= 1 and n >= 1");

  const DiffusionModel local =
      model.x0 == 0.0 ? model : model.shifted_to_origin();
  const double A = spec.basis.A;
  const double B = spec.basis.B;
  const ScalarFn target = [&local, A, B, kind = spec.target](double x) {
    if (kind != TargetKind::full && (x < A || x > B)) return 0.0;
    return local.sigma_sq(x);
  };

  const ConstraintBall ball =
      spec.constrained
          ? ConstraintBall::scaled(spec.basis.dimension(), A, B, spec.N, spec.n)
          : ConstraintBall::fixed(1e300);

  std::vector<double> norm_sq(replicates, 0.0);
  std::vector<char> skipped(replicates, 0);

  parallel_for(
      replicates,
      [&](std::size_t rep) {
        SimulateOptions sim;
        sim.threads = 1;
        const PathSample sample =
            simulate_sample(local, spec.N, spec.n, spec.substeps,
                            stream_key(seed, StreamTag::replicate, rep), sim);
        const RegressionData data = build_regression(sample);
        Estimate estimate;
        try {
          estimate = fit(data, spec.basis, ball);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::singular_design) {
            skipped[rep] = 1;
            return;
          }
          throw;
        }
        if (spec.truncated) estimate = truncate(estimate, spec.N);
        const ScalarFn diff = [&estimate, &target](double x) {
          return evaluate(estimate, x) - target(x);
        };
        norm_sq[rep] =
            theoretical_norm_sq(diff, local, spec.n, spec.eval_paths,
                                stream_key(seed, StreamTag::evaluation, rep),
                                spec.substeps, 1)
                .mean;
      },
      spec.threads);

  std::vector<double> kept_sq, kept_first;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    if (skipped[rep]) continue;
    kept_sq.push_back(norm_sq[rep]);
    kept_first.push_back(std::sqrt(norm_sq[rep]));
  }
  require(!kept_sq.empty(), ErrorCode::singular_design,
          "every replicate produced a singular design");

  RiskReport report;
  report.risk_n_sq = mean_se(kept_sq);
  report.risk_n = mean_se(kept_first);
  report.replicates = kept_sq.size();
  report.skipped_singular = replicates - kept_sq.size();
  report.target = spec.target;
  return report;
}

}  // namespace sdeproj
