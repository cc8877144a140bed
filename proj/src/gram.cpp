#include "sdeproj/gram.hpp"

#include <cmath>
#include <limits>

#include "sdeproj/errors.hpp"
#include "sdeproj/estimator.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/rng.hpp"

namespace sdeproj {

namespace {

// per-path design moment (1/n) sum_k phi(x_k) phi(x_k)^T accumulated into
// mean and mean-of-squares matrices
struct MomentAccumulator {
  Eigen::MatrixXd sum;
  Eigen::MatrixXd sum_sq;
  std::size_t count = 0;

  explicit MomentAccumulator(int m)
      : sum(Eigen::MatrixXd::Zero(m, m)), sum_sq(Eigen::MatrixXd::Zero(m, m)) {}

  void add(const Eigen::MatrixXd& g) {
    sum += g;
    sum_sq += g.cwiseProduct(g);
    ++count;
  }
};

Eigen::MatrixXd path_moment(const PathSample& sample, std::size_t j,
                            const BasisSpec& spec) {
  const int m = spec.dimension();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> phi(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < sample.n; ++k) {
    eval_basis(spec, sample.value(j, k), phi);
    for (int r = 0; r < m; ++r) {
      if (phi[static_cast<std::size_t>(r)] == 0.0) continue;
      for (int c = r; c < m; ++c) {
        g(r, c) += phi[static_cast<std::size_t>(r)] *
                   phi[static_cast<std::size_t>(c)];
      }
    }
  }
  g /= static_cast<double>(sample.n);
  g.triangularView<Eigen::StrictlyLower>() =
      g.triangularView<Eigen::StrictlyUpper>().transpose();
  return g;
}

}  // namespace

GramReport estimate_gram(const DiffusionModel& model, const BasisSpec& spec,
                         std::size_t n, std::size_t mc_paths,
                         std::uint64_t seed, GramOptions options) {
  require(mc_paths >= 1000, ErrorCode::precondition,
          "gram diagnostics need at least 1000 paths");
  const int m = spec.dimension();

  SimulateOptions sim;
  sim.threads = options.threads;
  const PathSample sample =
      simulate_sample(model, mc_paths, n, options.substeps,
                      stream_key(seed, StreamTag::gram), sim);

  MomentAccumulator acc(m);
  for (std::size_t j = 0; j < mc_paths; ++j) acc.add(path_moment(sample, j, spec));

  const double count = static_cast<double>(acc.count);
  GramReport report;
  report.mc_paths = mc_paths;
  report.psi = acc.sum / count;
  Eigen::MatrixXd var =
      (acc.sum_sq - acc.sum.cwiseProduct(acc.sum) / count) / (count - 1.0);
  report.psi_se = var.cwiseMax(0.0).cwiseSqrt() / std::sqrt(count);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(report.psi);
  report.min_eig = eig.eigenvalues().minCoeff();
  report.max_eig = eig.eigenvalues().maxCoeff();
  report.rank_deficient = !(report.min_eig > 1e-12 * report.max_eig);
  report.op_norm_inverse = report.rank_deficient
                               ? std::numeric_limits<double>::infinity()
                               : 1.0 / report.min_eig;
  report.l_m = basis_norms(spec).l_m;
  report.product = report.l_m * report.op_norm_inverse;
  return report;
}

void ConditionTable::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "N,n,K,m,A,l_m,min_eig,op_norm_inverse,product,structural_bound,"
         "n_over_log_sq,ratio,rank_deficient\n";
  for (const ConditionRow& r : rows) {
    out << r.N << ',' << r.n << ',' << r.K << ',' << r.m << ','
        << fmt_double(r.A) << ',' << fmt_double(r.l_m) << ','
        << fmt_double(r.min_eig) << ',' << fmt_double(r.op_norm_inverse) << ','
        << fmt_double(r.product) << ',' << fmt_double(r.structural_bound) << ','
        << fmt_double(r.n_over_log_sq) << ',' << fmt_double(r.ratio) << ','
        << (r.rank_deficient ? 1 : 0) << '\n';
  }
}

ConditionTable gram_condition_sweep(const DiffusionModel& model,
                                    const std::vector<std::size_t>& N_list,
                                    std::size_t mc_paths, std::uint64_t seed,
                                    ConditionSweepOptions options) {
  require(!N_list.empty(), ErrorCode::precondition, "empty size list");
  for (std::size_t i = 0; i + 1 < N_list.size(); ++i) {
    require(N_list[i] < N_list[i + 1], ErrorCode::precondition,
            "size list must be increasing");
  }
  require(N_list.front() >= 8, ErrorCode::precondition,
          "sweep sizes must be at least 8");

  ConditionTable table;
  for (const std::size_t N : N_list) {
    const std::size_t n = N;
    const double logN = std::log(static_cast<double>(N));
    const double A = options.growth_a * std::sqrt(logN);
    const std::size_t K = dimension_rule(DimensionRegime::growing_interval, N,
                                         n, options.beta, options.dim_c);
    const BasisSpec spec =
        BasisSpec::spline(static_cast<int>(K), options.degree, -A, A);

    GramOptions gram_opts;
    gram_opts.substeps = options.substeps;
    gram_opts.threads = options.threads;
    const GramReport report = estimate_gram(model, spec, n, mc_paths,
                                            mix_key(seed, N), gram_opts);

    ConditionRow row;
    row.N = N;
    row.n = n;
    row.K = K;
    row.m = static_cast<std::size_t>(spec.dimension());
    row.A = A;
    row.l_m = report.l_m;
    row.min_eig = report.min_eig;
    row.op_norm_inverse = report.op_norm_inverse;
    row.product = report.product;
    const double scale_integral =
        integrate([&](double u) { return 1.0 / model.sigma(u); }, 0.0, A);
    const double q = 1.0 / (2.0 * (1.0 - 1.0 / logN));
    row.structural_bound = static_cast<double>(row.m) * logN / A *
                    std::exp(q * scale_integral * scale_integral + A);
    row.n_over_log_sq = static_cast<double>(N) / (logN * logN);
    row.ratio = row.product / row.n_over_log_sq;
    row.rank_deficient = report.rank_deficient;
    table.rows.push_back(row);
  }
  return table;
}

void EventReport::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "sample,deviation,violated\n";
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    out << i << ',' << fmt_double(deviations[i]) << ','
        << (deviations[i] > threshold ? 1 : 0) << '\n';
  }
}

EventReport norm_equivalence_monitor(const std::vector<PathSample>& samples,
                                     const BasisSpec& spec,
                                     const DiffusionModel& model,
                                     std::size_t mc_paths, std::uint64_t seed,
                                     GramOptions options) {
  require(!samples.empty(), ErrorCode::precondition, "no samples to monitor");
  const std::size_t n = samples.front().n;
  for (const PathSample& s : samples) {
    require(s.n == n, ErrorCode::precondition,
            "all samples must share the observation count");
  }

  const GramReport reference =
      estimate_gram(model, spec, n, mc_paths, seed, options);

  EventReport report;
  report.rank_deficient = reference.rank_deficient;

  // whitening transform on the numerically positive eigenspace
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reference.psi);
  const double floor = 1e-12 * reference.max_eig;
  const Eigen::VectorXd vals = eig.eigenvalues();
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) > floor) inv_sqrt(i) = 1.0 / std::sqrt(vals(i));
  }
  const Eigen::MatrixXd white =
      eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();

  for (const PathSample& sample : samples) {
    const int m = spec.dimension();
    Eigen::MatrixXd psi_sample = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t j = 0; j < sample.N; ++j) {
      psi_sample += path_moment(sample, j, spec);
    }
    psi_sample /= static_cast<double>(sample.N);

    const Eigen::MatrixXd gap = white * (psi_sample - reference.psi) * white;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap_eig(gap);
    const double deviation =
        std::max(std::abs(gap_eig.eigenvalues().minCoeff()),
                 std::abs(gap_eig.eigenvalues().maxCoeff()));
    report.deviations.push_back(deviation);
    if (deviation > report.threshold) ++report.violations;
  }
  report.violation_fraction = static_cast<double>(report.violations) /
                              static_cast<double>(report.deviations.size());
  return report;
}

}  // namespace sdeproj
