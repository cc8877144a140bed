#include "sdeproj/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <json.hpp>

#include "sdeproj/errors.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/parallel.hpp"

namespace sdeproj {

using json = nlohmann::ordered_json;

// ---- bump kernel ---------------------------------------------------------

void BumpKernel::base_derivatives(double x, double out[5]) {
  for (int i = 0; i < 5; ++i) out[i] = 0.0;
  if (!(std::abs(x) < 1.0)) return;
  const double s = 1.0 / (1.0 - x * x);
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double x2 = x * x;
  // derivatives of s = (1-x^2)^{-1}
  const double d1 = 2.0 * x * s2;
  const double d2 = 2.0 * s2 + 8.0 * x2 * s3;
  const double d3 = 24.0 * x * s3 + 48.0 * x2 * x * s4;
  const double d4 = 24.0 * s3 + 288.0 * x2 * s4 + 384.0 * x2 * x2 * s5;
  // f = exp(q) with q = -s
  const double q1 = -d1, q2 = -d2, q3 = -d3, q4 = -d4;
  const double f = std::exp(-s);
  out[0] = f;
  out[1] = q1 * f;
  out[2] = (q2 + q1 * q1) * f;
  out[3] = (q3 + 3.0 * q1 * q2 + q1 * q1 * q1) * f;
  out[4] = (q4 + 4.0 * q1 * q3 + 3.0 * q2 * q2 + 6.0 * q1 * q1 * q2 +
            q1 * q1 * q1 * q1) *
           f;
}

BumpKernel::BumpKernel(double amplitude) : a_(amplitude) {
  require(amplitude > 0.0, ErrorCode::precondition,
          "kernel amplitude must be positive");
  l2_sq_ = integrate([this](double x) { const double v = value(x); return v * v; },
                     -0.5, 0.5, 1e-14);
}

double BumpKernel::value(double x) const {
  const double z = 2.0 * x;
  if (!(std::abs(z) < 1.0)) return 0.0;
  return a_ * std::exp(-1.0 / (1.0 - z * z));
}

double BumpKernel::derivative(double x, int order) const {
  require(order >= 0 && order <= 4, ErrorCode::precondition,
          "kernel derivatives available up to order 4");
  double base[5];
  base_derivatives(2.0 * x, base);
  return a_ * std::pow(2.0, order) * base[order];
}

double BumpKernel::sup_norm() const { return a_ * std::exp(-1.0); }

double BumpKernel::l2_norm_sq() const { return l2_sq_; }

double BumpKernel::l2_norm() const { return std::sqrt(l2_sq_); }

double BumpKernel::derivative_sup_norm(int order) const {
  constexpr std::size_t kProbe = 8001;
  double best = 0.0;
  for (std::size_t i = 0; i < kProbe; ++i) {
    const double x = -0.5 + static_cast<double>(i) / (kProbe - 1);
    best = std::max(best, std::abs(derivative(x, order)));
  }
  return best;
}

// ---- hypothesis family ---------------------------------------------------

bool HypothesisSet::flat(std::size_t j) const {
  require(j < words.size(), ErrorCode::precondition, "hypothesis index");
  if (Gamma == 0.0) return true;
  for (int w : words[j]) {
    if (w != 0) return false;
  }
  return true;
}

namespace {

// bump cell of x, or npos outside [A, B]
std::size_t bump_cell(double x, double A, double B, std::size_t bumps) {
  if (x < A || x > B) return std::size_t(-1);
  const double u = (x - A) / (B - A);
  const double scaled = u * static_cast<double>(bumps);
  std::size_t cell = static_cast<std::size_t>(
      std::min(static_cast<double>(bumps - 1), std::max(0.0, std::floor(scaled))));
  return cell;
}

// order-r derivative of the bump attached to x's cell, without the Gamma factor
double bump_term(const HypothesisSet& set, std::size_t j, double x, int order) {
  const std::size_t cell = bump_cell(x, set.A, set.B, set.bumps);
  if (cell == std::size_t(-1)) return 0.0;
  if (set.words[j][cell] == 0) return 0.0;
  const double width = set.B - set.A;
  const double u = (x - set.A) / width;
  const double center = (static_cast<double>(cell) + 0.5) * set.h;
  const double arg = (u - center) / set.h;
  const double scale = set.dilation * set.R *
                       std::pow(set.h, set.beta - order) *
                       std::pow(width, -static_cast<double>(order));
  return scale * set.kernel.derivative(arg, order);
}

}  // namespace

double HypothesisSet::sigma_sq(std::size_t j, double x) const {
  require(j < words.size(), ErrorCode::precondition, "hypothesis index");
  return 1.0 + Gamma * bump_term(*this, j, x, 0);
}

double HypothesisSet::sigma_sq_derivative(std::size_t j, double x,
                                          int order) const {
  require(j < words.size(), ErrorCode::precondition, "hypothesis index");
  require(order >= 0 && order <= 4, ErrorCode::precondition,
          "derivatives available up to order 4");
  if (order == 0) return sigma_sq(j, x);
  return Gamma * bump_term(*this, j, x, order);
}

DiffusionModel HypothesisSet::model(std::size_t j) const {
  require(j < words.size(), ErrorCode::precondition, "hypothesis index");
  auto self = std::make_shared<const HypothesisSet>(*this);
  DiffusionModel m;
  m.name = "hypothesis_" + std::to_string(j);
  m.b = [](double) { return 0.0; };
  m.b_prime = [](double) { return 0.0; };
  m.sigma = [self, j](double x) { return std::sqrt(self->sigma_sq(j, x)); };
  m.sigma_prime = [self, j](double x) {
    const double s = std::sqrt(self->sigma_sq(j, x));
    return self->sigma_sq_derivative(j, x, 1) / (2.0 * s);
  };
  m.sigma_double_prime = [self, j](double x) {
    const double ss = self->sigma_sq(j, x);
    const double s = std::sqrt(ss);
    const double sp = self->sigma_sq_derivative(j, x, 1) / (2.0 * s);
    return (self->sigma_sq_derivative(j, x, 2) - 2.0 * sp * sp) / (2.0 * s);
  };
  m.kappa0 = 1.0;
  m.kappa1 = kappa1;
  m.x0 = 0.0;
  m.sup_sigma_at_most_one = false;
  return m;
}

std::string HypothesisSet::to_json() const {
  json doc;
  doc["bumps"] = bumps;
  doc["h"] = h;
  doc["beta"] = beta;
  doc["R"] = R;
  doc["A"] = A;
  doc["B"] = B;
  doc["kappa1"] = kappa1;
  doc["gamma"] = Gamma;
  doc["dilation"] = dilation;
  doc["kernel_amplitude"] = kernel.amplitude();
  doc["words"] = words;
  return doc.dump(2);
}

void HypothesisSet::save_json(const std::string& path) const {
  auto out = open_output(path);
  out << to_json() << '\n';
  require(bool(out), ErrorCode::config, "write failed: " + path);
}

namespace {

std::size_t hamming(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

bool far_from_all(const std::vector<std::vector<int>>& words,
                  const std::vector<int>& candidate, std::size_t m) {
  for (const auto& w : words) {
    if (8 * hamming(w, candidate) < m) return false;
  }
  return true;
}

HypothesisSet assemble(double beta, double R, double kappa1, double A,
                       double B, std::vector<std::vector<int>> words,
                       double dilation) {
  require(B > A, ErrorCode::precondition, "interval needs B > A");
  require(beta > 0.0 && R > 0.0, ErrorCode::precondition,
          "smoothness parameters must be positive");
  require(!words.empty(), ErrorCode::precondition, "need at least one word");
  HypothesisSet set;
  set.bumps = words.front().size();
  for (const auto& w : words) {
    require(w.size() == set.bumps, ErrorCode::precondition,
            "all words must share one length");
  }
  set.h = 1.0 / static_cast<double>(set.bumps);
  set.words = std::move(words);
  set.beta = beta;
  set.R = R;
  set.A = A;
  set.B = B;
  set.kappa1 = kappa1;
  set.dilation = dilation;
  set.kernel = BumpKernel(1.0);
  set.Gamma = (kappa1 * kappa1 - 1.0) / (R * set.kernel.sup_norm());
  return set;
}

}  // namespace

HypothesisSet build_hypotheses(double beta, double R, double kappa1, double A,
                               double B, std::size_t m, std::size_t M_target,
                               std::uint64_t seed, double dilation) {
  require(m >= 8, ErrorCode::precondition, "need at least 8 bumps");
  require(m <= 64, ErrorCode::precondition, "bump count capped at 64");
  require(kappa1 > 1.0, ErrorCode::precondition,
          "upper volatility bound must exceed 1");
  require(M_target >= 1, ErrorCode::precondition, "need at least one word");

  const double guaranteed = std::pow(2.0, static_cast<double>(m) / 8.0);
  if (static_cast<double>(M_target) > 4.0 * guaranteed) {
    fail(ErrorCode::codebook_infeasible,
         "requested " + std::to_string(M_target) +
             " words; the distance bound guarantees only about " +
             std::to_string(static_cast<std::size_t>(guaranteed)));
  }

  std::vector<std::vector<int>> words;
  words.emplace_back(m, 0);

  RngStream rng(stream_key(seed, StreamTag::codebook));
  const std::size_t attempts = 200000;
  for (std::size_t trial = 0;
       trial < attempts && words.size() < M_target + 1; ++trial) {
    std::vector<int> candidate(m, 0);
    std::uint64_t bits = rng.next_u64();
    for (std::size_t i = 0; i < m; ++i) candidate[i] = (bits >> i) & 1u;
    if (far_from_all(words, candidate, m)) words.push_back(std::move(candidate));
  }

  if (words.size() < M_target + 1 && m <= 24) {
    // deterministic restart: greedy sweep over all words in numeric order
    words.clear();
    words.emplace_back(m, 0);
    const std::uint64_t total = 1ULL << m;
    for (std::uint64_t w = 1; w < total && words.size() < M_target + 1; ++w) {
      std::vector<int> candidate(m, 0);
      for (std::size_t i = 0; i < m; ++i) candidate[i] = (w >> i) & 1u;
      if (far_from_all(words, candidate, m)) words.push_back(std::move(candidate));
    }
  }

  if (words.size() < M_target + 1) {
    fail(ErrorCode::codebook_infeasible,
         "could not reach " + std::to_string(M_target) +
             " words at pairwise distance >= " + std::to_string(m) + "/8");
  }

  return assemble(beta, R, kappa1, A, B, std::move(words), dilation);
}

HypothesisSet hypothesis_set_from_words(double beta, double R, double kappa1,
                                        double A, double B,
                                        const std::vector<std::vector<int>>& words,
                                        double dilation) {
  require(kappa1 > 1.0, ErrorCode::precondition,
          "upper volatility bound must exceed 1");
  return assemble(beta, R, kappa1, A, B, words, dilation);
}

// ---- separation ----------------------------------------------------------

void SeparationReport::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "j,l,hamming,quadrature,analytic\n";
  for (const SeparationPair& p : pairs) {
    out << p.j << ',' << p.l << ',' << p.hamming << ','
        << fmt_double(p.quadrature) << ',' << fmt_double(p.analytic) << '\n';
  }
}

SeparationReport pairwise_separation(const HypothesisSet& set, double c0,
                                     std::size_t N, std::size_t n) {
  require(c0 > 0.0, ErrorCode::precondition, "c0 must be positive");
  require(N >= 1 && n >= 1, ErrorCode::precondition, "need N, n >= 1");
  require(set.words.size() >= 2, ErrorCode::precondition,
          "need at least two hypotheses");

  const double width = set.B - set.A;
  const double norm_sq = set.kernel.l2_norm_sq();
  const double cell_mass = width * set.Gamma * set.Gamma * set.R * set.R *
                           set.dilation * set.dilation * norm_sq *
                           std::pow(set.h, 2.0 * set.beta + 1.0);

  SeparationReport report;
  report.c0 = c0;
  report.N = N;
  report.n = n;
  report.min_distance = std::numeric_limits<double>::infinity();

  for (std::size_t j = 0; j < set.words.size(); ++j) {
    for (std::size_t l = j + 1; l < set.words.size(); ++l) {
      SeparationPair pair;
      pair.j = j;
      pair.l = l;
      pair.hamming = hamming(set.words[j], set.words[l]);
      double quad_sq = 0.0;
      for (std::size_t k = 0; k < set.bumps; ++k) {
        if (set.words[j][k] == set.words[l][k]) continue;
        const double lo = set.A + static_cast<double>(k) * set.h * width;
        const double hi = lo + set.h * width;
        quad_sq += integrate(
            [&](double x) {
              const double d = set.sigma_sq(j, x) - set.sigma_sq(l, x);
              return d * d;
            },
            lo, hi, std::max(cell_mass * 1e-10, 1e-300));
      }
      pair.quadrature = std::sqrt(quad_sq);
      pair.analytic = std::sqrt(cell_mass * static_cast<double>(pair.hamming));
      if (pair.hamming > 0) {
        report.max_rel_gap =
            std::max(report.max_rel_gap,
                     std::abs(pair.quadrature - pair.analytic) / pair.analytic);
      }
      report.min_distance = std::min(report.min_distance, pair.quadrature);
      report.pairs.push_back(pair);
    }
  }

  report.lambda0 = set.dilation * set.R * set.Gamma * set.kernel.l2_norm() *
                   std::sqrt(width) /
                   (std::pow(2.0, set.beta + 1.0) * std::pow(c0, set.beta));
  report.two_s =
      2.0 * report.lambda0 *
      std::pow(static_cast<double>(N) * static_cast<double>(n),
               -set.beta / (2.0 * set.beta + 1.0));
  report.separated = report.min_distance >= report.two_s;
  return report;
}

// ---- smoothness membership ------------------------------------------------

void HolderReport::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "j,max_quotient\n";
  for (std::size_t j = 0; j < per_hypothesis.size(); ++j) {
    out << j << ',' << fmt_double(per_hypothesis[j]) << '\n';
  }
}

HolderReport holder_membership(const HypothesisSet& set,
                               std::size_t probe_points, double slack) {
  require(probe_points >= 16, ErrorCode::precondition,
          "probe grid too coarse");
  require(set.beta > 0.0 && set.beta <= 4.0, ErrorCode::precondition,
          "membership check covers beta in (0, 4]");
  const int d = static_cast<int>(std::ceil(set.beta)) - 1;

  HolderReport report;
  report.beta = set.beta;
  report.R = set.R;
  report.order = d;
  report.slack = slack;

  const std::size_t points = probe_points + 1;
  const double step = (set.B - set.A) / static_cast<double>(probe_points);
  std::vector<double> gap_pow(points, 0.0);
  for (std::size_t g = 1; g < points; ++g) {
    gap_pow[g] = std::pow(static_cast<double>(g) * step,
                          set.beta - static_cast<double>(d));
  }

  std::vector<double> values(points);
  for (std::size_t j = 0; j < set.words.size(); ++j) {
    for (std::size_t i = 0; i < points; ++i) {
      const double x = set.A + static_cast<double>(i) * step;
      values[i] = set.sigma_sq_derivative(j, x, d);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t g = 1; i + g < points; ++g) {
        const double q = std::abs(values[i + g] - values[i]) / gap_pow[g];
        worst = std::max(worst, q);
      }
    }
    report.per_hypothesis.push_back(worst);
    report.max_quotient = std::max(report.max_quotient, worst);
  }
  report.within = report.max_quotient <= set.R * slack;
  return report;
}

// ---- divergence budget ----------------------------------------------------

double log_likelihood_ratio(const HypothesisSet& set, std::size_t j,
                            const DensityTransforms& transforms,
                            const PathSample& sample, std::size_t path,
                            const BridgeOptions& bridge, RngStream& rng) {
  require(j < set.words.size(), ErrorCode::precondition, "hypothesis index");
  require(path < sample.N, ErrorCode::precondition, "path index");
  require(sample.n >= 2, ErrorCode::precondition,
          "likelihood ratio needs n >= 2");
  if (set.flat(j)) return 0.0;

  const double delta = sample.delta;
  const double sqrt_delta = std::sqrt(delta);
  const std::size_t steps = bridge.steps;
  const double du = 1.0 / static_cast<double>(steps);

  double total = 0.0;
  for (std::size_t k = 1; k + 1 <= sample.n; ++k) {
    const double x0 = sample.value(path, k);
    const double x1 = sample.value(path, k + 1);
    const double s0 = transforms.S(x0);
    const double s1 = transforms.S(x1);
    const double sig0 = std::sqrt(set.sigma_sq(j, x0));
    const double sig1 = std::sqrt(set.sigma_sq(j, x1));

    // bridge Monte Carlo for the exponential factor of the exact density
    const double g_start = transforms.G_interp(s0);
    const double g_end = transforms.G_interp(s1);
    double sum = 0.0;
    for (std::size_t rep = 0; rep < bridge.bridges; ++rep) {
      double integral = 0.5 * (g_start + g_end);
      double w = 0.0;
      double u_prev = 0.0;
      for (std::size_t i = 1; i < steps; ++i) {
        const double u = static_cast<double>(i) * du;
        const double remain_prev = 1.0 - u_prev;
        const double mean = w * (1.0 - u) / remain_prev;
        const double var = (u - u_prev) * (1.0 - u) / remain_prev;
        w = mean + std::sqrt(var) * rng.normal();
        u_prev = u;
        integral += transforms.G_interp((1.0 - u) * s0 + u * s1 + sqrt_delta * w);
      }
      integral *= du;
      sum += bridge.first_order ? delta * integral : std::exp(delta * integral);
    }
    const double count = static_cast<double>(bridge.bridges);
    const double factor =
        bridge.first_order ? 1.0 + sum / count : sum / count;

    const double dx = x1 - x0;
    const double ds = s1 - s0;
    total += std::log(factor) - std::log(sig0) +
             0.5 * (std::log(sig0) - std::log(sig1)) +
             0.5 * (dx * dx - ds * ds) / delta;
  }
  return total;
}

void KLReport::save_csv(const std::string& path) const {
  auto out = open_output(path);
  out << "j,kl,se\n";
  for (const KLRow& row : rows) {
    out << row.j << ',' << fmt_double(row.kl) << ',' << fmt_double(row.se)
        << '\n';
  }
}

KLReport kl_budget(const HypothesisSet& set, std::size_t N, std::size_t n,
                   std::size_t mc_paths, std::uint64_t seed,
                   KLOptions options) {
  const std::size_t M = set.M();
  require(M >= 1, ErrorCode::precondition, "need at least one hypothesis");
  require(N >= 1 && n >= 2, ErrorCode::precondition, "need N >= 1, n >= 2");
  require(mc_paths >= 2, ErrorCode::precondition, "need at least two paths");

  KLReport report;
  report.N = N;
  report.n = n;
  report.mc_paths = mc_paths;
  report.rows.resize(M);

  parallel_for(
      M,
      [&](std::size_t idx) {
        const std::size_t j = idx + 1;
        KLRow row;
        row.j = j;
        if (set.flat(j)) {
          report.rows[idx] = row;  // identical laws: divergence exactly 0
          return;
        }
        const DiffusionModel model_j = set.model(j);
        const DensityTransforms transforms(model_j);
        SimulateOptions sim;
        sim.threads = 1;
        const PathSample sample =
            simulate_sample(model_j, mc_paths, n, options.substeps,
                            stream_key(seed, StreamTag::likelihood, j, 0), sim);
        std::vector<double> values(mc_paths, 0.0);
        for (std::size_t p = 0; p < mc_paths; ++p) {
          RngStream rng(stream_key(seed, StreamTag::likelihood, j, 1 + p));
          values[p] = log_likelihood_ratio(set, j, transforms, sample, p,
                                           options.bridge, rng);
        }
        const MeanSe ms = mean_se(values);
        row.kl = static_cast<double>(N) * ms.mean;
        row.se = static_cast<double>(N) * ms.se;
        report.rows[idx] = row;
      },
      options.threads);

  double sum = 0.0, var = 0.0;
  for (const KLRow& row : report.rows) {
    sum += row.kl;
    var += row.se * row.se;
  }
  report.average = sum / static_cast<double>(M);
  report.se = std::sqrt(var) / static_cast<double>(M);
  report.budget = std::log(static_cast<double>(M)) / 16.0;
  report.tsybakov_bound = M >= 2 ? tsybakov_probability_bound(M) : 0.0;
  report.within_budget = report.average <= report.budget + 3.0 * report.se;
  return report;
}

double tsybakov_probability_bound(std::size_t M, double alpha) {
  require(M >= 2, ErrorCode::precondition, "bound needs M >= 2");
  require(alpha > 0.0 && alpha < 0.5, ErrorCode::precondition,
          "alpha must lie in (0, 1/2)");
  const double sqrt_m = std::sqrt(static_cast<double>(M));
  const double log_m = std::log(static_cast<double>(M));
  return sqrt_m / (1.0 + sqrt_m) *
         (1.0 - 2.0 * alpha - std::sqrt(2.0 * alpha / log_m));
}

}  // namespace sdeproj
