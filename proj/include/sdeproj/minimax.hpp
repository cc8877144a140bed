#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdeproj/density.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"
#include "sdeproj/rng.hpp"
#include "sdeproj/simulate.hpp"

namespace sdeproj {

// Smooth compactly supported bump K(x) = a K0(2x) with
// K0(x) = exp(-1/(1-x^2)) on (-1,1); K is positive exactly on (-1/2, 1/2)
// and every derivative vanishes at the support boundary. Derivatives up to
// order 4 are analytic (needed for smoothness classes up to beta = 4 plus
// curvature checks).
class BumpKernel {
 public:
  explicit BumpKernel(double amplitude = 1.0);

  double amplitude() const { return a_; }
  double value(double x) const;                  // K(x)
  double derivative(double x, int order) const;  // K^(order)(x), order 0..4

  double sup_norm() const;    // max K = a / e, attained at 0
  double l2_norm_sq() const;  // int_{-1/2}^{1/2} K^2
  double l2_norm() const;
  double derivative_sup_norm(int order) const;  // probed on a dense grid

  // K0 and its first four derivatives at one point.
  static void base_derivatives(double x, double out[5]);

 private:
  double a_ = 1.0;
  double l2_sq_ = 0.0;
};

// Family of bump-perturbed squared volatilities on [A, B]:
//   sigma_j^2 = 1 + Gamma sum_k w^j_k eta_k,
// indexed by binary words w^j of length `bumps`, with w^0 the all-zero word
// so sigma_0^2 == 1. eta_k rescales
//   phi_k(u) = dilation * R h^beta K((u - x_k)/h),  x_k = (k - 1/2) h,
// from (0,1) to (A,B); the bumps live on disjoint cells. The default
// Gamma = (kappa1^2 - 1)/(R ||K||_inf) keeps every member inside
// [1, kappa1^2].
struct HypothesisSet {
  std::size_t bumps = 0;  // word length; h = 1/bumps
  double h = 0.0;
  std::vector<std::vector<int>> words;  // M+1 words; words[0] all zero
  double Gamma = 0.0;
  double beta = 2.0;
  double R = 1.0;
  double A = -1.0;
  double B = 1.0;
  double kappa1 = 0.0;    // upper volatility bound (not squared)
  double dilation = 1.0;  // the real-line construction doubles the bumps
  BumpKernel kernel{1.0};

  std::size_t M() const { return words.empty() ? 0 : words.size() - 1; }
  bool flat(std::size_t j) const;  // word j leaves sigma^2 identically 1

  double sigma_sq(std::size_t j, double x) const;
  double sigma_sq_derivative(std::size_t j, double x, int order) const;
  DiffusionModel model(std::size_t j) const;  // driftless diffusion

  std::string to_json() const;
  void save_json(const std::string& path) const;
};

// Builds the family with a verified codebook: M_target nonzero words of
// length m, pairwise Hamming distance (zero word included) at least m/8.
// Random search first, then a greedy sweep of all 2^m words for m <= 24.
// Throws codebook_infeasible when M_target exceeds 4 * 2^{m/8} or the
// sweep cannot reach the target.
HypothesisSet build_hypotheses(double beta, double R, double kappa1, double A,
                               double B, std::size_t m, std::size_t M_target,
                               std::uint64_t seed, double dilation = 1.0);

// Same family with caller-supplied words (no search, no distance demands);
// words[0] should be the all-zero word to preserve the flat null.
HypothesisSet hypothesis_set_from_words(double beta, double R, double kappa1,
                                        double A, double B,
                                        const std::vector<std::vector<int>>& words,
                                        double dilation = 1.0);

// L2([A,B]) distances between all pairs, by per-cell quadrature and by the
// closed form (B-A) Gamma^2 R^2 dilation^2 ||K||^2 h^{2 beta + 1} rho with
// rho the Hamming distance; the report also carries the separation target
//   2 s = 2 Lambda0 (N n)^{-beta/(2 beta + 1)},
//   Lambda0 = dilation R Gamma ||K|| sqrt(B-A) / (2^{beta+1} c0^beta).
struct SeparationPair {
  std::size_t j = 0, l = 0;
  std::size_t hamming = 0;
  double quadrature = 0.0;  // L2 distance
  double analytic = 0.0;
};

struct SeparationReport {
  std::vector<SeparationPair> pairs;
  double min_distance = 0.0;
  double max_rel_gap = 0.0;  // worst |quadrature - analytic| / analytic
  double lambda0 = 0.0;
  double two_s = 0.0;
  double c0 = 0.0;
  std::size_t N = 0, n = 0;
  bool separated = false;  // min_distance >= two_s
  void save_csv(const std::string& path) const;
};

SeparationReport pairwise_separation(const HypothesisSet& set, double c0,
                                     std::size_t N, std::size_t n);

// Empirical Holder quotient of order d (the largest integer strictly below
// beta): sup over probe pairs of |f^(d)(x) - f^(d)(y)| / |x - y|^{beta - d},
// per hypothesis. Membership in the class demands quotient <= R; the report
// allows `slack` (default 5%) for probe discreteness.
struct HolderReport {
  double beta = 0.0, R = 0.0;
  int order = 0;
  std::vector<double> per_hypothesis;
  double max_quotient = 0.0;
  double slack = 1.05;
  bool within = false;
  void save_csv(const std::string& path) const;
};

HolderReport holder_membership(const HypothesisSet& set,
                               std::size_t probe_points = 4000,
                               double slack = 1.05);

struct KLOptions {
  BridgeOptions bridge{2000, 64, false};
  std::size_t substeps = 64;
  int threads = 0;
};

// log dP_j/dP_0 along stored path `path` of `sample` (transitions
// k = 1..n-1): per transition, the bridge factor of the exact transition
// density, the volatility prefactor, and the Gaussian-exponent difference
// between the scale-transformed and raw increments. The null is the unit
// Brownian motion, so a flat hypothesis short-circuits to exactly 0.
double log_likelihood_ratio(const HypothesisSet& set, std::size_t j,
                            const DensityTransforms& transforms,
                            const PathSample& sample, std::size_t path,
                            const BridgeOptions& bridge, RngStream& rng);

struct KLRow {
  std::size_t j = 0;
  double kl = 0.0;  // N * per-copy divergence estimate
  double se = 0.0;
};

struct KLReport {
  std::vector<KLRow> rows;  // j = 1..M
  double average = 0.0;     // (1/M) sum_j rows[j].kl
  double se = 0.0;
  double budget = 0.0;          // (1/16) log(M)
  double tsybakov_bound = 0.0;  // minimax probability bound at alpha = 1/16
  std::size_t N = 0, n = 0, mc_paths = 0;
  bool within_budget = false;  // average <= budget + 3 se
  void save_csv(const std::string& path) const;
};

// Estimates E^{P_j}[log dP_j/dP_0] for each j by simulating mc_paths paths
// of the hypothesis diffusion and evaluating the likelihood ratio, then
// scales by N (independent path copies multiply the divergence).
KLReport kl_budget(const HypothesisSet& set, std::size_t N, std::size_t n,
                   std::size_t mc_paths, std::uint64_t seed,
                   KLOptions options = {});

// (sqrt(M)/(1+sqrt(M))) (1 - 2 alpha - sqrt(2 alpha / log M)): the minimax
// probability bound that holds once the separation and divergence-budget
// premises do.
double tsybakov_probability_bound(std::size_t M, double alpha = 1.0 / 16.0);

}  // namespace sdeproj
