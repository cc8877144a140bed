#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdeproj/model.hpp"
#include "sdeproj/numerics.hpp"

namespace sdeproj {

// N independent paths observed at k/n for k = 0..n on the unit time
// horizon, simulated on a finer internal grid of `substeps` Euler steps per
// observation interval. Paths start at 0 (models with x0 != 0 are shifted
// before stepping). Each path draws from its own generator keyed by
// (seed, path index), so row j never depends on N or on execution order.
struct PathSample {
  std::size_t N = 0;
  std::size_t n = 0;
  double delta = 0.0;  // 1/n
  std::uint64_t seed = 0;
  std::size_t substeps = 1;

  std::vector<double> values;  // N rows of (n+1) observations

  // Optional retention of the internal grid; needed by the residual
  // decomposition. Per path: n*substeps+1 states and n*substeps Brownian
  // increments.
  bool has_fine_grid = false;
  std::vector<double> fine_values;
  std::vector<double> fine_increments;

  double value(std::size_t j, std::size_t k) const {
    return values[j * (n + 1) + k];
  }
  double fine_value(std::size_t j, std::size_t i) const {
    return fine_values[j * (n * substeps + 1) + i];
  }
  double fine_increment(std::size_t j, std::size_t i) const {
    return fine_increments[j * n * substeps + i];
  }

  void save_binary(const std::string& path) const;  // little-endian, documented in README
  static PathSample load_binary(const std::string& path);
  void save_csv(const std::string& path) const;  // columns path,k,t,x
};

struct SimulateOptions {
  bool keep_fine_grid = false;
  bool milstein = false;  // adds the 0.5*sigma*sigma'*(dW^2-dt) correction
  int threads = 0;        // 0 = process default
};

PathSample simulate_sample(const DiffusionModel& model, std::size_t N,
                           std::size_t n, std::size_t substeps,
                           std::uint64_t seed, SimulateOptions options = {});

// Couples Euler solutions across refinement levels with shared Brownian
// increments and reports RMS gaps against the finest level.
struct ErrorTable {
  struct Row {
    std::size_t substeps = 0;
    double step_size = 0.0;
    double rms = 0.0;
  };
  std::vector<Row> rows;
  // slope of log rms vs log step over the coarse levels; absent when the
  // coupled gaps vanish (constant sigma) or fewer than 3 usable levels
  std::optional<LineFit> slope;
};

ErrorTable strong_error_probe(const DiffusionModel& model, std::size_t n,
                              const std::vector<std::size_t>& substeps_list,
                              std::size_t replicates, std::uint64_t seed);

}  // namespace sdeproj
