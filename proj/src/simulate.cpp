#include "sdeproj/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "sdeproj/errors.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/parallel.hpp"
#include "sdeproj/rng.hpp"

namespace sdeproj {

namespace {
constexpr std::uint64_t kPathMagic = 0x31504d5350454453ULL;  // "SDEPSMP1"
}

void PathSample::save_binary(const std::string& path) const {
  auto os = open_output(path);
  write_u64(os, kPathMagic);
  write_u32(os, static_cast<std::uint32_t>(N));
  write_u32(os, static_cast<std::uint32_t>(n));
  write_f64(os, delta);
  write_u64(os, seed);
  write_u32(os, static_cast<std::uint32_t>(substeps));
  write_u32(os, has_fine_grid ? 1u : 0u);
  for (double v : values) write_f64(os, v);
  if (has_fine_grid) {
    for (double v : fine_values) write_f64(os, v);
    for (double v : fine_increments) write_f64(os, v);
  }
  require(bool(os), ErrorCode::config, "write failed: " + path);
}

PathSample PathSample::load_binary(const std::string& path) {
  auto is = open_input(path);
  require(read_u64(is) == kPathMagic, ErrorCode::config,
          "not a path sample file: " + path);
  PathSample s;
  s.N = read_u32(is);
  s.n = read_u32(is);
  s.delta = read_f64(is);
  s.seed = read_u64(is);
  s.substeps = read_u32(is);
  s.has_fine_grid = read_u32(is) != 0;
  s.values.resize(s.N * (s.n + 1));
  for (double& v : s.values) v = read_f64(is);
  if (s.has_fine_grid) {
    s.fine_values.resize(s.N * (s.n * s.substeps + 1));
    s.fine_increments.resize(s.N * s.n * s.substeps);
    for (double& v : s.fine_values) v = read_f64(is);
    for (double& v : s.fine_increments) v = read_f64(is);
  }
  return s;
}

void PathSample::save_csv(const std::string& path) const {
  auto os = open_output(path);
  os << "path,k,t,x\n";
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k <= n; ++k) {
      os << j << ',' << k << ',' << fmt_double(static_cast<double>(k) * delta)
         << ',' << fmt_double(value(j, k)) << '\n';
    }
  }
  require(bool(os), ErrorCode::config, "write failed: " + path);
}

PathSample simulate_sample(const DiffusionModel& model, std::size_t N,
                           std::size_t n, std::size_t substeps,
                           std::uint64_t seed, SimulateOptions options) {
  require(N >= 1 && n >= 1 && substeps >= 1, ErrorCode::precondition,
          "need N >= 1, n >= 1, substeps >= 1");
  const DiffusionModel local =
      model.x0 == 0.0 ? model : model.shifted_to_origin();

  PathSample sample;
  sample.N = N;
  sample.n = n;
  sample.delta = 1.0 / static_cast<double>(n);
  sample.seed = seed;
  sample.substeps = substeps;
  sample.values.assign(N * (n + 1), 0.0);
  sample.has_fine_grid = options.keep_fine_grid;
  if (sample.has_fine_grid) {
    sample.fine_values.assign(N * (n * substeps + 1), 0.0);
    sample.fine_increments.assign(N * n * substeps, 0.0);
  }

  const double dt = sample.delta / static_cast<double>(substeps);
  const double sqrt_dt = std::sqrt(dt);
  const std::size_t fine_len = n * substeps;

  parallel_for(
      N,
      [&](std::size_t j) {
        RngStream rng(stream_key(seed, StreamTag::simulate, j));
        double x = 0.0;
        double* row = sample.values.data() + j * (n + 1);
        double* fine_row = sample.has_fine_grid
                               ? sample.fine_values.data() + j * (fine_len + 1)
                               : nullptr;
        double* inc_row = sample.has_fine_grid
                              ? sample.fine_increments.data() + j * fine_len
                              : nullptr;
        row[0] = 0.0;
        if (fine_row) fine_row[0] = 0.0;
        std::size_t fi = 0;
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t s = 0; s < substeps; ++s, ++fi) {
            const double dw = sqrt_dt * rng.normal();
            const double sig = local.sigma(x);
            double next = x + local.b(x) * dt + sig * dw;
            if (options.milstein) {
              next += 0.5 * sig * local.sigma_prime(x) * (dw * dw - dt);
            }
            if (!std::isfinite(next)) {
              fail(ErrorCode::simulation_diverged,
                   "path " + std::to_string(j) + " became non-finite near t=" +
                       std::to_string(static_cast<double>(fi + 1) * dt));
            }
            x = next;
            if (fine_row) fine_row[fi + 1] = x;
            if (inc_row) inc_row[fi] = dw;
          }
          row[k + 1] = x;
        }
      },
      options.threads);

  return sample;
}

ErrorTable strong_error_probe(const DiffusionModel& model, std::size_t n,
                              const std::vector<std::size_t>& substeps_list,
                              std::size_t replicates, std::uint64_t seed) {
  require(replicates >= 100, ErrorCode::precondition,
          "discretization probe needs >= 100 replicates");
  require(substeps_list.size() >= 2, ErrorCode::precondition,
          "discretization probe needs >= 2 refinement levels");
  std::vector<std::size_t> levels = substeps_list;
  std::sort(levels.begin(), levels.end());
  require(levels.front() >= 1, ErrorCode::precondition, "substeps must be >= 1");
  const std::size_t finest = levels.back();
  for (std::size_t s : levels) {
    require(finest % s == 0, ErrorCode::precondition,
            "each refinement level must divide the finest one");
  }

  const DiffusionModel local =
      model.x0 == 0.0 ? model : model.shifted_to_origin();
  const double delta = 1.0 / static_cast<double>(n);
  const double dt_fine = delta / static_cast<double>(finest);
  const double sqrt_dt_fine = std::sqrt(dt_fine);
  const std::size_t fine_len = n * finest;

  // accumulated squared gaps per level, at the n observation times
  std::vector<double> sq_sum(levels.size(), 0.0);
  std::vector<double> increments(fine_len);
  std::vector<double> reference(n);

  auto run_level = [&](std::size_t s, std::vector<double>& out) {
    const std::size_t agg = finest / s;
    const double dt = delta / static_cast<double>(s);
    double x = 0.0;
    std::size_t fi = 0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t step = 0; step < s; ++step) {
        double dw = 0.0;
        for (std::size_t a = 0; a < agg; ++a, ++fi) dw += increments[fi];
        const double next = x + local.b(x) * dt + local.sigma(x) * dw;
        require(std::isfinite(next), ErrorCode::simulation_diverged,
                "probe path became non-finite");
        x = next;
      }
      out[k] = x;
    }
  };

  std::vector<double> level_values(n);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    RngStream rng(stream_key(seed, StreamTag::simulate, rep));
    for (double& dw : increments) dw = sqrt_dt_fine * rng.normal();
    run_level(finest, reference);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      if (levels[li] == finest) continue;
      run_level(levels[li], level_values);
      for (std::size_t k = 0; k < n; ++k) {
        const double d = level_values[k] - reference[k];
        sq_sum[li] += d * d;
      }
    }
  }

  ErrorTable table;
  const double denom = static_cast<double>(replicates * n);
  for (std::size_t li = 0; li < levels.size(); ++li) {
    ErrorTable::Row row;
    row.substeps = levels[li];
    row.step_size = delta / static_cast<double>(levels[li]);
    row.rms = levels[li] == finest ? 0.0 : std::sqrt(sq_sum[li] / denom);
    table.rows.push_back(row);
  }

  std::vector<double> lx, ly;
  for (const auto& row : table.rows) {
    if (row.substeps == finest || row.rms <= 0.0) continue;
    lx.push_back(std::log(row.step_size));
    ly.push_back(std::log(row.rms));
  }
  if (lx.size() >= 3) table.slope = line_fit(lx, ly);
  return table;
}

}  // namespace sdeproj
