#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdeproj/basis.hpp"
#include "sdeproj/bench.hpp"
#include "sdeproj/density.hpp"
#include "sdeproj/errors.hpp"
#include "sdeproj/estimator.hpp"
#include "sdeproj/gram.hpp"
#include "sdeproj/io.hpp"
#include "sdeproj/minimax.hpp"
#include "sdeproj/model.hpp"
#include "sdeproj/parallel.hpp"
#include "sdeproj/regression.hpp"
#include "sdeproj/risk.hpp"
#include "sdeproj/rng.hpp"
#include "sdeproj/simulate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sdeproj;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory (default: .)");
  cmd->add_option("--seed", args.seed, "override every seed in the config");
  cmd->add_option("--threads", args.threads, "worker cap, 0 = process default");
}

[[noreturn]] void config_fail(const std::string& where, const std::string& msg) {
  fail(ErrorCode::config, where.empty() ? msg : where + ": " + msg);
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) config_fail(path, "cannot open config file");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    config_fail(path, e.what());
  }
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    config_fail(where, "expected an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      config_fail(where.empty() ? item.key() : where + "." + item.key(),
                  "unknown key");
    }
  }
}

json& section(json& cfg, const char* name, bool required) {
  if (!cfg.contains(name)) {
    if (required) config_fail(name, "missing required section");
    cfg[name] = json::object();
  }
  if (!cfg[name].is_object()) config_fail(name, "expected an object");
  return cfg[name];
}

std::string where_key(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

double req_double(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) config_fail(where_key(where, key), "missing number");
  if (!obj[key].is_number()) config_fail(where_key(where, key), "expected a number");
  return obj[key].get<double>();
}

double opt_double(json& obj, const std::string& where, const char* key,
                  double def) {
  if (!obj.contains(key)) {
    obj[key] = def;
    return def;
  }
  if (!obj[key].is_number()) config_fail(where_key(where, key), "expected a number");
  return obj[key].get<double>();
}

std::size_t req_uint(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) {
    config_fail(where_key(where, key), "missing nonnegative integer");
  }
  const json& v = obj[key];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    config_fail(where_key(where, key), "expected a nonnegative integer");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

std::size_t opt_uint(json& obj, const std::string& where, const char* key,
                     std::size_t def) {
  if (!obj.contains(key)) {
    obj[key] = def;
    return def;
  }
  return req_uint(obj, where, key);
}

bool opt_bool(json& obj, const std::string& where, const char* key, bool def) {
  if (!obj.contains(key)) {
    obj[key] = def;
    return def;
  }
  if (!obj[key].is_boolean()) config_fail(where_key(where, key), "expected a boolean");
  return obj[key].get<bool>();
}

std::string req_string(const json& obj, const std::string& where,
                       const char* key) {
  if (!obj.contains(key)) config_fail(where_key(where, key), "missing string");
  if (!obj[key].is_string()) config_fail(where_key(where, key), "expected a string");
  return obj[key].get<std::string>();
}

std::string opt_string(json& obj, const std::string& where, const char* key,
                       const std::string& def) {
  if (!obj.contains(key)) {
    obj[key] = def;
    return def;
  }
  if (!obj[key].is_string()) config_fail(where_key(where, key), "expected a string");
  return obj[key].get<std::string>();
}

std::uint64_t resolve_seed(const CommonArgs& args, json& obj,
                           const std::string& where) {
  std::uint64_t seed;
  if (args.seed) {
    seed = *args.seed;
  } else if (obj.contains("seed")) {
    if (!obj["seed"].is_number_integer() || obj["seed"].get<std::int64_t>() < 0) {
      config_fail(where_key(where, "seed"), "expected a nonnegative integer");
    }
    seed = obj["seed"].get<std::uint64_t>();
  } else {
    seed = 1;
  }
  obj["seed"] = seed;
  return seed;
}

std::vector<int> parse_word(const json& value, const std::string& where) {
  std::vector<int> bits;
  if (value.is_string()) {
    for (char c : value.get<std::string>()) {
      if (c != '0' && c != '1') config_fail(where, "word must contain only 0/1");
      bits.push_back(c - '0');
    }
  } else if (value.is_array()) {
    for (const json& v : value) {
      if (!v.is_number_integer()) config_fail(where, "word entries must be 0/1");
      const auto b = v.get<std::int64_t>();
      if (b != 0 && b != 1) config_fail(where, "word entries must be 0/1");
      bits.push_back(static_cast<int>(b));
    }
  } else {
    config_fail(where, "expected a 0/1 string or array");
  }
  if (bits.empty()) config_fail(where, "word must be nonempty");
  return bits;
}

DiffusionModel model_from_config(json& m) {
  const std::string name = req_string(m, "model", "name");
  if (name == "constant_unit") {
    reject_unknown(m, "model", {"name"});
    return constant_model(1.0);
  }
  if (name == "constant") {
    reject_unknown(m, "model", {"name", "sigma", "b"});
    return constant_model(opt_double(m, "model", "sigma", 1.0),
                          opt_double(m, "model", "b", 0.0));
  }
  if (name == "example") {
    reject_unknown(m, "model", {"name"});
    return example_model();
  }
  if (name == "sine") {
    reject_unknown(m, "model", {"name"});
    return sine_volatility_model();
  }
  if (name == "bump") {
    reject_unknown(m, "model",
                   {"name", "beta", "R", "kappa1", "A", "B", "word", "dilation"});
    if (!m.contains("word")) config_fail("model.word", "missing word");
    const std::vector<int> bits = parse_word(m["word"], "model.word");
    const double beta = opt_double(m, "model", "beta", 2.0);
    const double R = opt_double(m, "model", "R", 1.0);
    const double kappa1 = req_double(m, "model", "kappa1");
    const double A = opt_double(m, "model", "A", -1.0);
    const double B = opt_double(m, "model", "B", 1.0);
    const double dilation = opt_double(m, "model", "dilation", 1.0);
    std::vector<std::vector<int>> words;
    words.emplace_back(bits.size(), 0);
    words.push_back(bits);
    return hypothesis_set_from_words(beta, R, kappa1, A, B, words, dilation)
        .model(1);
  }
  if (name == "custom") {
    reject_unknown(m, "model",
                   {"name", "b", "b_prime", "sigma", "sigma_prime",
                    "sigma_double_prime", "kappa0", "kappa1", "x0"});
    return custom_model(req_string(m, "model", "b"),
                        req_string(m, "model", "b_prime"),
                        req_string(m, "model", "sigma"),
                        req_string(m, "model", "sigma_prime"),
                        req_string(m, "model", "sigma_double_prime"),
                        req_double(m, "model", "kappa0"),
                        req_double(m, "model", "kappa1"),
                        opt_double(m, "model", "x0", 0.0));
  }
  config_fail("model.name", "unknown model '" + name + "'");
}

DimensionRegime dimension_regime_from(const std::string& name,
                                      const std::string& where) {
  if (name == "compact_single_path") return DimensionRegime::compact_single_path;
  if (name == "compact_repeated") return DimensionRegime::compact_repeated;
  if (name == "growing_interval") return DimensionRegime::growing_interval;
  config_fail(where, "unknown dimension regime '" + name + "'");
}

BasisSpec basis_from_config(json& basis, json& interval, std::size_t N,
                            std::size_t n) {
  reject_unknown(interval, "interval", {"A", "B", "growing_a"});
  double A, B;
  if (interval.contains("growing_a")) {
    if (N < 3) config_fail("interval.growing_a", "growing windows need N >= 3");
    const double a = req_double(interval, "interval", "growing_a");
    const double half = a * std::sqrt(std::log(static_cast<double>(N)));
    A = -half;
    B = half;
    interval["A"] = A;
    interval["B"] = B;
  } else {
    A = opt_double(interval, "interval", "A", -1.0);
    B = opt_double(interval, "interval", "B", 1.0);
  }
  if (!(B > A)) config_fail("interval", "needs B > A");

  reject_unknown(basis, "basis", {"kind", "K", "degree", "D", "normalized", "rule"});
  const std::string kind = opt_string(basis, "basis", "kind", "spline");
  if (kind == "spline") {
    std::size_t K;
    if (basis.contains("rule")) {
      json& rule = basis["rule"];
      reject_unknown(rule, "basis.rule", {"regime", "beta", "c"});
      const DimensionRegime regime = dimension_regime_from(
          req_string(rule, "basis.rule", "regime"), "basis.rule.regime");
      K = dimension_rule(regime, N, n, req_double(rule, "basis.rule", "beta"),
                         opt_double(rule, "basis.rule", "c", 1.0));
      basis["K"] = K;
    } else {
      K = req_uint(basis, "basis", "K");
    }
    const auto degree = static_cast<int>(opt_uint(basis, "basis", "degree", 3));
    return BasisSpec::spline(static_cast<int>(K), degree, A, B);
  }
  if (kind == "fourier") {
    const std::size_t D = req_uint(basis, "basis", "D");
    const bool normalized = opt_bool(basis, "basis", "normalized", false);
    return BasisSpec::fourier(static_cast<int>(D), A, B, normalized);
  }
  config_fail("basis.kind", "unknown basis kind '" + kind + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path.string());
  out << text;
  require(bool(out), ErrorCode::config, "write failed: " + path.string());
}

void echo_config(const json& cfg, const fs::path& out_dir) {
  write_text(out_dir / "resolved_config.json", cfg.dump(2) + "\n");
}

fs::path prepare_out(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  if (args.threads > 0) set_default_threads(args.threads);
  return dir;
}

// ---- subcommands ----------------------------------------------------------

int cmd_simulate(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "", {"model", "sample"});
  const fs::path out = prepare_out(args);

  DiffusionModel model = model_from_config(section(cfg, "model", true));
  json& sample_cfg = section(cfg, "sample", true);
  reject_unknown(sample_cfg, "sample",
                 {"N", "n", "substeps", "seed", "keep_fine_grid", "milstein"});
  const std::size_t N = req_uint(sample_cfg, "sample", "N");
  const std::size_t n = req_uint(sample_cfg, "sample", "n");
  const std::size_t substeps = opt_uint(sample_cfg, "sample", "substeps", 16);
  const std::uint64_t seed = resolve_seed(args, sample_cfg, "sample");

  SimulateOptions options;
  options.keep_fine_grid = opt_bool(sample_cfg, "sample", "keep_fine_grid", false);
  options.milstein = opt_bool(sample_cfg, "sample", "milstein", false);
  options.threads = args.threads;

  const PathSample sample = simulate_sample(model, N, n, substeps, seed, options);
  sample.save_binary((out / "sample.bin").string());

  std::vector<double> finals(N);
  double abs_max = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    finals[j] = sample.value(j, n);
    for (std::size_t k = 0; k <= n; ++k) {
      abs_max = std::max(abs_max, std::abs(sample.value(j, k)));
    }
  }
  const MeanSe fin = mean_se(finals);

  json summary;
  summary["model"] = model.name;
  summary["N"] = N;
  summary["n"] = n;
  summary["delta"] = sample.delta;
  summary["substeps"] = substeps;
  summary["seed"] = seed;
  summary["final_mean"] = fin.mean;
  summary["final_se"] = fin.se;
  summary["abs_max"] = abs_max;
  write_text(out / "summary.json", summary.dump(2) + "\n");
  echo_config(cfg, out);

  std::cout << "wrote " << (out / "sample.bin").string() << " (N=" << N
            << ", n=" << n << ")\n";
  return 0;
}

int cmd_estimate(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "",
                 {"model", "sample", "basis", "interval", "constraint",
                  "truncation"});
  const fs::path out = prepare_out(args);

  DiffusionModel model = model_from_config(section(cfg, "model", true));
  json& sample_cfg = section(cfg, "sample", true);

  PathSample sample;
  if (sample_cfg.contains("load")) {
    reject_unknown(sample_cfg, "sample", {"load"});
    sample = PathSample::load_binary(req_string(sample_cfg, "sample", "load"));
  } else {
    reject_unknown(sample_cfg, "sample", {"N", "n", "substeps", "seed"});
    const std::size_t N = req_uint(sample_cfg, "sample", "N");
    const std::size_t n = req_uint(sample_cfg, "sample", "n");
    const std::size_t substeps = opt_uint(sample_cfg, "sample", "substeps", 16);
    const std::uint64_t seed = resolve_seed(args, sample_cfg, "sample");
    SimulateOptions options;
    options.threads = args.threads;
    sample = simulate_sample(model, N, n, substeps, seed, options);
  }

  const BasisSpec spec =
      basis_from_config(section(cfg, "basis", true), section(cfg, "interval", false),
                        sample.N, sample.n);
  const bool constrained =
      opt_bool(section(cfg, "constraint", false), "constraint", "enabled", true);
  const bool truncated =
      opt_bool(section(cfg, "truncation", false), "truncation", "enabled", false);

  const RegressionData data = build_regression(sample);
  const ConstraintBall ball =
      constrained ? ConstraintBall::scaled(spec.dimension(), spec.A, spec.B,
                                           sample.N, sample.n)
                  : ConstraintBall::fixed(1e300);
  Estimate estimate = fit(data, spec, ball);
  if (truncated) estimate = truncate(estimate, sample.N);
  estimate.save_json((out / "estimate.json").string());

  const DiffusionModel shifted = model.shifted_to_origin();
  {
    auto curve = open_output((out / "curve.csv").string());
    curve << "x,estimate,truth\n";
    constexpr std::size_t kPoints = 401;
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double x = spec.A + (spec.B - spec.A) * static_cast<double>(i) /
                                    static_cast<double>(kPoints - 1);
      curve << fmt_double(x) << ',' << fmt_double(evaluate(estimate, x)) << ','
            << fmt_double(shifted.sigma_sq(x)) << '\n';
    }
  }

  json summary;
  summary["model"] = model.name;
  summary["N"] = sample.N;
  summary["n"] = sample.n;
  summary["dimension"] = spec.dimension();
  summary["constrained"] = constrained;
  summary["constraint_active"] = estimate.active;
  summary["lambda"] = estimate.lambda;
  summary["truncated"] = truncated;
  summary["contrast"] = contrast(data, estimate);
  write_text(out / "summary.json", summary.dump(2) + "\n");
  echo_config(cfg, out);

  std::cout << "wrote " << (out / "estimate.json").string() << " (dimension "
            << spec.dimension() << ")\n";
  return 0;
}

int cmd_gram(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  const fs::path out = prepare_out(args);

  if (cfg.contains("sweep")) {
    reject_unknown(cfg, "", {"model", "sweep"});
    DiffusionModel model = model_from_config(section(cfg, "model", true));
    json& sweep = section(cfg, "sweep", true);
    reject_unknown(sweep, "sweep",
                   {"N_list", "mc_paths", "beta", "growth_a", "degree", "dim_c",
                    "substeps", "seed"});
    if (!sweep.contains("N_list") || !sweep["N_list"].is_array()) {
      config_fail("sweep.N_list", "expected an array of integers");
    }
    std::vector<std::size_t> N_list;
    for (const json& v : sweep["N_list"]) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        config_fail("sweep.N_list", "entries must be positive integers");
      }
      N_list.push_back(static_cast<std::size_t>(v.get<std::int64_t>()));
    }
    const std::size_t mc_paths = opt_uint(sweep, "sweep", "mc_paths", 2000);
    const std::uint64_t seed = resolve_seed(args, sweep, "sweep");
    ConditionSweepOptions options;
    options.beta = opt_double(sweep, "sweep", "beta", 8.0);
    options.growth_a = opt_double(sweep, "sweep", "growth_a", 1.0);
    options.degree = static_cast<int>(opt_uint(sweep, "sweep", "degree", 1));
    options.dim_c = opt_double(sweep, "sweep", "dim_c", 1.0);
    options.substeps = opt_uint(sweep, "sweep", "substeps", 16);
    options.threads = args.threads;
    const ConditionTable table =
        gram_condition_sweep(model, N_list, mc_paths, seed, options);
    table.save_csv((out / "condition_table.csv").string());
    echo_config(cfg, out);
    std::cout << "wrote " << (out / "condition_table.csv").string() << " ("
              << table.rows.size() << " rungs)\n";
    return 0;
  }

  if (cfg.contains("monitor")) {
    reject_unknown(cfg, "", {"model", "basis", "interval", "monitor"});
    DiffusionModel model = model_from_config(section(cfg, "model", true));
    json& monitor = section(cfg, "monitor", true);
    reject_unknown(monitor, "monitor",
                   {"samples", "N", "n", "mc_paths", "substeps", "seed"});
    const std::size_t samples = req_uint(monitor, "monitor", "samples");
    const std::size_t N = req_uint(monitor, "monitor", "N");
    const std::size_t n = req_uint(monitor, "monitor", "n");
    const std::size_t mc_paths = opt_uint(monitor, "monitor", "mc_paths", 2000);
    const std::size_t substeps = opt_uint(monitor, "monitor", "substeps", 16);
    const std::uint64_t seed = resolve_seed(args, monitor, "monitor");
    const BasisSpec spec = basis_from_config(section(cfg, "basis", true),
                                             section(cfg, "interval", false), N, n);
    std::vector<PathSample> batch;
    batch.reserve(samples);
    SimulateOptions sim;
    sim.threads = args.threads;
    for (std::size_t s = 0; s < samples; ++s) {
      batch.push_back(simulate_sample(model, N, n, substeps,
                                      mix_key(seed, 1 + s), sim));
    }
    GramOptions options;
    options.substeps = substeps;
    options.threads = args.threads;
    const EventReport report =
        norm_equivalence_monitor(batch, spec, model, mc_paths, seed, options);
    report.save_csv((out / "monitor.csv").string());
    json summary;
    summary["samples"] = samples;
    summary["violations"] = report.violations;
    summary["violation_fraction"] = report.violation_fraction;
    summary["threshold"] = report.threshold;
    summary["rank_deficient"] = report.rank_deficient;
    write_text(out / "summary.json", summary.dump(2) + "\n");
    echo_config(cfg, out);
    std::cout << "wrote " << (out / "monitor.csv").string() << " ("
              << report.violations << "/" << samples << " violations)\n";
    return 0;
  }

  reject_unknown(cfg, "", {"model", "basis", "interval", "gram"});
  DiffusionModel model = model_from_config(section(cfg, "model", true));
  json& gram = section(cfg, "gram", true);
  reject_unknown(gram, "gram", {"n", "mc_paths", "substeps", "seed"});
  const std::size_t n = req_uint(gram, "gram", "n");
  const std::size_t mc_paths = opt_uint(gram, "gram", "mc_paths", 2000);
  const std::uint64_t seed = resolve_seed(args, gram, "gram");
  GramOptions options;
  options.substeps = opt_uint(gram, "gram", "substeps", 16);
  options.threads = args.threads;
  const BasisSpec spec = basis_from_config(section(cfg, "basis", true),
                                           section(cfg, "interval", false),
                                           mc_paths, n);
  const GramReport report = estimate_gram(model, spec, n, mc_paths, seed, options);

  {
    auto psi = open_output((out / "psi.csv").string());
    for (Eigen::Index r = 0; r < report.psi.rows(); ++r) {
      for (Eigen::Index c = 0; c < report.psi.cols(); ++c) {
        psi << (c ? "," : "") << fmt_double(report.psi(r, c));
      }
      psi << '\n';
    }
  }
  json summary;
  summary["dimension"] = spec.dimension();
  summary["mc_paths"] = mc_paths;
  summary["min_eig"] = report.min_eig;
  summary["max_eig"] = report.max_eig;
  summary["rank_deficient"] = report.rank_deficient;
  summary["op_norm_inverse"] = report.op_norm_inverse;
  summary["l_m"] = report.l_m;
  summary["product"] = report.product;
  write_text(out / "gram_report.json", summary.dump(2) + "\n");
  echo_config(cfg, out);
  std::cout << "wrote " << (out / "gram_report.json").string() << " (min eig "
            << fmt_double(report.min_eig) << ")\n";
  return 0;
}

LadderRegime ladder_regime_from(const std::string& name) {
  if (name == "compact_single_path") return LadderRegime::compact_single_path;
  if (name == "compact_repeated") return LadderRegime::compact_repeated;
  if (name == "growing_interval") return LadderRegime::growing_interval;
  if (name == "real_line") return LadderRegime::real_line;
  config_fail("ladder.regime", "unknown regime '" + name + "'");
}

int cmd_rates(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "", {"model", "ladder"});
  const fs::path out = prepare_out(args);

  RateLadder ladder;
  ladder.truth = model_from_config(section(cfg, "model", true));
  json& lcfg = section(cfg, "ladder", true);
  reject_unknown(lcfg, "ladder",
                 {"regime", "rungs", "beta", "replicates", "spline_degree",
                  "dim_c", "growing_a", "A", "B", "substeps", "eval_paths",
                  "use_ball", "fixed_K", "seed"});
  ladder.regime = ladder_regime_from(req_string(lcfg, "ladder", "regime"));
  if (!lcfg.contains("rungs") || !lcfg["rungs"].is_array()) {
    config_fail("ladder.rungs", "expected an array of {N, n}");
  }
  for (json& r : lcfg["rungs"]) {
    reject_unknown(r, "ladder.rungs[]", {"N", "n"});
    RungSpec rung;
    rung.N = req_uint(r, "ladder.rungs[]", "N");
    rung.n = req_uint(r, "ladder.rungs[]", "n");
    ladder.sizes.push_back(rung);
  }
  ladder.beta = opt_double(lcfg, "ladder", "beta", 2.0);
  ladder.replicates = opt_uint(lcfg, "ladder", "replicates", 20);
  ladder.seed = resolve_seed(args, lcfg, "ladder");
  ladder.spline_degree =
      static_cast<int>(opt_uint(lcfg, "ladder", "spline_degree", 3));
  ladder.dim_c = opt_double(lcfg, "ladder", "dim_c", 1.0);
  ladder.growing_a = opt_double(lcfg, "ladder", "growing_a", 1.0);
  ladder.A = opt_double(lcfg, "ladder", "A", -1.0);
  ladder.B = opt_double(lcfg, "ladder", "B", 1.0);
  ladder.substeps = opt_uint(lcfg, "ladder", "substeps", 16);
  ladder.eval_paths = opt_uint(lcfg, "ladder", "eval_paths", 200);
  ladder.use_ball = opt_bool(lcfg, "ladder", "use_ball", true);
  ladder.fixed_K = opt_uint(lcfg, "ladder", "fixed_K", 0);
  ladder.threads = args.threads;

  const LadderResult result = run_ladder(ladder);
  result.save_csv((out / "ladder.csv").string());
  result.save_slope_json((out / "slope.json").string());
  result.save_plotdata((out / "ladder.dat").string());
  echo_config(cfg, out);

  std::cout << "slope " << fmt_double(result.fit.slope) << " +- "
            << fmt_double(result.fit.slope_se) << " (target "
            << fmt_double(result.theoretical_slope) << ")\n";
  return 0;
}

int cmd_lowerbound(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "", {"lowerbound", "kl"});
  const fs::path out = prepare_out(args);

  json& lb = section(cfg, "lowerbound", true);
  reject_unknown(lb, "lowerbound",
                 {"beta", "R", "kappa1", "A", "B", "m", "M_target", "c0", "N",
                  "n", "dilation", "probe_points", "slack", "seed"});
  const double beta = opt_double(lb, "lowerbound", "beta", 2.0);
  const double R = opt_double(lb, "lowerbound", "R", 1.0);
  const double kappa1 = req_double(lb, "lowerbound", "kappa1");
  const double A = opt_double(lb, "lowerbound", "A", -1.0);
  const double B = opt_double(lb, "lowerbound", "B", 1.0);
  const std::size_t m = req_uint(lb, "lowerbound", "m");
  const std::size_t M_target = req_uint(lb, "lowerbound", "M_target");
  const double c0 = opt_double(lb, "lowerbound", "c0", 1.0);
  const std::size_t N = req_uint(lb, "lowerbound", "N");
  const std::size_t n = req_uint(lb, "lowerbound", "n");
  const double dilation = opt_double(lb, "lowerbound", "dilation", 1.0);
  const std::size_t probe_points = opt_uint(lb, "lowerbound", "probe_points", 4000);
  const double slack = opt_double(lb, "lowerbound", "slack", 1.05);
  const std::uint64_t seed = resolve_seed(args, lb, "lowerbound");

  const HypothesisSet set =
      build_hypotheses(beta, R, kappa1, A, B, m, M_target, seed, dilation);
  set.save_json((out / "hypotheses.json").string());

  const SeparationReport separation = pairwise_separation(set, c0, N, n);
  separation.save_csv((out / "separation.csv").string());

  const HolderReport holder = holder_membership(set, probe_points, slack);
  holder.save_csv((out / "holder.csv").string());

  json summary;
  summary["m"] = m;
  summary["M"] = set.M();
  summary["gamma"] = set.Gamma;
  summary["min_distance"] = separation.min_distance;
  summary["two_s"] = separation.two_s;
  summary["separated"] = separation.separated;
  summary["max_rel_gap"] = separation.max_rel_gap;
  summary["holder_order"] = holder.order;
  summary["holder_max_quotient"] = holder.max_quotient;
  summary["holder_bound"] = holder.R * holder.slack;
  summary["holder_within"] = holder.within;

  if (cfg.contains("kl")) {
    json& klcfg = cfg["kl"];
    reject_unknown(klcfg, "kl",
                   {"mc_paths", "bridges", "steps", "first_order", "substeps"});
    KLOptions options;
    options.bridge.bridges = opt_uint(klcfg, "kl", "bridges", 2000);
    options.bridge.steps = opt_uint(klcfg, "kl", "steps", 64);
    options.bridge.first_order = opt_bool(klcfg, "kl", "first_order", false);
    options.substeps = opt_uint(klcfg, "kl", "substeps", 64);
    options.threads = args.threads;
    const std::size_t mc_paths = opt_uint(klcfg, "kl", "mc_paths", 500);
    const KLReport kl = kl_budget(set, N, n, mc_paths, seed, options);
    kl.save_csv((out / "kl.csv").string());
    summary["kl_average"] = kl.average;
    summary["kl_se"] = kl.se;
    summary["kl_budget"] = kl.budget;
    summary["kl_within_budget"] = kl.within_budget;
    summary["tsybakov_bound"] = kl.tsybakov_bound;
    std::cout << "divergence average " << fmt_double(kl.average)
              << " vs budget log(M)/16 = " << fmt_double(kl.budget)
              << (kl.within_budget ? " (within)" : " (exceeded)")
              << ", minimax probability bound "
              << fmt_double(kl.tsybakov_bound) << "\n";
  }

  write_text(out / "lowerbound_summary.json", summary.dump(2) + "\n");
  echo_config(cfg, out);

  std::cout << "hypotheses M=" << set.M() << ", min distance "
            << fmt_double(separation.min_distance) << " vs 2s "
            << fmt_double(separation.two_s)
            << (separation.separated ? " (separated)\n" : " (NOT separated)\n");
  return 0;
}

int cmd_density(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "", {"model", "density"});
  const fs::path out = prepare_out(args);

  DiffusionModel model = model_from_config(section(cfg, "model", true));
  json& dcfg = section(cfg, "density", true);
  reject_unknown(dcfg, "density",
                 {"pairs", "bridges", "steps", "first_order", "seed",
                  "occupation", "exit"});
  BridgeOptions options;
  options.bridges = opt_uint(dcfg, "density", "bridges", 10000);
  options.steps = opt_uint(dcfg, "density", "steps", 64);
  options.first_order = opt_bool(dcfg, "density", "first_order", false);
  const std::uint64_t seed = resolve_seed(args, dcfg, "density");

  const DensityTransforms transforms(model.shifted_to_origin());

  if (dcfg.contains("pairs")) {
    if (!dcfg["pairs"].is_array()) config_fail("density.pairs", "expected an array");
    auto csv = open_output((out / "density.csv").string());
    csv << "s,t,x,y,value,se\n";
    std::size_t index = 0;
    for (json& p : dcfg["pairs"]) {
      reject_unknown(p, "density.pairs[]", {"s", "t", "x", "y"});
      const double s = opt_double(p, "density.pairs[]", "s", 0.0);
      const double t = req_double(p, "density.pairs[]", "t");
      const double x = opt_double(p, "density.pairs[]", "x", 0.0);
      const double y = req_double(p, "density.pairs[]", "y");
      RngStream rng(stream_key(seed, StreamTag::probe, index));
      const DensityValue v = transition_density(transforms, s, t, x, y, options, rng);
      csv << fmt_double(s) << ',' << fmt_double(t) << ',' << fmt_double(x)
          << ',' << fmt_double(y) << ',' << fmt_double(v.value) << ','
          << fmt_double(v.se) << '\n';
      ++index;
    }
    std::cout << "wrote " << (out / "density.csv").string() << " (" << index
              << " points)\n";
  }

  if (dcfg.contains("occupation")) {
    json& ocfg = dcfg["occupation"];
    reject_unknown(ocfg, "density.occupation", {"n", "ys"});
    const std::size_t n = req_uint(ocfg, "density.occupation", "n");
    if (!ocfg.contains("ys") || !ocfg["ys"].is_array()) {
      config_fail("density.occupation.ys", "expected an array of numbers");
    }
    auto csv = open_output((out / "occupation.csv").string());
    csv << "y,value,se\n";
    std::size_t index = 0;
    for (const json& yv : ocfg["ys"]) {
      if (!yv.is_number()) config_fail("density.occupation.ys", "expected numbers");
      const double y = yv.get<double>();
      const DensityValue v =
          occupation_density(transforms, n, y, options, mix_key(seed, 1 + index));
      csv << fmt_double(y) << ',' << fmt_double(v.value) << ','
          << fmt_double(v.se) << '\n';
      ++index;
    }
    std::cout << "wrote " << (out / "occupation.csv").string() << "\n";
  }

  if (dcfg.contains("exit")) {
    json& ecfg = dcfg["exit"];
    reject_unknown(ecfg, "density.exit", {"level", "paths", "n", "substeps"});
    const double level = req_double(ecfg, "density.exit", "level");
    const std::size_t paths = opt_uint(ecfg, "density.exit", "paths", 100000);
    const std::size_t n = opt_uint(ecfg, "density.exit", "n", 100);
    const std::size_t substeps = opt_uint(ecfg, "density.exit", "substeps", 16);
    const ExitProbability exit =
        exit_probability(model, level, paths, n, substeps, mix_key(seed, 0xE));
    json doc;
    doc["level"] = level;
    doc["paths"] = paths;
    doc["value"] = exit.value;
    doc["se"] = exit.se;
    doc["argmax_t"] = exit.argmax_t;
    write_text(out / "exit.json", doc.dump(2) + "\n");
    std::cout << "exit probability " << fmt_double(exit.value) << " +- "
              << fmt_double(exit.se) << "\n";
  }

  echo_config(cfg, out);
  return 0;
}

int cmd_check_assumptions(const CommonArgs& args) {
  json cfg = load_config(args.config_path);
  reject_unknown(cfg, "", {"model", "probe"});
  const fs::path out = prepare_out(args);

  DiffusionModel model = model_from_config(section(cfg, "model", true));
  json& pcfg = section(cfg, "probe", false);
  reject_unknown(pcfg, "probe", {"lo", "hi", "points"});
  ProbeGrid grid;
  grid.lo = opt_double(pcfg, "probe", "lo", -10.0);
  grid.hi = opt_double(pcfg, "probe", "hi", 10.0);
  grid.points = opt_uint(pcfg, "probe", "points", 2001);

  const AssumptionReport report = check_assumptions(model, grid);

  json doc;
  doc["model"] = model.name;
  doc["lipschitz_estimate"] = report.lipschitz_estimate;
  doc["lipschitz_finite"] = report.lipschitz_finite;
  doc["min_sigma"] = report.min_sigma;
  doc["max_sigma"] = report.max_sigma;
  doc["ellipticity_lower_margin"] = report.ellipticity_lower_margin;
  doc["ellipticity_upper_margin"] = report.ellipticity_upper_margin;
  doc["elliptic"] = report.elliptic;
  doc["growth_exponent"] = report.growth_exponent;
  doc["growth_constant"] = report.growth_constant;
  doc["integral_condition_holds"] = report.integral_condition_holds;
  doc["sup_sigma_at_most_one"] = report.sup_sigma_at_most_one;
  json tails = json::array();
  for (const auto& t : report.integral_condition) {
    json row;
    row["a"] = t.a;
    row["s_abs"] = t.s_abs;
    row["holds"] = t.holds;
    tails.push_back(row);
  }
  doc["integral_condition"] = tails;
  write_text(out / "assumptions.json", doc.dump(2) + "\n");
  echo_config(cfg, out);

  std::cout << "elliptic: " << (report.elliptic ? "yes" : "no")
            << ", integral condition: "
            << (report.integral_condition_holds ? "holds" : "fails") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection estimation of squared diffusion coefficients"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* c_simulate = app.add_subcommand("simulate", "simulate a path sample");
  CLI::App* c_estimate = app.add_subcommand("estimate", "fit the projection estimator");
  CLI::App* c_gram = app.add_subcommand("gram", "design-matrix diagnostics");
  CLI::App* c_rates = app.add_subcommand("rates", "rate-of-convergence ladder");
  CLI::App* c_lower = app.add_subcommand("lowerbound", "hypothesis-family reports");
  CLI::App* c_density = app.add_subcommand("density", "transition density probes");
  CLI::App* c_check =
      app.add_subcommand("check-assumptions", "model regularity report");
  for (CLI::App* cmd :
       {c_simulate, c_estimate, c_gram, c_rates, c_lower, c_density, c_check}) {
    add_common(cmd, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_simulate->parsed()) return cmd_simulate(args);
    if (c_estimate->parsed()) return cmd_estimate(args);
    if (c_gram->parsed()) return cmd_gram(args);
    if (c_rates->parsed()) return cmd_rates(args);
    if (c_lower->parsed()) return cmd_lowerbound(args);
    if (c_density->parsed()) return cmd_density(args);
    if (c_check->parsed()) return cmd_check_assumptions(args);
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
