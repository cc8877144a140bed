// End-to-end tests of the sdeproj command line: config parsing, output
// artifacts, determinism, and the exit-code contract (0 ok, 2 config,
// 3 numerical failure).

#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

using json = nlohmann::json;
using testsupport::TempDir;
using testsupport::run_command;
using testsupport::slurp;
using testsupport::spit;

namespace {

const std::string kCli = SDEPROJ_CLI_PATH;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& tag) {
  const std::string out_file = dir.str("stdout_" + tag + ".txt");
  const std::string err_file = dir.str("stderr_" + tag + ".txt");
  CliResult r;
  r.exit_code =
      run_command(kCli + " " + args + " >" + out_file + " 2>" + err_file);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

json read_json(const std::string& path) { return json::parse(slurp(path)); }

std::string simulate_config() {
  return R"({
    "model": {"name": "constant", "sigma": 1.2, "b": 0.3},
    "sample": {"N": 4, "n": 8, "substeps": 4, "seed": 3}
  })";
}

std::string estimate_config(const std::string& sample_block) {
  return R"({
    "model": {"name": "constant", "sigma": 1.2},
    "sample": )" +
         sample_block + R"(,
    "basis": {"kind": "spline", "K": 3, "degree": 2},
    "interval": {"A": -1.0, "B": 1.0}
  })";
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("cli simulate writes sample, summary, and resolved config") {
  TempDir dir("cli_sim");
  spit(dir.str("cfg.json"), simulate_config());
  const auto r = run_cli(
      dir, "simulate --config " + dir.str("cfg.json") + " --out " + dir.str("a"),
      "a");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("sample.bin") != std::string::npos);
  CHECK(r.out.find("N=4") != std::string::npos);

  CHECK(std::filesystem::exists(dir.str("a/sample.bin")));
  const json summary = read_json(dir.str("a/summary.json"));
  CHECK(summary["N"] == 4);
  CHECK(summary["n"] == 8);
  CHECK(summary["seed"] == 3);
  CHECK(summary["delta"].get<double>() == doctest::Approx(0.125));

  // Optional keys come back filled with their defaults.
  const json resolved = read_json(dir.str("a/resolved_config.json"));
  CHECK(resolved["sample"]["keep_fine_grid"] == false);
  CHECK(resolved["sample"]["milstein"] == false);
  CHECK(resolved["sample"]["seed"] == 3);
  CHECK(resolved["model"]["b"].get<double>() == doctest::Approx(0.3));
}

TEST_CASE("cli simulate reruns are byte-identical") {
  TempDir dir("cli_repeat");
  spit(dir.str("cfg.json"), simulate_config());
  const std::string base = "simulate --config " + dir.str("cfg.json");
  CHECK(run_cli(dir, base + " --out " + dir.str("a"), "a").exit_code == 0);
  CHECK(run_cli(dir, base + " --out " + dir.str("b"), "b").exit_code == 0);
  CHECK(slurp(dir.str("a/sample.bin")) == slurp(dir.str("b/sample.bin")));
  CHECK(slurp(dir.str("a/summary.json")) == slurp(dir.str("b/summary.json")));
  CHECK(slurp(dir.str("a/resolved_config.json")) ==
        slurp(dir.str("b/resolved_config.json")));
}

TEST_CASE("cli --seed overrides the config seed and changes the draw") {
  TempDir dir("cli_seed");
  spit(dir.str("cfg.json"), simulate_config());
  const std::string base = "simulate --config " + dir.str("cfg.json");
  CHECK(run_cli(dir, base + " --out " + dir.str("a"), "a").exit_code == 0);
  CHECK(run_cli(dir, base + " --seed 99 --out " + dir.str("b"), "b").exit_code ==
        0);
  CHECK(read_json(dir.str("b/resolved_config.json"))["sample"]["seed"] == 99);
  CHECK(slurp(dir.str("a/sample.bin")) != slurp(dir.str("b/sample.bin")));
}

TEST_CASE("cli rejects unknown keys with their JSON path") {
  TempDir dir("cli_unknown");
  spit(dir.str("cfg.json"), R"({
    "model": {"name": "constant_unit"},
    "sample": {"N": 2, "n": 4, "bogus": 1}
  })");
  const auto r = run_cli(
      dir, "simulate --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("sample.bogus") != std::string::npos);
  CHECK(r.err.find("unknown key") != std::string::npos);
}

TEST_CASE("cli rejects malformed JSON and missing sections") {
  TempDir dir("cli_bad");
  spit(dir.str("broken.json"), "{\"model\": {\"name\": \"constant_unit\"");
  auto r = run_cli(dir,
                   "simulate --config " + dir.str("broken.json") + " --out " +
                       dir.str("o1"),
                   "broken");
  CHECK(r.exit_code == 2);

  spit(dir.str("nomodel.json"), R"({"sample": {"N": 2, "n": 4}})");
  r = run_cli(dir,
              "simulate --config " + dir.str("nomodel.json") + " --out " +
                  dir.str("o2"),
              "nomodel");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("model") != std::string::npos);

  // Missing --config is a command-line error, also exit 2.
  r = run_cli(dir, "simulate", "noconfig");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli estimate produces curve, estimate, and summary") {
  TempDir dir("cli_est");
  spit(dir.str("cfg.json"),
       estimate_config(R"({"N": 8, "n": 32, "substeps": 4, "seed": 11})"));
  const auto r = run_cli(
      dir, "estimate --config " + dir.str("cfg.json") + " --out " + dir.str("a"),
      "a");
  CHECK(r.exit_code == 0);

  const json summary = read_json(dir.str("a/summary.json"));
  CHECK(summary["dimension"] == 5);  // K=3 splines of degree 2
  CHECK(summary["N"] == 8);
  CHECK(summary["n"] == 32);
  CHECK(std::isfinite(summary["contrast"].get<double>()));

  const std::string curve = slurp(dir.str("a/curve.csv"));
  CHECK(curve.rfind("x,estimate,truth", 0) == 0);
  CHECK(count_lines(curve) == 402);  // header + 401 grid points

  const json est = read_json(dir.str("a/estimate.json"));
  CHECK(est["coeffs"].size() == 5);
}

TEST_CASE("cli estimate from a saved sample matches the inline pipeline") {
  TempDir dir("cli_pipe");
  spit(dir.str("sim.json"), R"({
    "model": {"name": "constant", "sigma": 1.2},
    "sample": {"N": 8, "n": 32, "substeps": 4, "seed": 11}
  })");
  CHECK(run_cli(dir,
                "simulate --config " + dir.str("sim.json") + " --out " +
                    dir.str("sim"),
                "sim")
            .exit_code == 0);

  spit(dir.str("inline.json"),
       estimate_config(R"({"N": 8, "n": 32, "substeps": 4, "seed": 11})"));
  spit(dir.str("load.json"),
       estimate_config("{\"load\": \"" + dir.str("sim/sample.bin") + "\"}"));

  CHECK(run_cli(dir,
                "estimate --config " + dir.str("inline.json") + " --out " +
                    dir.str("a"),
                "a")
            .exit_code == 0);
  CHECK(run_cli(dir,
                "estimate --config " + dir.str("load.json") + " --out " +
                    dir.str("b"),
                "b")
            .exit_code == 0);

  CHECK(slurp(dir.str("a/estimate.json")) == slurp(dir.str("b/estimate.json")));
  CHECK(slurp(dir.str("a/curve.csv")) == slurp(dir.str("b/curve.csv")));
}

TEST_CASE("cli estimate reports a singular design with exit code 3") {
  TempDir dir("cli_singular");
  // One path with 8 observations cannot identify 40 spline coefficients, and
  // the default coefficient ball is far too large to regularize the fit.
  spit(dir.str("cfg.json"), R"({
    "model": {"name": "constant", "sigma": 1.2},
    "sample": {"N": 1, "n": 8, "substeps": 4, "seed": 2},
    "basis": {"kind": "spline", "K": 37, "degree": 3},
    "interval": {"A": -1.0, "B": 1.0}
  })");
  const auto r = run_cli(
      dir, "estimate --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("singular_design") != std::string::npos);
}

TEST_CASE("cli simulate reports divergence with exit code 3") {
  TempDir dir("cli_diverge");
  spit(dir.str("cfg.json"), R"json({
    "model": {
      "name": "custom",
      "b": "1e155*(1+x^2)", "b_prime": "2e155*x",
      "sigma": "1", "sigma_prime": "0", "sigma_double_prime": "0",
      "kappa0": 1.0, "kappa1": 1.0
    },
    "sample": {"N": 1, "n": 8, "substeps": 2, "seed": 1}
  })json");
  const auto r = run_cli(
      dir, "simulate --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("simulation_diverged") != std::string::npos);
}

TEST_CASE("cli outputs do not depend on the worker count") {
  TempDir dir("cli_threads");
  spit(dir.str("cfg.json"),
       estimate_config(R"({"N": 8, "n": 32, "substeps": 4, "seed": 11})"));
  const std::string base = "estimate --config " + dir.str("cfg.json");
  CHECK(run_cli(dir, base + " --threads 1 --out " + dir.str("t1"), "t1")
            .exit_code == 0);
  CHECK(run_cli(dir, base + " --threads 8 --out " + dir.str("t8"), "t8")
            .exit_code == 0);
  CHECK(slurp(dir.str("t1/estimate.json")) == slurp(dir.str("t8/estimate.json")));
  CHECK(slurp(dir.str("t1/curve.csv")) == slurp(dir.str("t8/curve.csv")));
  // --threads is an execution knob, not an experiment parameter: the resolved
  // config must stay byte-identical so archived runs remain comparable.
  CHECK(slurp(dir.str("t1/resolved_config.json")) ==
        slurp(dir.str("t8/resolved_config.json")));
}

TEST_CASE("cli check-assumptions reports the example model as regular") {
  TempDir dir("cli_check");
  spit(dir.str("cfg.json"), R"({"model": {"name": "example"}})");
  const auto r = run_cli(dir,
                         "check-assumptions --config " + dir.str("cfg.json") +
                             " --out " + dir.str("o"),
                         "x");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("elliptic: yes") != std::string::npos);
  const json doc = read_json(dir.str("o/assumptions.json"));
  CHECK(doc["elliptic"] == true);
  CHECK(doc["integral_condition_holds"] == true);
  CHECK(doc["lipschitz_finite"] == true);
  CHECK(doc["integral_condition"].size() >= 1);
}

TEST_CASE("cli density runs pairs, occupation, and exit probes") {
  TempDir dir("cli_density");
  spit(dir.str("cfg.json"), R"({
    "model": {"name": "constant_unit"},
    "density": {
      "pairs": [{"t": 0.5, "y": 0.0}, {"t": 1.0, "y": 1.0}],
      "bridges": 100, "steps": 8, "seed": 7,
      "occupation": {"n": 4, "ys": [0.0, 0.5]},
      "exit": {"level": 1.0, "paths": 200, "n": 10, "substeps": 2}
    }
  })");
  const auto r = run_cli(
      dir, "density --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 0);

  const std::string density = slurp(dir.str("o/density.csv"));
  CHECK(density.rfind("s,t,x,y,value,se", 0) == 0);
  CHECK(count_lines(density) == 3);
  const std::string occupation = slurp(dir.str("o/occupation.csv"));
  CHECK(occupation.rfind("y,value,se", 0) == 0);
  CHECK(count_lines(occupation) == 3);
  const json exit_doc = read_json(dir.str("o/exit.json"));
  CHECK(exit_doc["level"].get<double>() == doctest::Approx(1.0));
  CHECK(exit_doc["value"].get<double>() > 0.0);
  CHECK(exit_doc["value"].get<double>() < 1.0);
}

TEST_CASE("cli rates runs a minimal ladder end to end") {
  TempDir dir("cli_rates");
  // mean-reverting model so a single path keeps visiting all of [A, B];
  // a transient model leaves outer cells empty in a constant fraction of
  // replicates and the ladder then has no reason to decay
  spit(dir.str("cfg.json"), R"({
    "model": {"name": "custom", "b": "-4*x", "b_prime": "-4", "sigma": "2",
              "sigma_prime": "0", "sigma_double_prime": "0",
              "kappa0": 2.0, "kappa1": 2.0, "x0": 0.0},
    "ladder": {
      "regime": "compact_single_path",
      "rungs": [{"N": 1, "n": 64}, {"N": 1, "n": 128},
                {"N": 1, "n": 256}, {"N": 1, "n": 512}],
      "replicates": 20, "spline_degree": 1, "fixed_K": 2,
      "A": -0.8, "B": 0.8,
      "eval_paths": 100, "substeps": 2, "seed": 5
    }
  })");
  const auto r = run_cli(
      dir, "rates --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("slope") != std::string::npos);
  CHECK(r.out.find("target") != std::string::npos);

  const std::string csv = slurp(dir.str("o/ladder.csv"));
  CHECK(csv.rfind("rung,N,n,m,A_N,risk,se", 0) == 0);
  CHECK(count_lines(csv) == 5);
  const json slope = read_json(dir.str("o/slope.json"));
  CHECK(slope["regime"] == "compact_single_path");
  CHECK(slope["coupling"] == "N=1");
  CHECK(slope["rungs"] == 4);
  CHECK(slope["slope"].get<double>() < 0.0);
  CHECK(slurp(dir.str("o/ladder.dat")).find("log_size") != std::string::npos);
}

TEST_CASE("cli lowerbound emits hypothesis and separation reports") {
  TempDir dir("cli_lower");
  spit(dir.str("cfg.json"), R"({
    "lowerbound": {
      "beta": 2.0, "R": 1.0, "kappa1": 1.02, "m": 16, "M_target": 4,
      "c0": 0.05, "N": 4, "n": 16, "seed": 11
    }
  })");
  const auto r = run_cli(
      dir,
      "lowerbound --config " + dir.str("cfg.json") + " --out " + dir.str("o"),
      "x");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("hypotheses M=") != std::string::npos);

  const json summary = read_json(dir.str("o/lowerbound_summary.json"));
  CHECK(summary["M"].get<std::size_t>() >= 4);
  CHECK(summary["holder_within"] == true);
  CHECK(summary["min_distance"].get<double>() > 0.0);
  const json hyp = read_json(dir.str("o/hypotheses.json"));
  CHECK(hyp["words"].size() == summary["M"].get<std::size_t>() + 1);
  CHECK(slurp(dir.str("o/separation.csv"))
            .rfind("j,l,hamming,quadrature,analytic", 0) == 0);
}
