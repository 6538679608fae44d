#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "repcal/json_io.hpp"

namespace {

using nlohmann::json;
using namespace repcal;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

void write_json(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

int cmd_simulate(const std::string& config_path, const std::string& out_prefix,
                 std::optional<std::uint64_t> seed_override) {
  json cfg = config_path.empty() ? json::object() : load_json(config_path);
  ScenarioConfig sc = scenario_config_from_json(cfg);
  double noise_std = cfg.value("noise_std", 0.0);
  if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
  std::uint64_t seed = seed_override.value_or(cfg.value("seed", 1ULL));

  Scenario s = generate_scenario(sc, seed);
  Rng rng(derive_seed(seed, 1));
  MeasurementSet ms = take_calibration_measurements(s, noise_std, rng);

  write_json(out_prefix + "scenario.json", scenario_to_json(s));
  write_json(out_prefix + "measurements.json", measurement_set_to_json(ms));

  Complex gamma = s.gamma();
  std::cout << "wrote " << out_prefix << "scenario.json and " << out_prefix
            << "measurements.json\n";
  std::cout << "true gamma = " << gamma.real() << (gamma.imag() < 0 ? " - " : " + ")
            << std::abs(gamma.imag()) << "i, |gamma| = " << std::abs(gamma)
            << "\n";
  std::cout << "RESULT gamma_true " << gamma.real() << " " << gamma.imag()
            << "\n";
  return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_path,
                  const std::string& estimator,
                  const std::string& scenario_path, bool verbose) {
  MeasurementSet ms = measurement_set_from_json(load_json(config_path));
  PreprocessedSet pre = preprocess(ms);
  SolverOptions opts;

  std::optional<Scenario> truth;
  if (!scenario_path.empty()) {
    truth = scenario_from_json(load_json(scenario_path));
  }

  Complex gamma_hat;
  std::optional<Estimate> est;
  if (estimator == "ingenuous") {
    gamma_hat = ingenuous_estimate(ms);
  } else if (estimator == "basic") {
    est = basic_nls(pre, opts);
  } else if (estimator == "alt") {
    Estimate init = basic_nls(pre, opts);
    est = alternating_nls(pre, init, opts);
  } else if (estimator == "precal") {
    if (!truth) {
      throw ConfigError("estimator 'precal' requires --scenario (known A, B)");
    }
    est = precalibrated_estimate(pre, truth->a_param(), truth->b_param(), opts);
  } else {
    throw ConfigError("unknown estimator '" + estimator +
                      "' (expected ingenuous, basic, alt, precal)");
  }
  if (est) gamma_hat = est->gamma_hat;

  if (!out_path.empty()) {
    if (est) {
      write_json(out_path, estimate_to_json(*est, verbose));
    } else {
      write_json(out_path, json{{"gamma_hat", complex_to_json(gamma_hat)},
                                {"estimator", estimator}});
    }
  }

  std::cout << "RESULT gamma_hat " << gamma_hat.real() << " "
            << gamma_hat.imag() << "\n";
  if (truth) {
    Complex gamma = truth->gamma();
    std::cout << "RESULT gamma_error " << std::abs(gamma_hat - gamma) << "\n";
    std::cout << "RESULT calibration_residual "
              << calibration_residual(*truth, gamma_hat) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& plot_path,
              std::optional<std::uint64_t> seed_override) {
  SweepConfig cfg = sweep_config_from_json(load_json(config_path));
  if (seed_override) cfg.master_seed = *seed_override;

  SweepResult res = run_sweep(cfg);
  if (!out_path.empty()) write_file(out_path, res.to_csv());
  if (!plot_path.empty()) write_file(plot_path, res.to_plot_table());

  for (const auto& r : res.rows) {
    std::cout << "RESULT rmse " << r.snr_db << " " << r.estimator << " "
              << r.rmse << "\n";
  }
  if (!res.valid) {
    std::cerr << "warning: >10% estimator failures at some grid point; run "
                 "marked invalid\n";
  }
  return 0;
}

int cmd_multi(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed_override) {
  json cfg = config_path.empty() ? json::object() : load_json(config_path);
  ScenarioConfig sc = scenario_config_from_json(cfg);
  int n = cfg.value("n_repeaters", 4);
  double noise_std = cfg.value("noise_std", 0.0);
  if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
  std::uint64_t seed = seed_override.value_or(cfg.value("seed", 1ULL));
  SolverOptions opts;
  if (cfg.contains("solver")) {
    opts = solver_options_from_json(cfg.at("solver"));
  }

  hadamard_pattern(n);  // validates the order up front
  MultiScenario msc = generate_multi_scenario(sc, n, seed);
  Rng rng(derive_seed(seed, 1));
  std::vector<RoundMeasurement> rounds = run_multi_protocol(msc, noise_std, rng);
  MultiCalibrationResult res = multi_calibrate(rounds, opts);

  json pat = json::array();
  PatternMatrix p = hadamard_pattern(n);
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(p.entries(i, j));
    pat.push_back(row);
  }
  json transcript{{"n_repeaters", n},
                  {"pattern", pat},
                  {"rounds", rounds_to_json(rounds)},
                  {"result", multi_result_to_json(res)}};
  if (!out_path.empty()) write_json(out_path, transcript);

  for (int i = 0; i < n; ++i) {
    Complex g_hat = res.gamma_hats[i];
    Complex g_true = msc.gamma(i);
    std::cout << "RESULT gamma_hat_" << i + 1 << " " << g_hat.real() << " "
              << g_hat.imag() << "\n";
    std::cout << "RESULT gamma_error_" << i + 1 << " "
              << std::abs(g_hat - g_true) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(17);
  CLI::App app{
      "Repeater reciprocity calibration: simulation, gain-ratio estimation, "
      "Monte-Carlo sweeps, and the multi-repeater protocol"};
  app.require_subcommand(1);

  std::string config_path, out_path, plot_path, estimator = "basic";
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--seed", seed, "Seed override");
  app.add_flag("--verbose", verbose, "Verbose output (objective traces)");

  auto* sim = app.add_subcommand(
      "simulate", "Generate a scenario and its calibration measurements");
  sim->add_option("--config", config_path, "Scenario config JSON");
  sim->add_option("--out", out_path, "Output path prefix")->required();

  auto* cal = app.add_subcommand(
      "calibrate", "Estimate gamma from a measurement-set JSON");
  cal->add_option("--config", config_path, "Measurement-set JSON")->required();
  cal->add_option("--out", out_path, "Estimate JSON output path");
  cal->add_option("--estimator", estimator,
                  "ingenuous | basic | alt | precal");
  cal->add_option("--scenario", scenario_path,
                  "Ground-truth scenario JSON (enables error reporting)");

  auto* swp = app.add_subcommand("sweep", "Run an RMSE-vs-SNR Monte-Carlo sweep");
  swp->add_option("--config", config_path, "Sweep config JSON")->required();
  swp->add_option("--out", out_path, "CSV output path");
  swp->add_option("--plot-out", plot_path, "Plot-ready table output path");

  auto* mlt = app.add_subcommand(
      "multi", "Run the Hadamard multi-repeater calibration protocol");
  mlt->add_option("--config", config_path, "Multi-repeater config JSON");
  mlt->add_option("--out", out_path, "Transcript JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path, seed);
    if (cal->parsed()) {
      return cmd_calibrate(config_path, out_path, estimator, scenario_path,
                           verbose);
    }
    if (swp->parsed()) return cmd_sweep(config_path, out_path, plot_path, seed);
    if (mlt->parsed()) return cmd_multi(config_path, out_path, seed);
  } catch (const repcal::DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const repcal::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
