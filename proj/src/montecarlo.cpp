#include "repcal/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace repcal {

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Uncalibrated: return "uncalibrated";
    case EstimatorKind::Ingenuous: return "ingenuous";
    case EstimatorKind::BasicNls: return "basic";
    case EstimatorKind::AlternatingNls: return "alt";
    case EstimatorKind::Precalibrated: return "precal";
  }
  throw ConfigError("unknown estimator kind");
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "uncalibrated") return EstimatorKind::Uncalibrated;
  if (name == "ingenuous") return EstimatorKind::Ingenuous;
  if (name == "basic") return EstimatorKind::BasicNls;
  if (name == "alt") return EstimatorKind::AlternatingNls;
  if (name == "precal") return EstimatorKind::Precalibrated;
  throw ConfigError("unknown estimator '" + name +
                    "' (expected uncalibrated, ingenuous, basic, alt, precal)");
}

void SweepConfig::validate() const {
  if (snr_db_grid.empty()) throw ConfigError("snr_db_grid must be nonempty");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (estimators.empty()) throw ConfigError("estimator list must be nonempty");
  scenario.validate();
  solver.validate();
}

double rmse(const std::vector<Complex>& errors) {
  if (errors.empty()) throw ConfigError("rmse: empty error list");
  double acc = 0.0;
  for (const auto& e : errors) acc += std::norm(e);
  return std::sqrt(acc / static_cast<double>(errors.size()));
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17e", x);
  return buf;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  auto hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

std::string SweepResult::to_csv() const {
  std::ostringstream out;
  out << "snr_db,estimator,rmse,trials,failures,seed\n";
  for (const auto& r : rows) {
    out << fmt_double(r.snr_db) << ',' << r.estimator << ','
        << fmt_double(r.rmse) << ',' << r.trials << ',' << r.failures << ','
        << r.master_seed << '\n';
  }
  return out.str();
}

std::string SweepResult::to_plot_table() const {
  // Column order: first appearance order of estimators.
  std::vector<std::string> names;
  for (const auto& r : rows) {
    if (std::find(names.begin(), names.end(), r.estimator) == names.end()) {
      names.push_back(r.estimator);
    }
  }
  std::map<double, std::map<std::string, double>> table;
  for (const auto& r : rows) table[r.snr_db][r.estimator] = r.rmse;

  std::ostringstream out;
  out << "# snr_db";
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
  for (const auto& [snr, cols] : table) {
    out << fmt_double(snr);
    for (const auto& n : names) {
      auto it = cols.find(n);
      out << ' ' << fmt_double(it == cols.end() ? 0.0 : it->second);
    }
    out << '\n';
  }
  return out.str();
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;

  for (std::size_t si = 0; si < cfg.snr_db_grid.size(); ++si) {
    double snr_db = cfg.snr_db_grid[si];
    double sigma = std::pow(10.0, -snr_db / 20.0);

    std::map<EstimatorKind, std::vector<Complex>> errors;
    std::map<EstimatorKind, int> failures;
    for (auto k : cfg.estimators) {
      errors[k] = {};
      failures[k] = 0;
    }

    for (int trial = 0; trial < cfg.trials; ++trial) {
      std::uint64_t seed = derive_seed(cfg.master_seed, si, trial);
      Scenario s = generate_scenario(cfg.scenario, derive_seed(seed, 0));
      Rng noise_rng(derive_seed(seed, 1));
      MeasurementSet ms = take_calibration_measurements(s, sigma, noise_rng);
      PreprocessedSet pre = preprocess(ms);
      Complex gamma_true = s.gamma();

      Estimate basic;
      bool have_basic = false;
      for (auto kind : cfg.estimators) {
        try {
          Complex gamma_hat;
          switch (kind) {
            case EstimatorKind::Uncalibrated: {
              Rng r(derive_seed(seed, 2));
              gamma_hat = r.unit_phasor();
              break;
            }
            case EstimatorKind::Ingenuous:
              gamma_hat = ingenuous_estimate(ms);
              break;
            case EstimatorKind::BasicNls:
              if (!have_basic) {
                basic = basic_nls(pre, cfg.solver);
                have_basic = true;
              }
              gamma_hat = basic.gamma_hat;
              break;
            case EstimatorKind::AlternatingNls: {
              if (!have_basic) {
                basic = basic_nls(pre, cfg.solver);
                have_basic = true;
              }
              gamma_hat = alternating_nls(pre, basic, cfg.solver).gamma_hat;
              break;
            }
            case EstimatorKind::Precalibrated:
              gamma_hat = precalibrated_estimate(pre, s.a_param(), s.b_param(),
                                                 cfg.solver)
                              .gamma_hat;
              break;
          }
          errors[kind].push_back(gamma_hat - gamma_true);
        } catch (const DegenerateInputError&) {
          ++failures[kind];
        }
      }
    }

    for (auto kind : cfg.estimators) {
      SweepRow row;
      row.snr_db = snr_db;
      row.estimator = estimator_name(kind);
      row.trials = cfg.trials;
      row.failures = failures[kind];
      row.master_seed = cfg.master_seed;
      const auto& errs = errors[kind];
      row.rmse = errs.empty() ? 0.0 : rmse(errs);
      std::vector<double> abs_errs;
      abs_errs.reserve(errs.size());
      for (const auto& e : errs) abs_errs.push_back(std::abs(e));
      row.abs_err_p50 = quantile(abs_errs, 0.5);
      row.abs_err_p99 = quantile(abs_errs, 0.99);
      row.valid =
          failures[kind] * 10 <= cfg.trials;  // >10% failures invalidates
      if (!row.valid) result.valid = false;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace repcal
