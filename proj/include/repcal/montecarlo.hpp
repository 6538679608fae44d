#pragma once

#include <string>
#include <vector>

#include "repcal/estimators.hpp"
#include "repcal/model.hpp"

namespace repcal {

enum class EstimatorKind {
  Uncalibrated,  // random unit-modulus gamma-hat, the Fig.-2 reference
  Ingenuous,
  BasicNls,
  AlternatingNls,
  Precalibrated,
};

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

struct SweepConfig {
  std::vector<double> snr_db_grid;
  int trials = 500;
  ScenarioConfig scenario;
  std::vector<EstimatorKind> estimators = {
      EstimatorKind::Uncalibrated, EstimatorKind::BasicNls,
      EstimatorKind::AlternatingNls};
  std::uint64_t master_seed = 1;
  SolverOptions solver;

  void validate() const;
};

struct SweepRow {
  double snr_db = 0.0;
  std::string estimator;
  double rmse = 0.0;
  int trials = 0;
  int failures = 0;
  std::uint64_t master_seed = 0;
  double abs_err_p50 = 0.0;
  double abs_err_p99 = 0.0;
  bool valid = true;  // false when >10% of trials failed
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool valid = true;

  std::string to_csv() const;
  /// Whitespace-delimited table: snr column then one rmse column per
  /// estimator, for direct plotting.
  std::string to_plot_table() const;
};

/// sqrt(mean |gamma_hat - gamma|^2).
double rmse(const std::vector<Complex>& errors);

/// Runs the Monte-Carlo RMSE-vs-SNR experiment. All estimators at a given
/// trial consume the same measurement set; sigma = 10^(-snr_db/20).
SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace repcal
