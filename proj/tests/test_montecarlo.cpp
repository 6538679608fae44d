#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "repcal/montecarlo.hpp"

using namespace repcal;

TEST_CASE("rmse") {
  CHECK(rmse({{0.0, 0.0}, {0.0, 0.0}}) == 0.0);
  CHECK(rmse({{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rmse({}), ConfigError);
}

TEST_CASE("rmse of random unit-modulus pairs approaches sqrt(2)") {
  Rng rng(77);
  std::vector<Complex> errors;
  errors.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    errors.push_back(rng.unit_phasor() - rng.unit_phasor());
  }
  CHECK(rmse(errors) == doctest::Approx(std::sqrt(2.0)).epsilon(0.015));
}

TEST_CASE("estimator name round trip") {
  for (auto k : {EstimatorKind::Uncalibrated, EstimatorKind::Ingenuous,
                 EstimatorKind::BasicNls, EstimatorKind::AlternatingNls,
                 EstimatorKind::Precalibrated}) {
    CHECK(estimator_from_name(estimator_name(k)) == k);
  }
  CHECK_THROWS_AS(estimator_from_name("nope"), ConfigError);
}

TEST_CASE("run_sweep is deterministic and fair") {
  SweepConfig cfg;
  cfg.snr_db_grid = {10.0};
  cfg.trials = 20;
  cfg.master_seed = 5;
  SweepResult a = run_sweep(cfg);
  SweepResult b = run_sweep(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].rmse == b.rows[i].rmse);
    CHECK(a.rows[i].estimator == b.rows[i].estimator);
  }
  CHECK(a.rows.size() == cfg.estimators.size() * cfg.snr_db_grid.size());
}

TEST_CASE("noise-free grid point gives near-zero NLS rmse") {
  SweepConfig cfg;
  // 300 dB SNR: sigma ~ 1e-15, effectively noise-free.
  cfg.snr_db_grid = {300.0};
  cfg.trials = 25;
  cfg.estimators = {EstimatorKind::BasicNls, EstimatorKind::AlternatingNls};
  SweepResult res = run_sweep(cfg);
  for (const auto& row : res.rows) {
    CHECK(row.rmse < 1e-6);
    CHECK(row.failures == 0);
  }
}

TEST_CASE("adding grid points does not perturb existing trials") {
  SweepConfig one;
  one.snr_db_grid = {10.0};
  one.trials = 10;
  one.estimators = {EstimatorKind::BasicNls};
  SweepConfig two = one;
  two.snr_db_grid = {10.0, 20.0};
  double r1 = run_sweep(one).rows[0].rmse;
  double r2 = run_sweep(two).rows[0].rmse;
  CHECK(r1 == r2);
}

TEST_CASE("csv output shape") {
  SweepConfig cfg;
  cfg.snr_db_grid = {10.0, 20.0};
  cfg.trials = 5;
  cfg.estimators = {EstimatorKind::Uncalibrated, EstimatorKind::BasicNls};
  SweepResult res = run_sweep(cfg);
  std::string csv = res.to_csv();
  CHECK(csv.rfind("snr_db,estimator,rmse,trials,failures,seed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows

  std::string table = res.to_plot_table();
  CHECK(table.rfind("# snr_db uncalibrated basic\n", 0) == 0);
}

TEST_CASE("invalid configs rejected") {
  SweepConfig cfg;
  cfg.snr_db_grid = {};
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
  cfg.snr_db_grid = {10.0};
  cfg.trials = 0;
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
}

TEST_CASE("rmse is statistically non-increasing in SNR") {
  SweepConfig cfg;
  cfg.snr_db_grid = {0.0, 10.0, 20.0, 30.0};
  cfg.trials = 100;
  cfg.estimators = {EstimatorKind::BasicNls};
  SweepResult res = run_sweep(cfg);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].rmse <= res.rows[i - 1].rmse * 1.1);
  }
}
