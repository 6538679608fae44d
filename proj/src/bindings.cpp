#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repcal/estimators.hpp"
#include "repcal/model.hpp"
#include "repcal/montecarlo.hpp"
#include "repcal/multi.hpp"

namespace py = pybind11;
using namespace repcal;

PYBIND11_MODULE(_repcal, m) {
  m.doc() = "Dual-antenna repeater reciprocity calibration";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError",
                                               PyExc_ArithmeticError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("m_a", &ScenarioConfig::m_a)
      .def_readwrite("m_b", &ScenarioConfig::m_b)
      .def_readwrite("alpha_gain_db", &ScenarioConfig::alpha_gain_db)
      .def_readwrite("beta_gain_db", &ScenarioConfig::beta_gain_db);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("m_a", &Scenario::m_a)
      .def_readonly("m_b", &Scenario::m_b)
      .def_readonly("g_mat", &Scenario::g_mat)
      .def_readonly("h_vec", &Scenario::h_vec)
      .def_readonly("g_vec", &Scenario::g_vec)
      .def_readonly("alpha", &Scenario::alpha)
      .def_readonly("beta", &Scenario::beta)
      .def_readonly("r_a", &Scenario::r_a)
      .def_readonly("t_a", &Scenario::t_a)
      .def_readonly("r_b", &Scenario::r_b)
      .def_readonly("t_b", &Scenario::t_b)
      .def("gamma", &Scenario::gamma)
      .def("a_param", &Scenario::a_param)
      .def("b_param", &Scenario::b_param);

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def_readonly("x_ab0", &MeasurementSet::x_ab0)
      .def_readonly("x_ab1", &MeasurementSet::x_ab1)
      .def_readonly("x_ba0", &MeasurementSet::x_ba0)
      .def_readonly("x_ba1", &MeasurementSet::x_ba1)
      .def_readonly("noise_std", &MeasurementSet::noise_std);

  py::class_<PreprocessedSet>(m, "PreprocessedSet")
      .def_readonly("r1", &PreprocessedSet::r1)
      .def_readonly("r2", &PreprocessedSet::r2)
      .def_readonly("r3", &PreprocessedSet::r3)
      .def_readonly("r4", &PreprocessedSet::r4);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("ab_iters", &SolverOptions::ab_iters)
      .def_readwrite("ab_tol", &SolverOptions::ab_tol)
      .def_readwrite("outer_iters", &SolverOptions::outer_iters)
      .def_readwrite("outer_tol", &SolverOptions::outer_tol);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("h_hat", &Estimate::h_hat)
      .def_readonly("a_hat", &Estimate::a_hat)
      .def_readonly("b_hat", &Estimate::b_hat)
      .def_readonly("gamma_hat", &Estimate::gamma_hat)
      .def_readonly("objective", &Estimate::objective)
      .def_readonly("iterations", &Estimate::iterations)
      .def_readonly("converged", &Estimate::converged)
      .def_readonly("terminated_on_increase", &Estimate::terminated_on_increase)
      .def_readonly("objective_trace", &Estimate::objective_trace)
      .def("z_hat", &Estimate::z_hat);

  m.def("generate_scenario", &generate_scenario, py::arg("config"),
        py::arg("seed"));
  m.def(
      "take_calibration_measurements",
      [](const Scenario& s, double noise_std, std::uint64_t seed) {
        Rng rng(seed);
        return take_calibration_measurements(s, noise_std, rng);
      },
      py::arg("scenario"), py::arg("noise_std"), py::arg("seed"));
  m.def("preprocess", &preprocess, py::arg("measurements"));
  m.def("calibration_residual", &calibration_residual, py::arg("scenario"),
        py::arg("gamma_hat"));

  m.def("rank_one_approx",
        [](const CMat& mat) { return rank_one_approx(mat).matrix(); },
        py::arg("m"));
  m.def("ingenuous_estimate", &ingenuous_estimate, py::arg("measurements"));
  m.def("nls_objective", &nls_objective, py::arg("h"), py::arg("z"),
        py::arg("a_diag"), py::arg("b_diag"), py::arg("gamma"), py::arg("p"));
  m.def(
      "basic_nls",
      [](const PreprocessedSet& p, const SolverOptions& opts) {
        return basic_nls(p, opts);
      },
      py::arg("p"), py::arg("opts") = SolverOptions{});
  m.def(
      "alternating_nls",
      [](const PreprocessedSet& p, const Estimate& init,
         const SolverOptions& opts) { return alternating_nls(p, init, opts); },
      py::arg("p"), py::arg("init"), py::arg("opts") = SolverOptions{});
  m.def(
      "precalibrated_estimate",
      [](const PreprocessedSet& p, const CVec& a, const CVec& b,
         const SolverOptions& opts) {
        return precalibrated_estimate(p, a, b, opts);
      },
      py::arg("p"), py::arg("a_diag"), py::arg("b_diag"),
      py::arg("opts") = SolverOptions{});

  py::class_<MultiScenario>(m, "MultiScenario")
      .def_readonly("m_a", &MultiScenario::m_a)
      .def_readonly("m_b", &MultiScenario::m_b)
      .def("n_repeaters", &MultiScenario::n_repeaters)
      .def("gamma", &MultiScenario::gamma);

  py::class_<MultiCalibrationResult>(m, "MultiCalibrationResult")
      .def_readonly("gamma_hats", &MultiCalibrationResult::gamma_hats)
      .def_readonly("h_hat", &MultiCalibrationResult::h_hat)
      .def_readonly("a_hat", &MultiCalibrationResult::a_hat)
      .def_readonly("b_hat", &MultiCalibrationResult::b_hat)
      .def("z_hat", &MultiCalibrationResult::z_hat);

  m.def("hadamard_pattern",
        [](int n) { return hadamard_pattern(n).entries; }, py::arg("n"));
  m.def("generate_multi_scenario", &generate_multi_scenario, py::arg("config"),
        py::arg("n_repeaters"), py::arg("seed"));
  m.def(
      "run_multi_calibration",
      [](const MultiScenario& ms, double noise_std, std::uint64_t seed,
         const SolverOptions& opts) {
        Rng rng(seed);
        auto rounds = run_multi_protocol(ms, noise_std, rng);
        return multi_calibrate(rounds, opts);
      },
      py::arg("scenario"), py::arg("noise_std"), py::arg("seed"),
      py::arg("opts") = SolverOptions{});

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("snr_db_grid", &SweepConfig::snr_db_grid)
      .def_readwrite("trials", &SweepConfig::trials)
      .def_readwrite("scenario", &SweepConfig::scenario)
      .def_readwrite("master_seed", &SweepConfig::master_seed)
      .def_readwrite("solver", &SweepConfig::solver)
      .def("set_estimators", [](SweepConfig& c,
                                const std::vector<std::string>& names) {
        c.estimators.clear();
        for (const auto& n : names) c.estimators.push_back(estimator_from_name(n));
      });

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("snr_db", &SweepRow::snr_db)
      .def_readonly("estimator", &SweepRow::estimator)
      .def_readonly("rmse", &SweepRow::rmse)
      .def_readonly("trials", &SweepRow::trials)
      .def_readonly("failures", &SweepRow::failures)
      .def_readonly("valid", &SweepRow::valid);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("valid", &SweepResult::valid)
      .def("to_csv", &SweepResult::to_csv);

  m.def("rmse", &rmse, py::arg("errors"));
  m.def("run_sweep", &run_sweep, py::arg("config"));
}
