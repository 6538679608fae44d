#pragma once

#include <nlohmann/json.hpp>

#include "repcal/estimators.hpp"
#include "repcal/model.hpp"
#include "repcal/montecarlo.hpp"
#include "repcal/multi.hpp"

// JSON conventions: complex numbers as [re, im]; matrices as row-major
// nested arrays; field names as in the type definitions.
namespace repcal {

nlohmann::json complex_to_json(const Complex& c);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const CVec& v);
CVec vector_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json measurement_set_to_json(const MeasurementSet& ms);
MeasurementSet measurement_set_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const Estimate& e, bool include_trace = false);

ScenarioConfig scenario_config_from_json(const nlohmann::json& j);
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SolverOptions solver_options_from_json(const nlohmann::json& j);

nlohmann::json multi_result_to_json(const MultiCalibrationResult& r);
nlohmann::json rounds_to_json(const std::vector<RoundMeasurement>& rounds);

}  // namespace repcal
