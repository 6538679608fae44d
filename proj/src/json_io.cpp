#include "repcal/json_io.hpp"

namespace repcal {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("expected complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
      row.push_back(complex_to_json(m(i, jj)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError("expected matrix as nested arrays");
  }
  auto rows = static_cast<Eigen::Index>(j.size());
  auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw ConfigError("ragged matrix rows in JSON");
    }
    for (Eigen::Index jj = 0; jj < cols; ++jj) {
      m(i, jj) = complex_from_json(j[i][jj]);
    }
  }
  return m;
}

json vector_to_json(const CVec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
  return arr;
}

CVec vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected vector as array");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json scenario_to_json(const Scenario& s) {
  return json{{"m_a", s.m_a},
              {"m_b", s.m_b},
              {"g_mat", matrix_to_json(s.g_mat)},
              {"h_vec", vector_to_json(s.h_vec)},
              {"g_vec", vector_to_json(s.g_vec)},
              {"alpha", complex_to_json(s.alpha)},
              {"beta", complex_to_json(s.beta)},
              {"r_a", vector_to_json(s.r_a)},
              {"t_a", vector_to_json(s.t_a)},
              {"r_b", vector_to_json(s.r_b)},
              {"t_b", vector_to_json(s.t_b)}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.m_a = j.at("m_a").get<int>();
  s.m_b = j.at("m_b").get<int>();
  s.g_mat = matrix_from_json(j.at("g_mat"));
  s.h_vec = vector_from_json(j.at("h_vec"));
  s.g_vec = vector_from_json(j.at("g_vec"));
  s.alpha = complex_from_json(j.at("alpha"));
  s.beta = complex_from_json(j.at("beta"));
  s.r_a = vector_from_json(j.at("r_a"));
  s.t_a = vector_from_json(j.at("t_a"));
  s.r_b = vector_from_json(j.at("r_b"));
  s.t_b = vector_from_json(j.at("t_b"));
  if (s.m_a <= 0) throw ConfigError("m_a must be positive");
  if (s.m_b <= 0) throw ConfigError("m_b must be positive");
  if (s.g_mat.rows() != s.m_b || s.g_mat.cols() != s.m_a ||
      s.h_vec.size() != s.m_a || s.g_vec.size() != s.m_b ||
      s.r_a.size() != s.m_a || s.t_a.size() != s.m_a ||
      s.r_b.size() != s.m_b || s.t_b.size() != s.m_b) {
    throw ConfigError("scenario dimensions are inconsistent");
  }
  return s;
}

json measurement_set_to_json(const MeasurementSet& ms) {
  return json{{"x_ab0", matrix_to_json(ms.x_ab0)},
              {"x_ab1", matrix_to_json(ms.x_ab1)},
              {"x_ba0", matrix_to_json(ms.x_ba0)},
              {"x_ba1", matrix_to_json(ms.x_ba1)},
              {"noise_std", ms.noise_std}};
}

MeasurementSet measurement_set_from_json(const json& j) {
  MeasurementSet ms;
  ms.x_ab0 = matrix_from_json(j.at("x_ab0"));
  ms.x_ab1 = matrix_from_json(j.at("x_ab1"));
  ms.x_ba0 = matrix_from_json(j.at("x_ba0"));
  ms.x_ba1 = matrix_from_json(j.at("x_ba1"));
  ms.noise_std = j.value("noise_std", 0.0);
  if (ms.noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
  return ms;
}

json estimate_to_json(const Estimate& e, bool include_trace) {
  json j{{"h_hat", matrix_to_json(e.h_hat)},
         {"z_hat", matrix_to_json(e.z_hat())},
         {"z_factor",
          {{"scale", e.z_factor.scale},
           {"left", vector_to_json(e.z_factor.left)},
           {"right", vector_to_json(e.z_factor.right)}}},
         {"a_hat", vector_to_json(e.a_hat)},
         {"b_hat", vector_to_json(e.b_hat)},
         {"gamma_hat", complex_to_json(e.gamma_hat)},
         {"objective", e.objective},
         {"iterations", e.iterations},
         {"converged", e.converged},
         {"terminated_on_increase", e.terminated_on_increase}};
  if (include_trace) j["objective_trace"] = e.objective_trace;
  return j;
}

ScenarioConfig scenario_config_from_json(const json& j) {
  ScenarioConfig c;
  c.m_a = j.value("m_a", c.m_a);
  c.m_b = j.value("m_b", c.m_b);
  if (j.contains("gain_db")) {
    c.alpha_gain_db = j.at("gain_db").get<double>();
    c.beta_gain_db = c.alpha_gain_db;
  }
  c.alpha_gain_db = j.value("alpha_gain_db", c.alpha_gain_db);
  c.beta_gain_db = j.value("beta_gain_db", c.beta_gain_db);
  c.validate();
  return c;
}

SolverOptions solver_options_from_json(const json& j) {
  SolverOptions o;
  o.ab_iters = j.value("ab_iters", o.ab_iters);
  o.ab_tol = j.value("ab_tol", o.ab_tol);
  o.outer_iters = j.value("outer_iters", o.outer_iters);
  o.outer_tol = j.value("outer_tol", o.outer_tol);
  o.validate();
  return o;
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  c.snr_db_grid = j.at("snr_db_grid").get<std::vector<double>>();
  c.trials = j.value("trials", c.trials);
  if (j.contains("scenario")) {
    c.scenario = scenario_config_from_json(j.at("scenario"));
  }
  if (j.contains("estimators")) {
    c.estimators.clear();
    for (const auto& name : j.at("estimators")) {
      c.estimators.push_back(estimator_from_name(name.get<std::string>()));
    }
  }
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("solver")) c.solver = solver_options_from_json(j.at("solver"));
  c.validate();
  return c;
}

json multi_result_to_json(const MultiCalibrationResult& r) {
  json z_list = json::array();
  json g_list = json::array();
  for (int n = 0; n < r.n_repeaters(); ++n) {
    z_list.push_back(matrix_to_json(r.z_hat(n)));
    g_list.push_back(complex_to_json(r.gamma_hats[n]));
  }
  return json{{"z_hats", z_list},
              {"gamma_hats", g_list},
              {"h_hat", matrix_to_json(r.h_hat)},
              {"a_hat", vector_to_json(r.a_hat)},
              {"b_hat", vector_to_json(r.b_hat)}};
}

json rounds_to_json(const std::vector<RoundMeasurement>& rounds) {
  json arr = json::array();
  for (const auto& r : rounds) {
    arr.push_back(json{{"y_ab", matrix_to_json(r.y_ab)},
                       {"y_ba", matrix_to_json(r.y_ba)}});
  }
  return arr;
}

}  // namespace repcal
