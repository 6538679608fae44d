#include "repcal/model.hpp"

#include <cmath>

namespace repcal {

namespace {

// Column k of the unnormalized M-point DFT matrix: entries e^{-j 2 pi k n / M}.
CVec dft_column(int m, int k) {
  CVec c(m);
  for (int n = 0; n < m; ++n) {
    c(n) = std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) * n / m);
  }
  return c;
}

CMat complex_gaussian_matrix(int rows, int cols, double sigma, Rng& rng) {
  CMat w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      w(i, j) = rng.complex_gaussian(sigma);
    }
  }
  return w;
}

CVec unit_phasor_vector(int n, Rng& rng) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.unit_phasor();
  return v;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (m_a <= 0) throw ConfigError("m_a must be positive");
  if (m_b <= 0) throw ConfigError("m_b must be positive");
}

CMat Scenario::h_param() const {
  return r_b.asDiagonal() * g_mat * t_a.asDiagonal();
}

CMat Scenario::z_param() const {
  return alpha * (r_b.asDiagonal() * (g_vec * h_vec.transpose()) *
                  t_a.asDiagonal());
}

CVec Scenario::a_param() const { return r_a.cwiseQuotient(t_a); }

CVec Scenario::b_param() const { return t_b.cwiseQuotient(r_b); }

CMat MultiScenario::h_param() const {
  return r_b.asDiagonal() * g_mat * t_a.asDiagonal();
}

CMat MultiScenario::z_param(int n) const {
  return alphas[n] * (r_b.asDiagonal() *
                      (g_vecs[n] * h_vecs[n].transpose()) * t_a.asDiagonal());
}

CVec MultiScenario::a_param() const { return r_a.cwiseQuotient(t_a); }

CVec MultiScenario::b_param() const { return t_b.cwiseQuotient(r_b); }

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);

  Scenario s;
  s.m_a = config.m_a;
  s.m_b = config.m_b;
  s.g_mat = complex_gaussian_matrix(s.m_b, s.m_a, 1.0, rng);
  s.h_vec = dft_column(s.m_a, rng.uniform_index(s.m_a));
  s.g_vec = dft_column(s.m_b, rng.uniform_index(s.m_b));
  s.r_a = unit_phasor_vector(s.m_a, rng);
  s.t_a = unit_phasor_vector(s.m_a, rng);
  s.r_b = unit_phasor_vector(s.m_b, rng);
  s.t_b = unit_phasor_vector(s.m_b, rng);
  s.alpha = std::pow(10.0, config.alpha_gain_db / 20.0) * rng.unit_phasor();
  s.beta = std::pow(10.0, config.beta_gain_db / 20.0) * rng.unit_phasor();
  return s;
}

MultiScenario generate_multi_scenario(const ScenarioConfig& config,
                                      int n_repeaters, std::uint64_t seed) {
  config.validate();
  if (n_repeaters < 1) throw ConfigError("n_repeaters must be >= 1");
  Rng rng(seed);

  MultiScenario s;
  s.m_a = config.m_a;
  s.m_b = config.m_b;
  s.g_mat = complex_gaussian_matrix(s.m_b, s.m_a, 1.0, rng);
  s.r_a = unit_phasor_vector(s.m_a, rng);
  s.t_a = unit_phasor_vector(s.m_a, rng);
  s.r_b = unit_phasor_vector(s.m_b, rng);
  s.t_b = unit_phasor_vector(s.m_b, rng);
  double amag = std::pow(10.0, config.alpha_gain_db / 20.0);
  double bmag = std::pow(10.0, config.beta_gain_db / 20.0);
  for (int n = 0; n < n_repeaters; ++n) {
    s.h_vecs.push_back(dft_column(s.m_a, rng.uniform_index(s.m_a)));
    s.g_vecs.push_back(dft_column(s.m_b, rng.uniform_index(s.m_b)));
    s.alphas.push_back(amag * rng.unit_phasor());
    s.betas.push_back(bmag * rng.unit_phasor());
  }
  return s;
}

std::pair<CMat, CMat> measure_bidirectional(const Scenario& s,
                                            double repeater_phase,
                                            bool repeater_on, double noise_std,
                                            Rng& rng) {
  if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");

  Complex c = repeater_on ? std::polar(1.0, repeater_phase) : Complex(0.0);
  CMat fwd = s.g_mat + c * s.alpha * (s.g_vec * s.h_vec.transpose());
  CMat rev =
      s.g_mat.transpose() + c * s.beta * (s.h_vec * s.g_vec.transpose());

  CMat x_ab = s.r_b.asDiagonal() * fwd * s.t_a.asDiagonal();
  CMat x_ba = s.r_a.asDiagonal() * rev * s.t_b.asDiagonal();
  if (noise_std > 0.0) {
    x_ab += complex_gaussian_matrix(s.m_b, s.m_a, noise_std, rng);
    x_ba += complex_gaussian_matrix(s.m_a, s.m_b, noise_std, rng);
  }
  return {x_ab, x_ba};
}

MeasurementSet take_calibration_measurements(const Scenario& s,
                                             double noise_std, Rng& rng) {
  MeasurementSet ms;
  ms.noise_std = noise_std;
  auto [x_ab0, x_ba0] = measure_bidirectional(s, 0.0, true, noise_std, rng);
  auto [x_ab1, x_ba1] = measure_bidirectional(s, M_PI, true, noise_std, rng);
  ms.x_ab0 = std::move(x_ab0);
  ms.x_ba0 = std::move(x_ba0);
  ms.x_ab1 = std::move(x_ab1);
  ms.x_ba1 = std::move(x_ba1);
  return ms;
}

std::pair<std::pair<CMat, CMat>, std::pair<CMat, CMat>>
take_onoff_measurements(const Scenario& s, double noise_std, Rng& rng) {
  auto on = measure_bidirectional(s, 0.0, true, noise_std, rng);
  auto off = measure_bidirectional(s, 0.0, false, noise_std, rng);
  return {on, off};
}

PreprocessedSet preprocess(const MeasurementSet& ms) {
  if (ms.x_ab0.rows() != ms.x_ab1.rows() ||
      ms.x_ab0.cols() != ms.x_ab1.cols() ||
      ms.x_ba0.rows() != ms.x_ba1.rows() ||
      ms.x_ba0.cols() != ms.x_ba1.cols() ||
      ms.x_ab0.rows() != ms.x_ba0.cols() ||
      ms.x_ab0.cols() != ms.x_ba0.rows()) {
    throw ConfigError("measurement set shapes are inconsistent");
  }
  PreprocessedSet p;
  p.r1 = 0.5 * (ms.x_ab0 + ms.x_ab1);
  p.r2 = 0.5 * (ms.x_ab0 - ms.x_ab1);
  p.r3 = 0.5 * (ms.x_ba0 + ms.x_ba1);
  p.r4 = 0.5 * (ms.x_ba0 - ms.x_ba1);
  return p;
}

double calibration_residual(const Scenario& s, Complex gamma_hat) {
  if (gamma_hat == Complex(0.0)) {
    throw DegenerateInputError("gamma_hat must be nonzero");
  }
  Complex beta_comp = s.beta / gamma_hat;
  CMat fwd = s.g_mat + s.alpha * (s.g_vec * s.h_vec.transpose());
  CMat rev =
      s.g_mat.transpose() + beta_comp * (s.h_vec * s.g_vec.transpose());
  double denom = std::abs(s.alpha) * s.g_vec.norm() * s.h_vec.norm();
  return (fwd - rev.transpose()).norm() / denom;
}

}  // namespace repcal
