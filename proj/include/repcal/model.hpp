#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "repcal/rng.hpp"
#include "repcal/types.hpp"

namespace repcal {

/// Configuration for random scenario generation.
struct ScenarioConfig {
  int m_a = 4;
  int m_b = 3;
  double alpha_gain_db = 10.0;  // |alpha|^2 in dB
  double beta_gain_db = 10.0;   // |beta|^2 in dB

  void validate() const;
};

/// Ground-truth world: direct channel G, repeater-path channels h and g,
/// repeater gains alpha/beta, and the diagonal reciprocity coefficients of
/// both arrays.
struct Scenario {
  int m_a = 0;
  int m_b = 0;
  CMat g_mat;   // m_b x m_a, direct channel with repeater off
  CVec h_vec;   // m_a, array A <-> repeater
  CVec g_vec;   // m_b, array B <-> repeater
  Complex alpha{};
  Complex beta{};
  CVec r_a, t_a;  // length m_a
  CVec r_b, t_b;  // length m_b

  Complex gamma() const { return beta / alpha; }

  /// Re-parameterized quantities (useful as ground truth in tests).
  CMat h_param() const;    // H = R_B G T_A
  CMat z_param() const;    // Z = alpha R_B g h^T T_A
  CVec a_param() const;    // diag of A = T_A^{-1} R_A
  CVec b_param() const;    // diag of B = T_B R_B^{-1}
};

/// N-repeater variant: shared arrays and direct channel, per-repeater
/// path channels and gains.
struct MultiScenario {
  int m_a = 0;
  int m_b = 0;
  CMat g_mat;
  std::vector<CVec> h_vecs;  // each length m_a
  std::vector<CVec> g_vecs;  // each length m_b
  std::vector<Complex> alphas;
  std::vector<Complex> betas;
  CVec r_a, t_a, r_b, t_b;

  int n_repeaters() const { return static_cast<int>(alphas.size()); }
  Complex gamma(int n) const { return betas[n] / alphas[n]; }
  CMat h_param() const;
  CMat z_param(int n) const;
  CVec a_param() const;
  CVec b_param() const;
};

/// The four noisy channel estimates of the phase-flip protocol.
struct MeasurementSet {
  CMat x_ab0, x_ab1;  // m_b x m_a
  CMat x_ba0, x_ba1;  // m_a x m_b
  double noise_std = 0.0;
};

/// Half-sums and half-differences R1..R4.
struct PreprocessedSet {
  CMat r1, r2;  // m_b x m_a
  CMat r3, r4;  // m_a x m_b
};

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

MultiScenario generate_multi_scenario(const ScenarioConfig& config,
                                      int n_repeaters, std::uint64_t seed);

/// One bi-directional measurement. The repeater term enters with factor
/// e^{j*repeater_phase} when on and 0 when off. Returns (X_AB, X_BA).
std::pair<CMat, CMat> measure_bidirectional(const Scenario& s,
                                            double repeater_phase,
                                            bool repeater_on, double noise_std,
                                            Rng& rng);

/// Two bi-directional measurements, repeater phase 0 then pi.
MeasurementSet take_calibration_measurements(const Scenario& s,
                                             double noise_std, Rng& rng);

/// On/off protocol: one bi-directional measurement with the repeater on
/// (index 0) and one with it off (index 1). Returns {(Y_AB0, Y_BA0),
/// (Y_AB1, Y_BA1)}.
std::pair<std::pair<CMat, CMat>, std::pair<CMat, CMat>>
take_onoff_measurements(const Scenario& s, double noise_std, Rng& rng);

PreprocessedSet preprocess(const MeasurementSet& ms);

/// Relative non-reciprocity of the effective medium after re-configuring
/// the repeater's reverse gain to beta/gamma_hat.
double calibration_residual(const Scenario& s, Complex gamma_hat);

}  // namespace repcal
