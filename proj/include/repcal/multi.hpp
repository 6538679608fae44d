#pragma once

#include <vector>

#include "repcal/estimators.hpp"
#include "repcal/model.hpp"

namespace repcal {

/// +-1 orthogonal phase schedule (S^T S = N I, first row/column all +1).
struct PatternMatrix {
  Eigen::MatrixXi entries;  // N x N, entries +-1
  int n = 0;
};

/// One bi-directional measurement round of the multi-repeater protocol.
struct RoundMeasurement {
  CMat y_ab;  // m_b x m_a
  CMat y_ba;  // m_a x m_b
};

struct MultiCalibrationResult {
  std::vector<RankOneFactor> z_factors;
  std::vector<Complex> gamma_hats;
  CMat h_hat;
  CVec a_hat, b_hat;

  int n_repeaters() const { return static_cast<int>(gamma_hats.size()); }
  CMat z_hat(int n) const { return z_factors[n].matrix(); }
};

/// Sylvester Hadamard matrix of order n (n a power of two).
PatternMatrix hadamard_pattern(int n);

/// Bi-directional measurement with repeater n contributing with sign
/// signs[n]: +1 nominal, -1 phase-rotated by pi, 0 off.
std::pair<CMat, CMat> measure_patterned(const MultiScenario& ms,
                                        const std::vector<int>& signs,
                                        double noise_std, Rng& rng);

/// Runs the full protocol on a scenario: one round per Hadamard row plus
/// one all-flipped round. rounds[k] (k < N) follows pattern row k;
/// rounds[N] is the all-minus round.
std::vector<RoundMeasurement> run_multi_protocol(const MultiScenario& ms,
                                                 double noise_std, Rng& rng);

/// Recovers H, (A, B), every Z_n and every gamma_n from protocol rounds by
/// averaging out H, fitting A/B, and inverting the Hadamard pattern.
MultiCalibrationResult multi_calibrate(
    const std::vector<RoundMeasurement>& rounds, const SolverOptions& opts);

}  // namespace repcal
