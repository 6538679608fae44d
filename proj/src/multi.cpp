#include "repcal/multi.hpp"

#include <cmath>

namespace repcal {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

CMat gaussian_matrix(int rows, int cols, double sigma, Rng& rng) {
  CMat w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) w(i, j) = rng.complex_gaussian(sigma);
  }
  return w;
}

}  // namespace

PatternMatrix hadamard_pattern(int n) {
  if (!is_power_of_two(n)) {
    throw ConfigError(
        "hadamard_pattern: order must be a power of two (1, 2, 4, 8, ...)");
  }
  Eigen::MatrixXi h(1, 1);
  h(0, 0) = 1;
  while (h.rows() < n) {
    int m = static_cast<int>(h.rows());
    Eigen::MatrixXi h2(2 * m, 2 * m);
    h2.topLeftCorner(m, m) = h;
    h2.topRightCorner(m, m) = h;
    h2.bottomLeftCorner(m, m) = h;
    h2.bottomRightCorner(m, m) = -h;
    h = std::move(h2);
  }
  return PatternMatrix{std::move(h), n};
}

std::pair<CMat, CMat> measure_patterned(const MultiScenario& ms,
                                        const std::vector<int>& signs,
                                        double noise_std, Rng& rng) {
  if (static_cast<int>(signs.size()) != ms.n_repeaters()) {
    throw ConfigError("measure_patterned: signs length mismatch");
  }
  if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");

  CMat fwd = ms.g_mat;
  CMat rev = ms.g_mat.transpose();
  for (int n = 0; n < ms.n_repeaters(); ++n) {
    double s = static_cast<double>(signs[n]);
    fwd += s * ms.alphas[n] * (ms.g_vecs[n] * ms.h_vecs[n].transpose());
    rev += s * ms.betas[n] * (ms.h_vecs[n] * ms.g_vecs[n].transpose());
  }
  CMat y_ab = ms.r_b.asDiagonal() * fwd * ms.t_a.asDiagonal();
  CMat y_ba = ms.r_a.asDiagonal() * rev * ms.t_b.asDiagonal();
  if (noise_std > 0.0) {
    y_ab += gaussian_matrix(ms.m_b, ms.m_a, noise_std, rng);
    y_ba += gaussian_matrix(ms.m_a, ms.m_b, noise_std, rng);
  }
  return {y_ab, y_ba};
}

std::vector<RoundMeasurement> run_multi_protocol(const MultiScenario& ms,
                                                 double noise_std, Rng& rng) {
  const int n = ms.n_repeaters();
  PatternMatrix pat = hadamard_pattern(n);

  std::vector<RoundMeasurement> rounds;
  rounds.reserve(n + 1);
  for (int k = 0; k < n; ++k) {
    std::vector<int> signs(n);
    for (int j = 0; j < n; ++j) signs[j] = pat.entries(k, j);
    auto [y_ab, y_ba] = measure_patterned(ms, signs, noise_std, rng);
    rounds.push_back({std::move(y_ab), std::move(y_ba)});
  }
  // All-flipped round, paired with the all-plus first row to eliminate H.
  std::vector<int> minus(n, -1);
  auto [y_ab, y_ba] = measure_patterned(ms, minus, noise_std, rng);
  rounds.push_back({std::move(y_ab), std::move(y_ba)});
  return rounds;
}

MultiCalibrationResult multi_calibrate(
    const std::vector<RoundMeasurement>& rounds, const SolverOptions& opts) {
  const int n = static_cast<int>(rounds.size()) - 1;
  if (n < 1 || !is_power_of_two(n)) {
    throw ConfigError(
        "multi_calibrate: expected N+1 rounds with N a power of two");
  }
  PatternMatrix pat = hadamard_pattern(n);

  MultiCalibrationResult res;
  // Average of the all-plus (row 1) and all-minus rounds cancels the
  // repeater terms.
  res.h_hat = 0.5 * (rounds[0].y_ab + rounds[n].y_ab);
  CMat r3_avg = 0.5 * (rounds[0].y_ba + rounds[n].y_ba);

  AbFitResult ab = alternating_projection_ab(res.h_hat, r3_avg, opts);
  res.a_hat = ab.a_diag;
  res.b_hat = ab.b_diag;
  fix_gauge(res.a_hat, res.b_hat);

  CMat aht_b =
      res.a_hat.asDiagonal() * res.h_hat.transpose() * res.b_hat.asDiagonal();

  for (int rep = 0; rep < n; ++rep) {
    CMat z_sum = CMat::Zero(res.h_hat.rows(), res.h_hat.cols());
    CMat m_sum = CMat::Zero(res.h_hat.cols(), res.h_hat.rows());
    for (int k = 0; k < n; ++k) {
      double s = static_cast<double>(pat.entries(k, rep));
      z_sum += s * (rounds[k].y_ab - res.h_hat);
      m_sum += s * (rounds[k].y_ba - aht_b);
    }
    z_sum /= static_cast<double>(n);
    m_sum /= static_cast<double>(n);

    RankOneFactor z = rank_one_approx(z_sum);
    if (z.scale == 0.0) {
      throw DegenerateInputError("multi_calibrate: recovered Z_n is zero");
    }
    res.gamma_hats.push_back(
        estimate_gamma_closed_form(res.a_hat, res.b_hat, z.matrix(), m_sum));
    res.z_factors.push_back(std::move(z));
  }
  return res;
}

}  // namespace repcal
