#pragma once

#include <optional>
#include <vector>

#include "repcal/model.hpp"
#include "repcal/types.hpp"

namespace repcal {

struct SolverOptions {
  int ab_iters = 100;       // alternating-projection iterations for A, B
  double ab_tol = 1e-12;    // relative objective-decrease threshold
  int outer_iters = 25;     // alternating-optimization rounds
  double outer_tol = 1e-10;

  void validate() const;
};

/// Rank-one matrix stored in factored form: scale * left * right^H.
struct RankOneFactor {
  double scale = 0.0;
  CVec left;
  CVec right;

  CMat matrix() const { return scale * (left * right.adjoint()); }
};

/// Fitted parameters (H, Z, A, B, gamma) with bookkeeping. z_factor keeps
/// the rank-one structure of Z by construction; z_hat() expands it.
struct Estimate {
  CMat h_hat;             // m_b x m_a
  RankOneFactor z_factor;
  CVec a_hat;             // diag of A, gauge: ||a||=1, a[0] real nonneg
  CVec b_hat;             // diag of B
  Complex gamma_hat{};
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool terminated_on_increase = false;
  std::vector<double> objective_trace;  // per outer round, when applicable

  CMat z_hat() const { return z_factor.matrix(); }
};

/// Best rank-one approximation in the Frobenius sense (dominant SVD term).
RankOneFactor rank_one_approx(const CMat& m);

/// Element-wise-division estimate of gamma. Exact without noise but
/// statistically unsound under noise; diagnostic only.
Complex ingenuous_estimate(const MeasurementSet& ms);

/// ||R1-H||^2 + ||R2-Z||^2 + ||R3-A H^T B||^2 + ||R4-gamma A Z^T B||^2.
double nls_objective(const CMat& h, const CMat& z, const CVec& a_diag,
                     const CVec& b_diag, Complex gamma,
                     const PreprocessedSet& p);

struct AbFitResult {
  CVec a_diag;
  CVec b_diag;
  int iterations = 0;
  double objective = 0.0;
  bool converged = false;
};

/// Fits the diagonal matrices A, B by alternating closed-form column
/// updates, starting from identity and renormalizing ||A||_F=1 every
/// iteration. Without the optional Z-term it minimizes ||R3 - A H^T B||^2;
/// with it, additionally ||R4 - gamma A Z^T B||^2.
AbFitResult alternating_projection_ab(
    const CMat& h_hat, const CMat& r3, const SolverOptions& opts,
    const std::optional<CMat>& z_hat = std::nullopt,
    std::optional<Complex> gamma = std::nullopt,
    const std::optional<CMat>& r4 = std::nullopt);

/// Exact minimizer of ||R4 - gamma A Z^T B||^2 over complex gamma.
Complex estimate_gamma_closed_form(const CVec& a_diag, const CVec& b_diag,
                                   const CMat& z_hat, const CMat& r4);

/// Exact joint least-squares update of H given A and B. Reduces to
/// per-entry scalar divisions because A and B are diagonal.
CMat update_h_kron(const CVec& a_diag, const CVec& b_diag, const CMat& r1,
                   const CMat& r3);

/// Approximate Z update: rank-one fit to a linear combination of R2 and
/// B^{-1} R4^T A^{-1}.
RankOneFactor update_z(const CVec& a_diag, const CVec& b_diag, Complex gamma,
                       const CMat& r2, const CMat& r4);

/// The sequential fitting algorithm: H = R1, Z = S{R2}, then A/B by
/// alternating projection and gamma in closed form.
Estimate basic_nls(const PreprocessedSet& p, const SolverOptions& opts);

/// Alternating-optimization refinement of an initial estimate. Terminates
/// early if the objective would increase.
Estimate alternating_nls(const PreprocessedSet& p, const Estimate& init,
                         const SolverOptions& opts);

/// Variant for jointly pre-calibrated arrays: A, B known, only H, Z and
/// gamma fitted.
Estimate precalibrated_estimate(const PreprocessedSet& p, const CVec& a_diag,
                                const CVec& b_diag, const SolverOptions& opts);

/// Variant for on/off measurements instead of phase flips. y_on and y_off
/// are (Y_AB, Y_BA) pairs with the repeater on and off.
Estimate onoff_estimate(const std::pair<CMat, CMat>& y_on,
                        const std::pair<CMat, CMat>& y_off,
                        const SolverOptions& opts);

/// Reporting gauge: ||a||=1 and a[0] rotated to real nonnegative,
/// compensated in b so all gauge-invariant quantities are unchanged.
void fix_gauge(CVec& a_diag, CVec& b_diag);

}  // namespace repcal
