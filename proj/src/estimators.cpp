#include "repcal/estimators.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace repcal {

namespace {

CMat model_r3(const CVec& a, const CVec& b, const CMat& h) {
  return a.asDiagonal() * h.transpose() * b.asDiagonal();
}

CMat model_r4(const CVec& a, const CVec& b, const CMat& z, Complex gamma) {
  return gamma * (a.asDiagonal() * z.transpose() * b.asDiagonal());
}

}  // namespace

void SolverOptions::validate() const {
  if (ab_iters <= 0 || outer_iters <= 0 || ab_tol <= 0.0 || outer_tol <= 0.0) {
    throw ConfigError("solver options must be positive");
  }
}

void fix_gauge(CVec& a_diag, CVec& b_diag) {
  double s = a_diag.norm();
  if (s == 0.0) return;
  a_diag /= s;
  b_diag *= s;
  Complex a0 = a_diag(0);
  if (std::abs(a0) > 0.0) {
    Complex rot = std::conj(a0) / std::abs(a0);
    a_diag *= rot;
    b_diag *= std::conj(rot);
  }
}

RankOneFactor rank_one_approx(const CMat& m) {
  RankOneFactor f;
  if (m.norm() == 0.0) {
    f.scale = 0.0;
    f.left = CVec::Zero(m.rows());
    f.right = CVec::Zero(m.cols());
    return f;
  }
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  f.scale = svd.singularValues()(0);
  f.left = svd.matrixU().col(0);
  f.right = svd.matrixV().col(0);
  return f;
}

Complex ingenuous_estimate(const MeasurementSet& ms) {
  const CMat den_ab = ms.x_ab0 + ms.x_ab1;
  const CMat den_ba = ms.x_ba0 + ms.x_ba1;
  if ((den_ab.array() == Complex(0.0)).any() ||
      (den_ba.array() == Complex(0.0)).any()) {
    throw DegenerateInputError(
        "ingenuous estimator: exact zero in a sum-measurement denominator");
  }
  // Left sides of the element-wise ratio identity.
  CMat lhs_ab =
      (2.0 * ms.x_ab0).cwiseQuotient(den_ab) - CMat::Ones(ms.x_ab0.rows(),
                                                          ms.x_ab0.cols());
  CMat lhs_ba =
      ((2.0 * ms.x_ba0).cwiseQuotient(den_ba) -
       CMat::Ones(ms.x_ba0.rows(), ms.x_ba0.cols()))
          .transpose();
  if ((lhs_ab.array() == Complex(0.0)).any()) {
    throw DegenerateInputError(
        "ingenuous estimator: exact zero in the ratio denominator");
  }
  return lhs_ba.cwiseQuotient(lhs_ab).mean();
}

double nls_objective(const CMat& h, const CMat& z, const CVec& a_diag,
                     const CVec& b_diag, Complex gamma,
                     const PreprocessedSet& p) {
  if (h.rows() != p.r1.rows() || h.cols() != p.r1.cols() ||
      z.rows() != p.r2.rows() || z.cols() != p.r2.cols() ||
      a_diag.size() != p.r3.rows() || b_diag.size() != p.r3.cols()) {
    throw ConfigError("nls_objective: shape mismatch");
  }
  return (p.r1 - h).squaredNorm() + (p.r2 - z).squaredNorm() +
         (p.r3 - model_r3(a_diag, b_diag, h)).squaredNorm() +
         (p.r4 - model_r4(a_diag, b_diag, z, gamma)).squaredNorm();
}

AbFitResult alternating_projection_ab(const CMat& h_hat, const CMat& r3,
                                      const SolverOptions& opts,
                                      const std::optional<CMat>& z_hat,
                                      std::optional<Complex> gamma,
                                      const std::optional<CMat>& r4) {
  opts.validate();
  if (z_hat.has_value() != (gamma.has_value() && r4.has_value())) {
    throw ConfigError(
        "alternating_projection_ab: z_hat, gamma, r4 must be given together");
  }
  const int m_b = static_cast<int>(h_hat.rows());
  const int m_a = static_cast<int>(h_hat.cols());
  const bool with_z = z_hat.has_value();
  const Complex g = with_z ? *gamma : Complex(0.0);
  const double g2 = std::norm(g);

  AbFitResult res;
  res.a_diag = CVec::Ones(m_a);
  res.b_diag = CVec::Ones(m_b);

  const CMat r3t = r3.transpose();  // m_b x m_a
  const CMat r4t = with_z ? CMat(r4->transpose()) : CMat();

  auto fit_objective = [&](const CVec& a, const CVec& b) {
    double obj = (r3 - model_r3(a, b, h_hat)).squaredNorm();
    if (with_z) obj += (*r4 - model_r4(a, b, *z_hat, g)).squaredNorm();
    return obj;
  };

  double prev = fit_objective(res.a_diag, res.b_diag);
  for (int it = 0; it < opts.ab_iters; ++it) {
    // A update: columns of (B H) and optionally (B Z) against R3^T, R4^T.
    CMat bh = res.b_diag.asDiagonal() * h_hat;
    CMat bz = with_z ? CMat(res.b_diag.asDiagonal() * (*z_hat)) : CMat();
    for (int i = 0; i < m_a; ++i) {
      Complex num = bh.col(i).dot(r3t.col(i));  // (BH)_i^H (R3^T)_i
      double den = bh.col(i).squaredNorm();
      if (with_z) {
        num += std::conj(g) * bz.col(i).dot(r4t.col(i));
        den += g2 * bz.col(i).squaredNorm();
      }
      if (den == 0.0) {
        throw DegenerateInputError(
            "alternating_projection_ab: zero column in B*H");
      }
      res.a_diag(i) = num / den;
    }
    // B update.
    CMat aht = res.a_diag.asDiagonal() * h_hat.transpose();
    CMat azt =
        with_z ? CMat(res.a_diag.asDiagonal() * z_hat->transpose()) : CMat();
    for (int i = 0; i < m_b; ++i) {
      Complex num = aht.col(i).dot(r3.col(i));
      double den = aht.col(i).squaredNorm();
      if (with_z) {
        num += std::conj(g) * azt.col(i).dot(r4->col(i));
        den += g2 * azt.col(i).squaredNorm();
      }
      if (den == 0.0) {
        throw DegenerateInputError(
            "alternating_projection_ab: zero column in A*H^T");
      }
      res.b_diag(i) = num / den;
    }
    // Renormalize so ||A||_F = 1; the A-B product is unchanged.
    double s = res.a_diag.norm();
    if (s == 0.0) {
      throw DegenerateInputError("alternating_projection_ab: A collapsed to 0");
    }
    res.a_diag /= s;
    res.b_diag *= s;

    res.iterations = it + 1;
    double cur = fit_objective(res.a_diag, res.b_diag);
    double scale = std::max(prev, std::numeric_limits<double>::min());
    if ((prev - cur) / scale < opts.ab_tol) {
      res.converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }
  res.objective = prev;
  return res;
}

Complex estimate_gamma_closed_form(const CVec& a_diag, const CVec& b_diag,
                                   const CMat& z_hat, const CMat& r4) {
  CMat azb = a_diag.asDiagonal() * z_hat.transpose() * b_diag.asDiagonal();
  double den = azb.squaredNorm();
  if (den == 0.0) {
    throw DegenerateInputError(
        "estimate_gamma_closed_form: repeater path unobservable (A Z^T B = 0)");
  }
  // tr((A Z^T B)^H R4) / ||A Z^T B||^2
  Complex num = (azb.adjoint() * r4).trace();
  return num / den;
}

CMat update_h_kron(const CVec& a_diag, const CVec& b_diag, const CMat& r1,
                   const CMat& r3) {
  const int m_b = static_cast<int>(r1.rows());
  const int m_a = static_cast<int>(r1.cols());
  if (r3.rows() != m_a || r3.cols() != m_b || a_diag.size() != m_a ||
      b_diag.size() != m_b) {
    throw ConfigError("update_h_kron: shape mismatch");
  }
  CMat h(m_b, m_a);
  for (int i = 0; i < m_b; ++i) {
    for (int j = 0; j < m_a; ++j) {
      Complex c = a_diag(j) * b_diag(i);
      h(i, j) = (r1(i, j) + std::conj(c) * r3(j, i)) / (1.0 + std::norm(c));
    }
  }
  return h;
}

RankOneFactor update_z(const CVec& a_diag, const CVec& b_diag, Complex gamma,
                       const CMat& r2, const CMat& r4) {
  if ((a_diag.array().abs() < 1e-300).any() ||
      (b_diag.array().abs() < 1e-300).any()) {
    throw DegenerateInputError("update_z: zero diagonal entry in A or B");
  }
  CVec a_inv = a_diag.cwiseInverse();
  CVec b_inv = b_diag.cwiseInverse();
  CMat comb = (r2 + std::conj(gamma) * (b_inv.asDiagonal() * r4.transpose() *
                                        a_inv.asDiagonal())) /
              (1.0 + std::norm(gamma));
  return rank_one_approx(comb);
}

Estimate basic_nls(const PreprocessedSet& p, const SolverOptions& opts) {
  opts.validate();
  Estimate e;
  e.h_hat = p.r1;
  e.z_factor = rank_one_approx(p.r2);
  AbFitResult ab = alternating_projection_ab(e.h_hat, p.r3, opts);
  e.a_hat = ab.a_diag;
  e.b_hat = ab.b_diag;
  e.iterations = ab.iterations;
  e.converged = ab.converged;
  e.gamma_hat = estimate_gamma_closed_form(e.a_hat, e.b_hat, e.z_hat(), p.r4);
  fix_gauge(e.a_hat, e.b_hat);
  e.objective = nls_objective(e.h_hat, e.z_hat(), e.a_hat, e.b_hat,
                              e.gamma_hat, p);
  return e;
}

Estimate alternating_nls(const PreprocessedSet& p, const Estimate& init,
                         const SolverOptions& opts) {
  opts.validate();
  Estimate best = init;
  best.terminated_on_increase = false;
  best.objective_trace = {init.objective};

  CMat h = init.h_hat;
  CVec a = init.a_hat;
  CVec b = init.b_hat;
  RankOneFactor z = init.z_factor;
  Complex gamma = init.gamma_hat;

  double prev = init.objective;
  for (int round = 0; round < opts.outer_iters; ++round) {
    h = update_h_kron(a, b, p.r1, p.r3);
    AbFitResult ab = alternating_projection_ab(h, p.r3, opts, z.matrix(),
                                               gamma, p.r4);
    a = ab.a_diag;
    b = ab.b_diag;
    z = update_z(a, b, gamma, p.r2, p.r4);
    gamma = estimate_gamma_closed_form(a, b, z.matrix(), p.r4);

    double obj = nls_objective(h, z.matrix(), a, b, gamma, p);
    if (obj > prev) {
      // The Z update is approximate so the objective can increase; keep
      // the last non-increasing iterate.
      best.terminated_on_increase = true;
      best.converged = true;
      break;
    }
    best.h_hat = h;
    best.z_factor = z;
    best.a_hat = a;
    best.b_hat = b;
    best.gamma_hat = gamma;
    best.objective = obj;
    best.iterations = round + 1;
    best.objective_trace.push_back(obj);

    double scale = std::max(prev, std::numeric_limits<double>::min());
    bool done = (prev - obj) / scale < opts.outer_tol;
    prev = obj;
    if (done) {
      best.converged = true;
      break;
    }
  }
  fix_gauge(best.a_hat, best.b_hat);
  best.objective = nls_objective(best.h_hat, best.z_hat(), best.a_hat,
                                 best.b_hat, best.gamma_hat, p);
  return best;
}

Estimate precalibrated_estimate(const PreprocessedSet& p, const CVec& a_diag,
                                const CVec& b_diag,
                                const SolverOptions& opts) {
  opts.validate();
  Estimate e;
  e.a_hat = a_diag;
  e.b_hat = b_diag;
  e.h_hat = update_h_kron(a_diag, b_diag, p.r1, p.r3);
  e.gamma_hat = Complex(0.0);  // first Z update then reduces to S{R2}

  double prev = std::numeric_limits<double>::infinity();
  for (int round = 0; round < opts.outer_iters; ++round) {
    e.z_factor = update_z(a_diag, b_diag, e.gamma_hat, p.r2, p.r4);
    e.gamma_hat =
        estimate_gamma_closed_form(a_diag, b_diag, e.z_hat(), p.r4);
    double obj = nls_objective(e.h_hat, e.z_hat(), a_diag, b_diag,
                               e.gamma_hat, p);
    e.iterations = round + 1;
    e.objective_trace.push_back(obj);
    double scale = std::max(prev, std::numeric_limits<double>::min());
    if (std::isfinite(prev) && (prev - obj) / scale < opts.outer_tol) {
      e.converged = true;
      prev = obj;
      break;
    }
    prev = obj;
  }
  e.objective = prev;
  return e;
}

Estimate onoff_estimate(const std::pair<CMat, CMat>& y_on,
                        const std::pair<CMat, CMat>& y_off,
                        const SolverOptions& opts) {
  opts.validate();
  const CMat& y_ab_on = y_on.first;
  const CMat& y_ba_on = y_on.second;
  const CMat& y_ab_off = y_off.first;
  const CMat& y_ba_off = y_off.second;

  Estimate e;
  e.h_hat = y_ab_off;
  e.z_factor = rank_one_approx(y_ab_on - y_ab_off);
  AbFitResult ab = alternating_projection_ab(e.h_hat, y_ba_off, opts);
  e.a_hat = ab.a_diag;
  e.b_hat = ab.b_diag;
  e.iterations = ab.iterations;
  e.converged = ab.converged;
  // Y_BA_on - Y_BA_off = gamma A Z^T B in the noise-free model.
  e.gamma_hat = estimate_gamma_closed_form(e.a_hat, e.b_hat, e.z_hat(),
                                           y_ba_on - y_ba_off);
  fix_gauge(e.a_hat, e.b_hat);
  e.objective = ab.objective +
                (y_ba_on - y_ba_off -
                 model_r4(e.a_hat, e.b_hat, e.z_hat(), e.gamma_hat))
                    .squaredNorm();
  return e;
}

}  // namespace repcal
