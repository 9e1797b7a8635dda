// Closed-form layer for two-class Gaussian models.
//
// A model is a pair of class means with a shared covariance. Everything a
// simulation needs from the model is available here in closed form: the
// Gaussian tail function, whitening and covariance square roots (with
// structure-aware fast paths), the optimal rule and its exact error, and
// the variance of Gaussian quadratic forms used to cross-check sampled
// moments.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "hidim/rng.hpp"

namespace hidim {

// ============================================================================
// Gaussian tail
// ============================================================================

/// Upper tail of the standard normal, Q(t) = P(Z > t).
inline double q_function(double t) {
  if (std::isnan(t)) throw std::domain_error("q_function: NaN argument");
  return 0.5 * std::erfc(t * 0.7071067811865475244);
}

// ============================================================================
// Covariance models
// ============================================================================

/// beta^2 * I, any dimension.
struct SphericalCov {
  double beta;
};

/// gamma^2 * h h^T + beta^2 * I with a unit spike direction h.
struct RankOneCov {
  Eigen::VectorXd h;
  double gamma;
  double beta;
};

/// Arbitrary symmetric positive semi-definite matrix, stored with its
/// eigendecomposition so repeated whitening is a pair of matrix products.
struct DenseCov {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd eigvecs;
  Eigen::VectorXd eigvals;  // ascending, clamped to be >= 0
};

enum class CovKind { Spherical, RankOnePlusSpherical, Dense };

/// Shared covariance of the two classes. Construct through the factories,
/// which validate shape constraints once; all later operations may assume
/// a well-formed model.
class CovarianceModel {
 public:
  static CovarianceModel spherical(double beta) {
    if (!(beta > 0.0)) {
      throw std::invalid_argument("CovarianceModel: beta must be > 0");
    }
    return CovarianceModel(SphericalCov{beta});
  }

  static CovarianceModel rank_one_plus_spherical(const Eigen::VectorXd& h,
                                                 double gamma, double beta) {
    if (std::abs(h.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "CovarianceModel: spike direction must be unit length");
    }
    if (gamma < 0.0) {
      throw std::invalid_argument("CovarianceModel: gamma must be >= 0");
    }
    if (!(beta > 0.0)) {
      throw std::invalid_argument("CovarianceModel: beta must be > 0");
    }
    return CovarianceModel(RankOneCov{h, gamma, beta});
  }

  static CovarianceModel dense(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
      throw std::invalid_argument("CovarianceModel: matrix must be square");
    }
    const double scale = sigma.cwiseAbs().maxCoeff();
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1.0)) {
      throw std::invalid_argument("CovarianceModel: matrix is not symmetric");
    }
    Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("CovarianceModel: eigendecomposition failed");
    }
    Eigen::VectorXd vals = es.eigenvalues();
    const double lam_max = vals.maxCoeff();
    if (vals.minCoeff() < -1e-10 * std::max(lam_max, 0.0)) {
      throw std::invalid_argument(
          "CovarianceModel: matrix is not positive semi-definite");
    }
    vals = vals.cwiseMax(0.0);
    return CovarianceModel(DenseCov{sym, es.eigenvectors(), vals});
  }

  CovKind kind() const noexcept {
    if (std::holds_alternative<SphericalCov>(rep_)) return CovKind::Spherical;
    if (std::holds_alternative<RankOneCov>(rep_)) {
      return CovKind::RankOnePlusSpherical;
    }
    return CovKind::Dense;
  }

  /// Dimension pinned by the representation; -1 for spherical (any).
  Eigen::Index dim() const noexcept {
    if (const auto* r = std::get_if<RankOneCov>(&rep_)) return r->h.size();
    if (const auto* d = std::get_if<DenseCov>(&rep_)) return d->sigma.rows();
    return -1;
  }

  const SphericalCov& as_spherical() const {
    return std::get<SphericalCov>(rep_);
  }
  const RankOneCov& as_rank_one() const { return std::get<RankOneCov>(rep_); }
  const DenseCov& as_dense() const { return std::get<DenseCov>(rep_); }

  /// Materializes the full d x d matrix (diagnostics and oracles only).
  Eigen::MatrixXd dense_matrix(Eigen::Index d) const {
    switch (kind()) {
      case CovKind::Spherical: {
        const double b = as_spherical().beta;
        return b * b * Eigen::MatrixXd::Identity(d, d);
      }
      case CovKind::RankOnePlusSpherical: {
        const auto& r = as_rank_one();
        check_dim(r.h.size(), d);
        return r.gamma * r.gamma * (r.h * r.h.transpose()) +
               r.beta * r.beta * Eigen::MatrixXd::Identity(d, d);
      }
      case CovKind::Dense:
      default: {
        check_dim(as_dense().sigma.rows(), d);
        return as_dense().sigma;
      }
    }
  }

  static void check_dim(Eigen::Index have, Eigen::Index want) {
    if (have != want) {
      throw std::invalid_argument(
          "CovarianceModel: dimension mismatch (model " +
          std::to_string(have) + ", argument " + std::to_string(want) + ")");
    }
  }

 private:
  using Rep = std::variant<SphericalCov, RankOneCov, DenseCov>;
  explicit CovarianceModel(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Applies the whitening map (pseudo-inverse square root of the covariance)
/// to a vector. Dense models drop eigendirections with eigenvalue below
/// 1e-10 times the largest, so near-singular covariances whiten onto their
/// effective support.
inline Eigen::VectorXd whiten_apply(const CovarianceModel& cov,
                                    const Eigen::VectorXd& v) {
  switch (cov.kind()) {
    case CovKind::Spherical:
      return v / cov.as_spherical().beta;
    case CovKind::RankOnePlusSpherical: {
      const auto& r = cov.as_rank_one();
      CovarianceModel::check_dim(r.h.size(), v.size());
      // (gamma^2 h h^T + beta^2 I)^{-1/2} acts as 1/sqrt(gamma^2 + beta^2)
      // along h and 1/beta on its complement
      const double shrink =
          r.beta / std::sqrt(r.beta * r.beta + r.gamma * r.gamma) - 1.0;
      return (v + shrink * r.h.dot(v) * r.h) / r.beta;
    }
    case CovKind::Dense:
    default: {
      const auto& d = cov.as_dense();
      CovarianceModel::check_dim(d.sigma.rows(), v.size());
      const double cut = 1e-10 * d.eigvals.maxCoeff();
      Eigen::VectorXd coef = d.eigvecs.transpose() * v;
      for (Eigen::Index i = 0; i < coef.size(); ++i) {
        coef[i] = d.eigvals[i] > cut ? coef[i] / std::sqrt(d.eigvals[i]) : 0.0;
      }
      return d.eigvecs * coef;
    }
  }
}

/// Applies the covariance square root; maps standard normal vectors to
/// noise with the model covariance.
inline Eigen::VectorXd cov_sqrt_apply(const CovarianceModel& cov,
                                      const Eigen::VectorXd& z) {
  switch (cov.kind()) {
    case CovKind::Spherical:
      return cov.as_spherical().beta * z;
    case CovKind::RankOnePlusSpherical: {
      const auto& r = cov.as_rank_one();
      CovarianceModel::check_dim(r.h.size(), z.size());
      const double stretch =
          std::sqrt(r.beta * r.beta + r.gamma * r.gamma) - r.beta;
      return r.beta * z + stretch * r.h.dot(z) * r.h;
    }
    case CovKind::Dense:
    default: {
      const auto& d = cov.as_dense();
      CovarianceModel::check_dim(d.sigma.rows(), z.size());
      Eigen::VectorXd coef = d.eigvecs.transpose() * z;
      coef.array() *= d.eigvals.array().sqrt();
      return d.eigvecs * coef;
    }
  }
}

// ============================================================================
// Two-class model and its exact difficulty
// ============================================================================

/// Class-conditional Gaussian pair: labels +1 / -1 carry means mu_plus /
/// mu_minus and share the covariance.
struct ModelParams {
  Eigen::VectorXd mu_plus;
  Eigen::VectorXd mu_minus;
  CovarianceModel cov;

  static ModelParams make(Eigen::VectorXd mu_plus, Eigen::VectorXd mu_minus,
                          CovarianceModel cov) {
    if (mu_plus.size() != mu_minus.size() || mu_plus.size() == 0) {
      throw std::invalid_argument("ModelParams: mean dimensions differ");
    }
    if (cov.dim() >= 0 && cov.dim() != mu_plus.size()) {
      throw std::invalid_argument(
          "ModelParams: covariance dimension does not match the means");
    }
    if (mu_plus == mu_minus) {
      throw std::invalid_argument("ModelParams: class means coincide");
    }
    return ModelParams{std::move(mu_plus), std::move(mu_minus),
                       std::move(cov)};
  }

  Eigen::Index d() const noexcept { return mu_plus.size(); }
  Eigen::VectorXd midpoint() const { return 0.5 * (mu_plus + mu_minus); }
  Eigen::VectorXd delta() const { return mu_plus - mu_minus; }
};

/// Separation alpha (whitened mean gap) and the exact optimal error Q(alpha/2).
struct Difficulty {
  double alpha;
  double bayes_error;
};

/// Computes the model difficulty. The optimal rule errs with probability
/// Q(alpha/2) where alpha is the whitened distance between the class means.
inline Difficulty difficulty_of(const ModelParams& theta) {
  const double alpha = whiten_apply(theta.cov, theta.delta()).norm();
  if (alpha <= 1e-12) {
    throw std::domain_error(
        "difficulty_of: degenerate model, whitened class gap is zero");
  }
  return Difficulty{alpha, q_function(0.5 * alpha)};
}

/// Optimal label for a point under the model: the sign of the whitened
/// inner product between the class gap and the centered point. Ties go to +1.
inline int map_classify(const ModelParams& theta, const Eigen::VectorXd& x) {
  if (x.size() != theta.d()) {
    throw std::invalid_argument("map_classify: point dimension mismatch");
  }
  const double score = whiten_apply(theta.cov, theta.delta())
                           .dot(whiten_apply(theta.cov, x - theta.midpoint()));
  return score >= 0.0 ? 1 : -1;
}

// ============================================================================
// Moment identities
// ============================================================================

/// Exact variance of the quadratic form e^T L e for e ~ N(mu, cov):
/// 2 tr(L S L S) + 4 mu^T L S L mu with S the covariance matrix.
/// L must be symmetric.
inline double gaussian_quadratic_variance(const Eigen::VectorXd& mu,
                                          const CovarianceModel& cov,
                                          const Eigen::MatrixXd& lambda) {
  if (lambda.rows() != lambda.cols() || lambda.rows() != mu.size()) {
    throw std::invalid_argument(
        "gaussian_quadratic_variance: shape mismatch");
  }
  const double scale = lambda.cwiseAbs().maxCoeff();
  const double asym = (lambda - lambda.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1.0)) {
    throw std::domain_error(
        "gaussian_quadratic_variance: matrix must be symmetric");
  }
  const Eigen::MatrixXd sigma = cov.dense_matrix(mu.size());
  const Eigen::MatrixXd ls = lambda * sigma;
  const Eigen::VectorXd lmu = lambda * mu;
  return 2.0 * (ls * ls).trace() + 4.0 * lmu.dot(sigma * lmu);
}

/// Monte Carlo estimate of E[exp(t * u_1)] for u uniform on the unit sphere
/// in dimension d, where u_1 is a single coordinate. Decays in d for fixed
/// t because single coordinates concentrate near zero.
inline double radial_mgf(double t, int d, long samples, SplitMix64& rng) {
  if (!(t >= 0.0)) throw std::invalid_argument("radial_mgf: t must be >= 0");
  if (d < 2) throw std::invalid_argument("radial_mgf: d must be >= 2");
  if (samples < 1) throw std::invalid_argument("radial_mgf: samples >= 1");
  double acc = 0.0;
  Eigen::VectorXd u(d);
  for (long s = 0; s < samples; ++s) {
    double norm_sq;
    do {
      for (int i = 0; i < d; ++i) u[i] = rng.normal();
      norm_sq = u.squaredNorm();
    } while (norm_sq == 0.0);
    acc += std::exp(t * u[0] / std::sqrt(norm_sq));
  }
  return acc / static_cast<double>(samples);
}

}  // namespace hidim
