// Parameter families with dimension-independent difficulty.
//
// Each family is indexed by a direction on the unit sphere and calibrated so
// that difficulty_of() returns the same alpha for every member and every
// dimension. Sweeping such a family isolates the effect of dimension on a
// learner: the optimal error stays Q(alpha / 2) while the learner's error is
// free to drift.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hidim/analytic.hpp"
#include "hidim/estimate.hpp"
#include "hidim/rng.hpp"

namespace hidim {

/// Uniform draw from the unit sphere in dimension d >= 2.
inline Eigen::VectorXd sample_sphere_uniform(int d, SplitMix64& rng) {
  if (d < 2) {
    throw std::invalid_argument("sample_sphere_uniform: d must be >= 2");
  }
  Eigen::VectorXd u(d);
  double norm;
  do {
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    norm = u.norm();
  } while (norm == 0.0);
  return u / norm;
}

// ============================================================================
// Spherical-noise family: means +-h, covariance (2/alpha)^2 * I
// ============================================================================

struct SphereTheta {
  Eigen::VectorXd h;
  double alpha;

  static SphereTheta make(Eigen::VectorXd h, double alpha) {
    if (std::abs(h.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("SphereTheta: direction must be unit length");
    }
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("SphereTheta: alpha must be > 0");
    }
    return SphereTheta{std::move(h), alpha};
  }

  double beta() const noexcept { return 2.0 / alpha; }

  ModelParams to_model() const {
    return ModelParams::make(h, -h, CovarianceModel::spherical(beta()));
  }
};

inline ModelParams theta_sphere(const Eigen::VectorXd& h, double alpha) {
  return SphereTheta::make(h, alpha).to_model();
}

// ============================================================================
// Sensing-aware family: means m1*h and m2*h, covariance with a spike along h
// ============================================================================

/// Collinear means along h with covariance gamma^2 h h^T + beta^2 I. The
/// mean gap |m1 - m2| = alpha * sqrt(gamma^2 + beta^2) cancels the extra
/// noise along h, so difficulty stays at alpha.
struct SensingAwareTheta {
  Eigen::VectorXd h;
  double gamma;
  double beta;
  double midpoint;
  double alpha;

  static SensingAwareTheta make(Eigen::VectorXd h, double gamma, double beta,
                                double alpha, double midpoint = 0.0) {
    if (std::abs(h.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "SensingAwareTheta: direction must be unit length");
    }
    if (gamma < 0.0) {
      throw std::invalid_argument("SensingAwareTheta: gamma must be >= 0");
    }
    if (!(beta > 0.0)) {
      throw std::invalid_argument("SensingAwareTheta: beta must be > 0");
    }
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("SensingAwareTheta: alpha must be > 0");
    }
    return SensingAwareTheta{std::move(h), gamma, beta, midpoint, alpha};
  }

  double gap() const noexcept {
    return alpha * std::sqrt(gamma * gamma + beta * beta);
  }
  double m1() const noexcept { return midpoint + 0.5 * gap(); }
  double m2() const noexcept { return midpoint - 0.5 * gap(); }

  ModelParams to_model() const {
    return ModelParams::make(
        m1() * h, m2() * h,
        CovarianceModel::rank_one_plus_spherical(h, gamma, beta));
  }
};

inline ModelParams theta_sensing_aware(const Eigen::VectorXd& h, double gamma,
                                       double beta, double alpha,
                                       double midpoint = 0.0) {
  return SensingAwareTheta::make(h, gamma, beta, alpha, midpoint).to_model();
}

// ============================================================================
// Sparse directions: unit vectors with a fixed magnitude-decay profile
// ============================================================================

/// Magnitude profile of a sparse unit direction. Exp decays geometrically
/// with ratio a; Poly decays as rank^(-b). Normalizers are chosen so the
/// resulting vector has unit norm for every d.
struct SparsityClass {
  enum class Kind { Exp, Poly };

  Kind kind;
  double rate;  // a for Exp, b for Poly
  int d;

  static SparsityClass exp_class(double a, int d) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("SparsityClass: a must be in (0, 1)");
    }
    if (d < 1) throw std::invalid_argument("SparsityClass: d must be >= 1");
    return SparsityClass{Kind::Exp, a, d};
  }

  static SparsityClass poly_class(double b, int d) {
    if (!(b > 0.5)) {
      throw std::invalid_argument("SparsityClass: b must be > 0.5");
    }
    if (d < 1) throw std::invalid_argument("SparsityClass: d must be >= 1");
    return SparsityClass{Kind::Poly, b, d};
  }

  /// Leading-coefficient normalizer M with |h|_(k) = M * a^k or M * k^(-b).
  double normalizer() const {
    if (kind == Kind::Exp) {
      const double a2 = rate * rate;
      return std::sqrt((1.0 - a2) /
                       (a2 * (1.0 - std::pow(a2, static_cast<double>(d)))));
    }
    double sum = 0.0;
    for (int k = 1; k <= d; ++k) {
      sum += std::pow(static_cast<double>(k), -2.0 * rate);
    }
    return 1.0 / std::sqrt(sum);
  }

  /// Magnitudes in decreasing rank order, k = 1..d.
  Eigen::VectorXd sorted_magnitudes() const {
    const double m = normalizer();
    Eigen::VectorXd mag(d);
    for (int k = 1; k <= d; ++k) {
      mag[k - 1] = kind == Kind::Exp
                       ? m * std::pow(rate, static_cast<double>(k))
                       : m * std::pow(static_cast<double>(k), -rate);
    }
    return mag;
  }
};

/// Unit direction with the class's magnitude profile, random signs, and a
/// random assignment of ranks to coordinates.
inline Eigen::VectorXd make_sparse_h(const SparsityClass& cls,
                                     SplitMix64& rng) {
  const Eigen::VectorXd mag = cls.sorted_magnitudes();
  Eigen::VectorXd h(cls.d);
  for (int i = 0; i < cls.d; ++i) {
    h[i] = rng.rademacher() > 0 ? mag[i] : -mag[i];
  }
  // Fisher-Yates shuffle of the coordinates
  for (int i = cls.d - 1; i > 0; --i) {
    const auto j = static_cast<int>(
        rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(h[i], h[j]);
  }
  h /= h.norm();  // scrub accumulated rounding; profile ratios are unchanged
  return h;
}

}  // namespace hidim
