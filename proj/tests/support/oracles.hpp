// Independent oracles for the test suite.
//
// Everything here recomputes expected values through a different route than
// the library: numeric quadrature instead of erfc, a direct gamma sampler
// for chi-square noise, and a two-scalar reduction of the matched-filter
// error instead of the full d-dimensional simulation.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "hidim/rng.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature
// ---------------------------------------------------------------------------

inline double simpson_slice(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double fa, double fm,
                               double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_slice(f, a, m, fa, flm, fm);
  const double right = simpson_slice(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb,
                          simpson_slice(f, a, b, fa, fm, fb), tol, 40);
}

/// Standard normal upper tail by quadrature over [t, t+45] (the remainder
/// beyond 45 sigma is below 1e-300).
inline double q_by_quadrature(double t) {
  const auto phi = [](double s) {
    return 0.3989422804014326779 * std::exp(-0.5 * s * s);
  };
  return integrate(phi, t, t + 45.0, 1e-14);
}

// ---------------------------------------------------------------------------
// Gamma / chi-square sampling (Marsaglia-Tsang)
// ---------------------------------------------------------------------------

inline double gamma_draw(double shape, hidim::SplitMix64& rng) {
  if (shape < 1.0) throw std::invalid_argument("gamma_draw: shape >= 1 only");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double chisq_draw(int dof, hidim::SplitMix64& rng) {
  if (dof < 2) throw std::invalid_argument("chisq_draw: dof >= 2 only");
  return 2.0 * gamma_draw(0.5 * dof, rng);
}

// ---------------------------------------------------------------------------
// Semi-analytic matched-filter error
// ---------------------------------------------------------------------------

struct MeanSe {
  double mean;
  double se;
};

/// Expected error of the direction rule learned from n samples in dimension
/// d with noise level beta, on the family with unit means +-h. Conditional
/// on the estimation noise v, the error is Q((1 + h.v) / (beta * |h + v|)),
/// and (h.v, |v|^2) reduce to one Gaussian and one chi-square scalar:
/// h.v ~ N(0, beta^2/n) and |v|^2 = (h.v)^2 + (beta^2/n) * chisq(d - 1).
/// Only these two scalars are simulated; no d-vector is ever drawn.
inline MeanSe matched_filter_error_oracle(int d, int n, double beta,
                                          long draws, std::uint64_t seed) {
  hidim::SplitMix64 rng(seed);
  const double s = beta / std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < draws; ++i) {
    const double hv = s * rng.normal();
    const double vsq = hv * hv + s * s * chisq_draw(d - 1, rng);
    const double denom = beta * std::sqrt(1.0 + 2.0 * hv + vsq);
    const double q = 0.5 * std::erfc((1.0 + hv) / denom * 0.70710678118654752);
    sum += q;
    sum_sq += q * q;
  }
  const double mean = sum / static_cast<double>(draws);
  const double var =
      std::fmax(sum_sq / static_cast<double>(draws) - mean * mean, 0.0);
  return MeanSe{mean, std::sqrt(var / static_cast<double>(draws))};
}

// ---------------------------------------------------------------------------
// Dense-matrix reference transforms
// ---------------------------------------------------------------------------

/// Pseudo-inverse square root assembled as an explicit matrix.
inline Eigen::MatrixXd whitening_matrix(const Eigen::MatrixXd& sigma,
                                        double rel_cut = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  const double cut = rel_cut * vals.maxCoeff();
  Eigen::VectorXd inv(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    inv[i] = vals[i] > cut ? 1.0 / std::sqrt(vals[i]) : 0.0;
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd sqrt_matrix(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace oracles
