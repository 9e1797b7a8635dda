// Labeled sample generation.
//
// Datasets are pure functions of (model, n, seed): the label stream and the
// noise stream come from one SplitMix64 sequenced as label, then d noise
// coordinates, per sample. Regenerating with the same arguments is
// bit-identical on any platform with IEEE doubles.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hidim/analytic.hpp"
#include "hidim/paramsets.hpp"
#include "hidim/rng.hpp"

namespace hidim {

struct Dataset {
  Eigen::MatrixXd xs;   // one sample per row
  std::vector<int> ys;  // +1 / -1 labels
  std::string theta_id;
  std::uint64_t seed = 0;

  int n() const noexcept { return static_cast<int>(xs.rows()); }
  Eigen::Index d() const noexcept { return xs.cols(); }
};

/// Draws n labeled samples from the model: y uniform on {+1, -1} and
/// x = mu_y + sqrt(cov) z with z standard normal.
inline Dataset gen_dataset(const ModelParams& theta, int n, std::uint64_t seed,
                           std::string theta_id = {}) {
  if (n < 1) throw std::invalid_argument("gen_dataset: n must be >= 1");
  const Eigen::Index d = theta.d();
  SplitMix64 rng(seed);
  Dataset data;
  data.xs.resize(n, d);
  data.ys.resize(static_cast<std::size_t>(n));
  data.theta_id = std::move(theta_id);
  data.seed = seed;
  Eigen::VectorXd z(d);
  const bool plain = theta.cov.kind() == CovKind::Spherical;
  const double beta = plain ? theta.cov.as_spherical().beta : 0.0;
  for (int i = 0; i < n; ++i) {
    const int y = rng.rademacher();
    data.ys[static_cast<std::size_t>(i)] = y;
    const Eigen::VectorXd& mu = y > 0 ? theta.mu_plus : theta.mu_minus;
    for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
    if (plain) {
      data.xs.row(i) = (mu + beta * z).transpose();
    } else {
      data.xs.row(i) = (mu + cov_sqrt_apply(theta.cov, z)).transpose();
    }
  }
  return data;
}

/// Statistics of the sample-mean direction estimate under a spherical-family
/// model with means +-h. v is the estimation noise (the label-weighted
/// sample mean minus h); w is the cosine between h and h + v, which drives
/// the error of every rule that projects onto the estimated direction.
struct AlignmentStats {
  Eigen::VectorXd v;
  double ht_v = 0.0;
  double v_norm_sq = 0.0;
  double w = 0.0;
};

inline AlignmentStats alignment_statistics(const SphereTheta& theta,
                                           const Dataset& data) {
  if (data.d() != theta.h.size()) {
    throw std::invalid_argument("alignment_statistics: dimension mismatch");
  }
  if (data.n() < 1) {
    throw std::invalid_argument("alignment_statistics: empty dataset");
  }
  AlignmentStats stats;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(data.d());
  for (int i = 0; i < data.n(); ++i) {
    mean += static_cast<double>(data.ys[static_cast<std::size_t>(i)]) *
            data.xs.row(i).transpose();
  }
  mean /= static_cast<double>(data.n());
  stats.v = mean - theta.h;
  stats.ht_v = theta.h.dot(stats.v);
  stats.v_norm_sq = stats.v.squaredNorm();
  const double denom_sq =
      std::fmax(1.0 + 2.0 * stats.ht_v + stats.v_norm_sq, 0.0);
  stats.w = denom_sq > 0.0 ? (1.0 + stats.ht_v) / std::sqrt(denom_sq) : 0.0;
  return stats;
}

/// Debug dump: a d,n,seed header block, then one y,x_1..x_d row per sample.
/// Values print with enough digits to round-trip exactly.
inline void write_dataset_csv(const Dataset& data, std::ostream& out) {
  char buf[40];
  out << "d,n,seed\n"
      << data.d() << ',' << data.n() << ',' << data.seed << '\n';
  for (int i = 0; i < data.n(); ++i) {
    out << data.ys[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.xs(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace hidim
