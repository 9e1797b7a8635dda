// Trainable decision rules.
//
// Every rule except the coin flip reduces to a linear score w . x - offset
// with the sign taken as the label (ties to +1). Trainers that cannot
// produce a direction from the sample (all-zero weight) fall back to the
// constant +1 rule and record the fallback in metadata; trainers that
// cannot run at all (a class absent from the sample) throw UntrainableError
// so the caller can resample.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

#include "hidim/analytic.hpp"
#include "hidim/datagen.hpp"
#include "hidim/rng.hpp"

namespace hidim {

enum class RuleKind {
  BayesOracle,
  MatchedFilter,
  PluginML,
  MLProjection,
  SoftThreshold,
  CoinFlip,
};

inline const char* rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::BayesOracle: return "BayesOracle";
    case RuleKind::MatchedFilter: return "MatchedFilter";
    case RuleKind::PluginML: return "PluginML";
    case RuleKind::MLProjection: return "MLProjection";
    case RuleKind::SoftThreshold: return "SoftThreshold";
    case RuleKind::CoinFlip: return "CoinFlip";
  }
  return "?";
}

/// Training saw a sample no rule of this kind can be fit to.
class UntrainableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainedRule {
  RuleKind kind = RuleKind::MatchedFilter;
  Eigen::VectorXd weight;  // empty for CoinFlip
  double offset = 0.0;
  bool constant_fallback = false;  // degenerate weight, always answer +1
  std::map<std::string, std::string> metadata;
  SplitMix64 coin_rng{0};  // consumed by CoinFlip predictions only
};

/// Label for x under the rule. Non-const: the coin flip advances its stream.
inline int predict(TrainedRule& rule, const Eigen::VectorXd& x) {
  if (rule.kind == RuleKind::CoinFlip) return rule.coin_rng.rademacher();
  if (rule.constant_fallback) return 1;
  if (x.size() != rule.weight.size()) {
    throw std::invalid_argument("predict: point dimension mismatch");
  }
  return rule.weight.dot(x) - rule.offset >= 0.0 ? 1 : -1;
}

namespace detail {

inline Eigen::VectorXd label_vector(const Dataset& data) {
  Eigen::VectorXd y(data.n());
  for (int i = 0; i < data.n(); ++i) {
    y[i] = static_cast<double>(data.ys[static_cast<std::size_t>(i)]);
  }
  return y;
}

inline void apply_fallback_if_degenerate(TrainedRule& rule) {
  if ((rule.weight.array() == 0.0).all()) {
    rule.constant_fallback = true;
    rule.metadata["fallback"] = "zero_weight";
  }
}

}  // namespace detail

/// Label-weighted coordinate sum, w = sum_i y_i x_i, no offset. Needs no
/// knowledge of the model at all.
inline TrainedRule train_matched_filter(const Dataset& data) {
  TrainedRule rule;
  rule.kind = RuleKind::MatchedFilter;
  rule.weight = data.xs.transpose() * detail::label_vector(data);
  detail::apply_fallback_if_degenerate(rule);
  return rule;
}

/// Maximum-likelihood direction estimate (the label-weighted sample mean)
/// plugged into the optimal rule for means +-h with noise level beta.
inline TrainedRule train_ml_projection(const Dataset& data, double beta) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("train_ml_projection: beta must be > 0");
  }
  TrainedRule rule;
  rule.kind = RuleKind::MLProjection;
  rule.weight = (2.0 / (beta * beta * data.n())) *
                (data.xs.transpose() * detail::label_vector(data));
  detail::apply_fallback_if_degenerate(rule);
  return rule;
}

/// Direction estimate with soft thresholding at
/// lambda = c * beta * sqrt(2 log(d) / n); coordinates at or below lambda in
/// magnitude are zeroed, the rest shrink toward zero by lambda.
inline TrainedRule train_soft_threshold(const Dataset& data, double beta,
                                        double c = 1.0) {
  if (!(beta > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument(
        "train_soft_threshold: beta and c must be > 0");
  }
  const double lambda =
      c * beta *
      std::sqrt(2.0 * std::log(static_cast<double>(data.d())) / data.n());
  Eigen::VectorXd h_ml =
      (data.xs.transpose() * detail::label_vector(data)) / data.n();
  TrainedRule rule;
  rule.kind = RuleKind::SoftThreshold;
  rule.weight = h_ml.unaryExpr([lambda](double v) {
    const double mag = std::abs(v) - lambda;
    return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  });
  rule.metadata["lambda"] = std::to_string(lambda);
  detail::apply_fallback_if_degenerate(rule);
  return rule;
}

/// Covariance handling for the plug-in rule: either the true covariance is
/// known, or it is estimated from the pooled within-class scatter.
struct PooledMl {};
using CovMode = std::variant<CovarianceModel, PooledMl>;

/// Plug-in rule: class means estimated from the sample, covariance per
/// cov_mode, then the optimal-rule formula applied to the estimates.
/// Throws UntrainableError when a class is absent (or n < 2 under PooledMl).
inline TrainedRule train_plugin_ml(const Dataset& data,
                                   const CovMode& cov_mode) {
  const Eigen::Index d = data.d();
  Eigen::VectorXd mu_plus = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mu_minus = Eigen::VectorXd::Zero(d);
  int n_plus = 0;
  int n_minus = 0;
  for (int i = 0; i < data.n(); ++i) {
    if (data.ys[static_cast<std::size_t>(i)] > 0) {
      mu_plus += data.xs.row(i).transpose();
      ++n_plus;
    } else {
      mu_minus += data.xs.row(i).transpose();
      ++n_minus;
    }
  }
  if (n_plus == 0 || n_minus == 0) {
    throw UntrainableError("train_plugin_ml: a class is absent from the sample");
  }
  mu_plus /= n_plus;
  mu_minus /= n_minus;
  const Eigen::VectorXd delta_hat = mu_plus - mu_minus;
  const Eigen::VectorXd mid_hat = 0.5 * (mu_plus + mu_minus);

  TrainedRule rule;
  rule.kind = RuleKind::PluginML;
  if (const auto* cov = std::get_if<CovarianceModel>(&cov_mode)) {
    rule.metadata["cov_mode"] = "known";
    rule.weight = whiten_apply(*cov, whiten_apply(*cov, delta_hat));
  } else {
    if (data.n() < 2) {
      throw UntrainableError("train_plugin_ml: pooled covariance needs n >= 2");
    }
    rule.metadata["cov_mode"] = "pooled_ml";
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < data.n(); ++i) {
      const Eigen::VectorXd r =
          data.xs.row(i).transpose() -
          (data.ys[static_cast<std::size_t>(i)] > 0 ? mu_plus : mu_minus);
      scatter.noalias() += r * r.transpose();
    }
    scatter /= static_cast<double>(data.n());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
    const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    const double cut = 1e-10 * vals.maxCoeff();
    Eigen::VectorXd coef = es.eigenvectors().transpose() * delta_hat;
    for (Eigen::Index i = 0; i < coef.size(); ++i) {
      coef[i] = vals[i] > cut ? coef[i] / vals[i] : 0.0;
    }
    rule.weight = es.eigenvectors() * coef;
  }
  rule.offset = rule.weight.dot(mid_hat);
  detail::apply_fallback_if_degenerate(rule);
  return rule;
}

/// The optimal rule itself, built from the true model.
inline TrainedRule train_bayes_oracle(const ModelParams& theta) {
  TrainedRule rule;
  rule.kind = RuleKind::BayesOracle;
  rule.weight = whiten_apply(theta.cov, whiten_apply(theta.cov, theta.delta()));
  rule.offset = rule.weight.dot(theta.midpoint());
  detail::apply_fallback_if_degenerate(rule);
  return rule;
}

/// Ignores the data and answers with an unbiased coin.
inline TrainedRule train_coin_flip(std::uint64_t seed) {
  TrainedRule rule;
  rule.kind = RuleKind::CoinFlip;
  rule.coin_rng = SplitMix64(seed);
  return rule;
}

}  // namespace hidim
