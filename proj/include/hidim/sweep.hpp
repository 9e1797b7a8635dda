// Monte Carlo sweeps over dimension.
//
// A sweep walks a dimension grid, draws K parameter-set members per
// dimension, trains each configured rule on fresh samples, and estimates
// held-out error with Wilson intervals. All randomness is derived from the
// master seed through fixed fold paths, so a sweep's output is a pure
// function of its plan: thread count and scheduling cannot change a digit.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hidim/analytic.hpp"
#include "hidim/classifiers.hpp"
#include "hidim/datagen.hpp"
#include "hidim/estimate.hpp"
#include "hidim/parallel.hpp"
#include "hidim/paramsets.hpp"
#include "hidim/rng.hpp"

namespace hidim {

// ============================================================================
// Plan
// ============================================================================

/// n(d) = ceil(d^gamma) with 0 < gamma < 1: more data in higher dimension,
/// but sublinearly.
struct PowerRule {
  double gamma;
};
struct FixedRule {
  int n;
};
/// One n per grid entry, aligned by position.
struct ExplicitRule {
  std::vector<int> ns;
};
using SampleSizeRule = std::variant<PowerRule, FixedRule, ExplicitRule>;

enum class FamilyKind { Sphere, SensingAware, SparseExp, SparsePoly };

/// A constant-difficulty family plus the scalars needed to draw members.
/// decay is the geometric ratio (SparseExp) or the polynomial exponent
/// (SparsePoly); gamma/beta/midpoint configure the sensing-aware covariance
/// and are ignored by the other kinds.
struct Family {
  FamilyKind kind = FamilyKind::Sphere;
  double alpha = 2.0;
  double decay = 0.5;
  double gamma = 1.0;
  double beta = 1.0;
  double midpoint = 0.0;

  std::string name() const {
    switch (kind) {
      case FamilyKind::Sphere: return "sphere";
      case FamilyKind::SensingAware: return "sensing_aware";
      case FamilyKind::SparseExp: return "sparse_exp";
      case FamilyKind::SparsePoly: return "sparse_poly";
    }
    return "?";
  }

  /// Isotropic noise level seen by rules that assume spherical noise.
  double noise_beta() const noexcept {
    return kind == FamilyKind::SensingAware ? beta : 2.0 / alpha;
  }

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("family: alpha must be > 0");
    switch (kind) {
      case FamilyKind::SparseExp:
        if (!(decay > 0.0 && decay < 1.0)) {
          throw std::invalid_argument("family: decay must be in (0, 1)");
        }
        break;
      case FamilyKind::SparsePoly:
        if (!(decay > 0.5)) {
          throw std::invalid_argument("family: decay must be > 0.5");
        }
        break;
      case FamilyKind::SensingAware:
        if (gamma < 0.0) {
          throw std::invalid_argument("family: gamma must be >= 0");
        }
        if (!(beta > 0.0)) {
          throw std::invalid_argument("family: beta must be > 0");
        }
        break;
      case FamilyKind::Sphere:
        break;
    }
  }

  ModelParams draw(int d, SplitMix64& rng) const {
    switch (kind) {
      case FamilyKind::Sphere:
        return theta_sphere(sample_sphere_uniform(d, rng), alpha);
      case FamilyKind::SensingAware:
        return theta_sensing_aware(sample_sphere_uniform(d, rng), gamma, beta,
                                   alpha, midpoint);
      case FamilyKind::SparseExp:
        return theta_sphere(
            make_sparse_h(SparsityClass::exp_class(decay, d), rng), alpha);
      case FamilyKind::SparsePoly:
      default:
        return theta_sphere(
            make_sparse_h(SparsityClass::poly_class(decay, d), rng), alpha);
    }
  }
};

enum class ClassifierKind {
  BayesOracle,
  MatchedFilter,
  PluginKnown,
  PluginPooled,
  MLProjection,
  SoftThreshold,
  CoinFlip,
};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::MatchedFilter;
  double soft_c = 1.0;  // SoftThreshold multiplier

  std::string name() const {
    switch (kind) {
      case ClassifierKind::BayesOracle: return "bayes_oracle";
      case ClassifierKind::MatchedFilter: return "matched_filter";
      case ClassifierKind::PluginKnown: return "plugin_known";
      case ClassifierKind::PluginPooled: return "plugin_pooled";
      case ClassifierKind::MLProjection: return "ml_projection";
      case ClassifierKind::SoftThreshold: return "soft_threshold";
      case ClassifierKind::CoinFlip: return "coin_flip";
    }
    return "?";
  }
};

struct SweepPlan {
  std::vector<int> d_grid;
  SampleSizeRule n_rule = FixedRule{10};
  Family family;
  std::vector<ClassifierSpec> classifiers;
  int theta_draws = 8;
  int replicates_per_theta = 0;  // 0 -> sized so pooled trials reach 1e5
  int test_points = 512;
  std::uint64_t master_seed = 1;

  int effective_replicates() const {
    if (replicates_per_theta > 0) return replicates_per_theta;
    const double pooled = 1e5;
    const double per_rep =
        static_cast<double>(test_points) * static_cast<double>(theta_draws);
    return std::max(1, static_cast<int>(std::ceil(pooled / per_rep)));
  }

  int n_for(std::size_t d_index) const {
    const int d = d_grid.at(d_index);
    if (const auto* p = std::get_if<PowerRule>(&n_rule)) {
      // nudge below the ceiling so d^gamma landing on an integer (within
      // floating-point wobble) is not bumped up a step
      return static_cast<int>(
          std::ceil(std::pow(static_cast<double>(d), p->gamma) - 1e-9));
    }
    if (const auto* f = std::get_if<FixedRule>(&n_rule)) return f->n;
    return std::get<ExplicitRule>(n_rule).ns.at(d_index);
  }

  void validate() const {
    if (d_grid.empty()) throw std::invalid_argument("plan: empty d_grid");
    int prev = 1;
    for (int d : d_grid) {
      if (d < 2) throw std::invalid_argument("plan: every d must be >= 2");
      if (d <= prev && prev != 1) {
        throw std::invalid_argument("plan: d_grid must be strictly increasing");
      }
      prev = d;
    }
    if (const auto* p = std::get_if<PowerRule>(&n_rule)) {
      if (!(p->gamma > 0.0 && p->gamma < 1.0)) {
        throw std::invalid_argument("plan: power rule needs gamma in (0, 1)");
      }
    } else if (const auto* f = std::get_if<FixedRule>(&n_rule)) {
      if (f->n < 1) throw std::invalid_argument("plan: fixed n must be >= 1");
    } else {
      const auto& e = std::get<ExplicitRule>(n_rule);
      if (e.ns.size() != d_grid.size()) {
        throw std::invalid_argument(
            "plan: explicit n list must match d_grid length");
      }
      for (int n : e.ns) {
        if (n < 1) throw std::invalid_argument("plan: every n must be >= 1");
      }
    }
    family.validate();
    if (classifiers.empty()) {
      throw std::invalid_argument("plan: no classifiers configured");
    }
    for (const auto& c : classifiers) {
      if (c.kind == ClassifierKind::SoftThreshold && !(c.soft_c > 0.0)) {
        throw std::invalid_argument("plan: soft threshold c must be > 0");
      }
    }
    if (theta_draws < 1) {
      throw std::invalid_argument("plan: theta_draws must be >= 1");
    }
    if (test_points < 1) {
      throw std::invalid_argument("plan: test_points must be >= 1");
    }
    if (replicates_per_theta < 0) {
      throw std::invalid_argument("plan: replicates_per_theta must be >= 0");
    }
    if (static_cast<long>(effective_replicates()) * test_points < 100) {
      throw std::invalid_argument(
          "plan: fewer than 100 trials per cell, estimate would be noise");
    }
  }
};

// ============================================================================
// Single-cell estimation
// ============================================================================

/// Builds a rule from a dataset; rule_seed feeds rules that randomize.
using Trainer = std::function<TrainedRule(const Dataset&, std::uint64_t)>;

inline Trainer make_trainer(const ClassifierSpec& spec,
                            const ModelParams& theta, double noise_beta) {
  switch (spec.kind) {
    case ClassifierKind::BayesOracle: {
      TrainedRule rule = train_bayes_oracle(theta);
      return [rule](const Dataset&, std::uint64_t) { return rule; };
    }
    case ClassifierKind::MatchedFilter:
      return [](const Dataset& data, std::uint64_t) {
        return train_matched_filter(data);
      };
    case ClassifierKind::PluginKnown: {
      CovarianceModel cov = theta.cov;
      return [cov](const Dataset& data, std::uint64_t) {
        return train_plugin_ml(data, CovMode{cov});
      };
    }
    case ClassifierKind::PluginPooled:
      return [](const Dataset& data, std::uint64_t) {
        return train_plugin_ml(data, CovMode{PooledMl{}});
      };
    case ClassifierKind::MLProjection:
      return [noise_beta](const Dataset& data, std::uint64_t) {
        return train_ml_projection(data, noise_beta);
      };
    case ClassifierKind::SoftThreshold: {
      const double c = spec.soft_c;
      return [noise_beta, c](const Dataset& data, std::uint64_t) {
        return train_soft_threshold(data, noise_beta, c);
      };
    }
    case ClassifierKind::CoinFlip:
    default:
      return [](const Dataset&, std::uint64_t rule_seed) {
        return train_coin_flip(rule_seed);
      };
  }
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char ch : s) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

/// Streams labeled test points without materializing a dataset. Structure-
/// aware so the spherical and rank-one paths allocate nothing per point.
class PointSampler {
 public:
  explicit PointSampler(const ModelParams& theta)
      : theta_(theta), kind_(theta.cov.kind()), z_(theta.d()) {
    if (kind_ == CovKind::Spherical) {
      beta_ = theta.cov.as_spherical().beta;
    } else if (kind_ == CovKind::RankOnePlusSpherical) {
      const auto& r = theta.cov.as_rank_one();
      beta_ = r.beta;
      stretch_ = std::sqrt(r.beta * r.beta + r.gamma * r.gamma) - r.beta;
    }
  }

  /// Fills x with one sample and returns its label.
  int sample(SplitMix64& rng, Eigen::VectorXd& x) {
    const int y = rng.rademacher();
    const Eigen::VectorXd& mu = y > 0 ? theta_.mu_plus : theta_.mu_minus;
    const Eigen::Index d = theta_.d();
    switch (kind_) {
      case CovKind::Spherical:
        for (Eigen::Index j = 0; j < d; ++j) {
          x[j] = mu[j] + beta_ * rng.normal();
        }
        break;
      case CovKind::RankOnePlusSpherical: {
        for (Eigen::Index j = 0; j < d; ++j) z_[j] = rng.normal();
        const double along = stretch_ * theta_.cov.as_rank_one().h.dot(z_);
        x = mu + beta_ * z_ + along * theta_.cov.as_rank_one().h;
        break;
      }
      case CovKind::Dense:
      default:
        for (Eigen::Index j = 0; j < d; ++j) z_[j] = rng.normal();
        x = mu + cov_sqrt_apply(theta_.cov, z_);
        break;
    }
    return y;
  }

 private:
  const ModelParams& theta_;
  CovKind kind_;
  Eigen::VectorXd z_;
  double beta_ = 0.0;
  double stretch_ = 0.0;
};

struct ReplicateOutcome {
  long errors = 0;
  long trials = 0;
  long resamples = 0;
  bool failed = false;
};

/// finalize() that tolerates the everything-failed case: the estimate is
/// degenerate (no trials) but still carries the failure counts, so the
/// invalid flag and the CSV row survive.
inline ErrorEstimate finalize_lenient(const ErrorAccumulator& acc) {
  if (acc.trials > 0) return acc.finalize();
  ErrorEstimate e;
  e.resample_events = acc.resample_events;
  e.replicates = acc.replicates;
  e.failed_replicates = acc.failed_replicates;
  return e;
}

}  // namespace detail

/// Datasets redrawn per replicate before training is declared failed.
inline constexpr int kMaxTrainAttempts = 64;

/// Held-out error of `trainer` on the model: R replicates of (train on n
/// fresh samples, score m fresh test points). A replicate whose training
/// sample is untrainable is redrawn with the next derived seed, counting a
/// resample event; a replicate that exhausts its attempts is dropped and
/// counted as failed. Deterministic in (seed); threads only split work.
inline ErrorEstimate estimate_error(const Trainer& trainer,
                                    const ModelParams& theta, int n, int m,
                                    int replicates, std::uint64_t seed,
                                    int threads = 1) {
  if (n < 1 || m < 1 || replicates < 1) {
    throw std::invalid_argument("estimate_error: n, m, replicates must be >= 1");
  }
  if (static_cast<long>(m) * replicates < 100) {
    throw std::invalid_argument(
        "estimate_error: fewer than 100 trials, estimate would be noise");
  }
  std::vector<detail::ReplicateOutcome> slots(
      static_cast<std::size_t>(replicates));
  parallel_for(
      static_cast<std::size_t>(replicates), threads,
      [&](std::size_t r) {
        detail::ReplicateOutcome& out = slots[r];
        const std::uint64_t rep_seed = fold_seed(seed, r);
        TrainedRule rule;
        std::uint64_t attempt_seed = 0;
        bool trained = false;
        for (int attempt = 0; attempt < kMaxTrainAttempts; ++attempt) {
          attempt_seed =
              fold_seed(rep_seed, static_cast<std::uint64_t>(attempt));
          const Dataset data =
              gen_dataset(theta, n, fold_seed(attempt_seed, 1));
          try {
            rule = trainer(data, fold_seed(attempt_seed, 3));
            trained = true;
            break;
          } catch (const UntrainableError&) {
            out.resamples += 1;
          }
        }
        if (!trained) {
          out.failed = true;
          return;
        }
        SplitMix64 test_rng(fold_seed(attempt_seed, 2));
        if (rule.kind == RuleKind::CoinFlip) {
          // the rule never looks at the point, so skip generating it
          for (int t = 0; t < m; ++t) {
            const int y = test_rng.rademacher();
            if (rule.coin_rng.rademacher() != y) out.errors += 1;
          }
        } else {
          detail::PointSampler sampler(theta);
          Eigen::VectorXd x(theta.d());
          for (int t = 0; t < m; ++t) {
            const int y = sampler.sample(test_rng, x);
            if (predict(rule, x) != y) out.errors += 1;
          }
        }
        out.trials = m;
      });
  ErrorAccumulator acc;
  for (const auto& out : slots) {
    acc.resample_events += out.resamples;
    if (out.failed) {
      acc.failed_replicates += 1;
    } else {
      acc.add_replicate(out.errors, out.trials);
    }
  }
  return detail::finalize_lenient(acc);
}

// ============================================================================
// Full sweep
// ============================================================================

struct SweepRow {
  int d = 0;
  int n = 0;
  std::string family;
  std::string classifier;
  std::string theta;  // "0".."K-1", "max", or "mean"
  ErrorEstimate est;
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool any_invalid() const {
    for (const auto& row : rows) {
      if (row.est.invalid()) return true;
    }
    return false;
  }
};

inline SweepResult run_sweep(const SweepPlan& plan, int threads = 1) {
  plan.validate();
  using clock = std::chrono::steady_clock;
  const int K = plan.theta_draws;
  const int R = plan.effective_replicates();
  const int m = plan.test_points;
  SweepResult result;
  for (std::size_t di = 0; di < plan.d_grid.size(); ++di) {
    const int d = plan.d_grid[di];
    const int n = plan.n_for(di);
    // one shared set of parameter draws per dimension, so every classifier
    // is scored on identical members
    const std::uint64_t d_seed = fold_seed(plan.master_seed, di);
    std::vector<ModelParams> thetas;
    thetas.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      SplitMix64 theta_rng(
          fold_seed(fold_seed(d_seed, 0x7e7a), static_cast<std::uint64_t>(k)));
      thetas.push_back(plan.family.draw(d, theta_rng));
    }
    for (std::size_t ci = 0; ci < plan.classifiers.size(); ++ci) {
      const ClassifierSpec& spec = plan.classifiers[ci];
      // seed by classifier identity, not list position: adding or
      // reordering classifiers cannot perturb another classifier's cells
      const std::uint64_t cell_seed = fold_seed(
          fold_seed(d_seed, 0xc1a5), detail::fnv1a(spec.name()));
      ErrorAccumulator pooled;
      double cell_ms = 0.0;
      std::size_t best = 0;
      std::vector<SweepRow> theta_rows;
      theta_rows.reserve(static_cast<std::size_t>(K));
      for (int k = 0; k < K; ++k) {
        const Trainer trainer =
            make_trainer(spec, thetas[static_cast<std::size_t>(k)],
                         plan.family.noise_beta());
        const auto t0 = clock::now();
        const ErrorEstimate est = estimate_error(
            trainer, thetas[static_cast<std::size_t>(k)], n, m, R,
            fold_seed(cell_seed, static_cast<std::uint64_t>(k)), threads);
        const double ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0)
                .count();
        cell_ms += ms;
        SweepRow row;
        row.d = d;
        row.n = n;
        row.family = plan.family.name();
        row.classifier = spec.name();
        row.theta = std::to_string(k);
        row.est = est;
        row.wall_ms = ms;
        theta_rows.push_back(std::move(row));
        if (est.p_hat > theta_rows[best].est.p_hat) {
          best = static_cast<std::size_t>(k);
        }
        ErrorAccumulator one;
        one.errors = est.errors;
        one.trials = est.trials;
        one.resample_events = est.resample_events;
        one.replicates = est.replicates;
        one.failed_replicates = est.failed_replicates;
        one.rep_sum = est.rep_sum;
        one.rep_sum_sq = est.rep_sum_sq;
        pooled.merge(one);
      }
      SweepRow max_row = theta_rows[best];
      max_row.theta = "max";
      max_row.wall_ms = cell_ms;
      SweepRow mean_row = theta_rows[0];
      mean_row.theta = "mean";
      mean_row.est = detail::finalize_lenient(pooled);
      mean_row.wall_ms = cell_ms;
      for (auto& row : theta_rows) result.rows.push_back(std::move(row));
      result.rows.push_back(std::move(max_row));
      result.rows.push_back(std::move(mean_row));
    }
  }
  return result;
}

// ============================================================================
// Moment diagnostics for the direction-estimate statistics
// ============================================================================

struct DiagnosticLine {
  std::string quantity;
  double expected = 0.0;
  double observed = 0.0;
  double rel_err = 0.0;  // absolute deviation when the target is zero
  double tolerance = 0.0;
  bool absolute = false;
  bool pass = false;
};

struct MomentReport {
  int d = 0;
  int n = 0;
  double beta = 0.0;
  long replicates = 0;
  std::vector<DiagnosticLine> lines;
  double w_q05 = 0.0;
  double w_median = 0.0;
  double w_q95 = 0.0;

  bool all_pass() const {
    for (const auto& line : lines) {
      if (!line.pass) return false;
    }
    return true;
  }
};

/// Compares sampled moments of the alignment statistics against their
/// closed forms. With v the estimation noise of the label-weighted sample
/// mean (dimension d, sample size n, noise level beta):
///   E[h.v]                   = 0
///   var(h.v)                 = beta^2 / n
///   E[1 + 2 h.v + |v|^2]     = 1 + beta^2 d / n
///   var(1 + 2 h.v + |v|^2)   = 4 beta^2 / n + 2 beta^4 d / n^2
///   E[|v|^4]                 = 2 beta^4 d / n^2 + beta^4 d^2 / n^2
/// The zero-mean line passes on absolute deviation (5 standard errors);
/// the rest use fixed relative tolerances (5%, 1%, 10%, 5%), generous
/// against Monte Carlo noise at the replicate counts the CLI accepts.
inline MomentReport moment_diagnostics(int d, int n, double beta,
                                       long replicates, std::uint64_t seed,
                                       int threads = 1) {
  if (d < 2 || n < 1 || !(beta > 0.0) || replicates < 1) {
    throw std::invalid_argument("moment_diagnostics: bad arguments");
  }
  const auto count = static_cast<std::size_t>(replicates);
  std::vector<double> ht(count);
  std::vector<double> denom(count);
  std::vector<double> vsq(count);
  std::vector<double> w(count);
  const double alpha = 2.0 / beta;  // spherical family with this noise level
  parallel_for(count, threads, [&](std::size_t r) {
    SplitMix64 h_rng(fold_seed(fold_seed(seed, r), 1));
    const SphereTheta theta =
        SphereTheta::make(sample_sphere_uniform(d, h_rng), alpha);
    const Dataset data =
        gen_dataset(theta.to_model(), n, fold_seed(fold_seed(seed, r), 2));
    const AlignmentStats stats = alignment_statistics(theta, data);
    ht[r] = stats.ht_v;
    denom[r] = 1.0 + 2.0 * stats.ht_v + stats.v_norm_sq;
    vsq[r] = stats.v_norm_sq;
    w[r] = stats.w;
  });
  const double rn = static_cast<double>(replicates);
  double ht_sum = 0.0, ht_sq = 0.0, den_sum = 0.0, den_sq = 0.0, v4_sum = 0.0;
  for (std::size_t r = 0; r < count; ++r) {
    ht_sum += ht[r];
    ht_sq += ht[r] * ht[r];
    den_sum += denom[r];
    den_sq += denom[r] * denom[r];
    v4_sum += vsq[r] * vsq[r];
  }
  const double ht_mean = ht_sum / rn;
  const double ht_var = std::fmax(ht_sq / rn - ht_mean * ht_mean, 0.0);
  const double den_mean = den_sum / rn;
  const double den_var = std::fmax(den_sq / rn - den_mean * den_mean, 0.0);
  const double v4_mean = v4_sum / rn;

  const double b2 = beta * beta;
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  MomentReport report;
  report.d = d;
  report.n = n;
  report.beta = beta;
  report.replicates = replicates;
  auto add = [&report](std::string name, double expected, double observed,
                       double tol, bool absolute = false) {
    DiagnosticLine line;
    line.quantity = std::move(name);
    line.expected = expected;
    line.observed = observed;
    line.rel_err = absolute ? std::abs(observed - expected)
                            : std::abs(observed - expected) / std::abs(expected);
    line.tolerance = tol;
    line.absolute = absolute;
    line.pass = line.rel_err <= tol;
    report.lines.push_back(std::move(line));
  };
  add("mean(h.v)", 0.0, ht_mean, 5.0 * beta / std::sqrt(nn * rn), true);
  add("var(h.v)", b2 / nn, ht_var, 0.05);
  add("mean(1+2h.v+|v|^2)", 1.0 + b2 * dd / nn, den_mean, 0.01);
  add("var(1+2h.v+|v|^2)", 4.0 * b2 / nn + 2.0 * b2 * b2 * dd / (nn * nn),
      den_var, 0.10);
  add("mean(|v|^4)",
      2.0 * b2 * b2 * dd / (nn * nn) + b2 * b2 * dd * dd / (nn * nn), v4_mean,
      0.05);

  std::sort(w.begin(), w.end());
  auto quantile = [&w](double q) {
    const auto idx = static_cast<std::size_t>(
        q * static_cast<double>(w.size() - 1) + 0.5);
    return w[std::min(idx, w.size() - 1)];
  };
  report.w_q05 = quantile(0.05);
  report.w_median = quantile(0.50);
  report.w_q95 = quantile(0.95);
  return report;
}

// ============================================================================
// Trend check
// ============================================================================

enum class TrendVerdict { Pass, Fail, Inconclusive };

/// Checks that a classifier's worst-case ("max") error rises along the
/// dimension grid toward `target`: each step may only decrease within the
/// summed interval half-widths, and the final interval must reach
/// target - 0.02. Fewer than three grid points is inconclusive.
inline TrendVerdict trend_test(const SweepResult& result,
                               const std::string& classifier, double target) {
  std::vector<const SweepRow*> max_rows;
  for (const auto& row : result.rows) {
    if (row.classifier == classifier && row.theta == "max") {
      max_rows.push_back(&row);
    }
  }
  std::sort(max_rows.begin(), max_rows.end(),
            [](const SweepRow* a, const SweepRow* b) { return a->d < b->d; });
  if (max_rows.size() < 3) return TrendVerdict::Inconclusive;
  for (std::size_t i = 0; i + 1 < max_rows.size(); ++i) {
    const double slack = max_rows[i]->est.ci_half_width() +
                         max_rows[i + 1]->est.ci_half_width();
    if (max_rows[i + 1]->est.p_hat < max_rows[i]->est.p_hat - slack) {
      return TrendVerdict::Fail;
    }
  }
  if (max_rows.back()->est.ci_high < target - 0.02) return TrendVerdict::Fail;
  return TrendVerdict::Pass;
}

}  // namespace hidim
