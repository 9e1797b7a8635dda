// Error-rate estimates with binomial confidence intervals.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hidim {

/// 95% two-sided normal quantile used by every interval in the library.
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double low;
  double high;
};

/// Wilson score interval for a binomial proportion. Well behaved near 0 and
/// 1, where the Wald interval collapses.
inline WilsonInterval wilson_interval(long successes, long trials,
                                      double z = kZ95) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: bad counts");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w{std::fmax(center - half, 0.0),
                   std::fmin(center + half, 1.0)};
  // center - half is exactly 0 (resp. 1) at the boundary counts; pin the
  // endpoints so rounding dust cannot leak into reported intervals.
  if (successes == 0) w.low = 0.0;
  if (successes == trials) w.high = 1.0;
  return w;
}

/// Misclassification-rate estimate for one sweep cell. Carries the raw
/// counts so estimates pool exactly, plus per-replicate first and second
/// moments so comparisons can use a clustered standard error (test points
/// within a replicate share one trained rule and are not independent).
struct ErrorEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long trials = 0;
  long errors = 0;
  long resample_events = 0;
  int replicates = 0;
  int failed_replicates = 0;
  double rep_sum = 0.0;     // sum of per-replicate error rates
  double rep_sum_sq = 0.0;  // sum of their squares

  /// More than 10% of requested replicates failed to train.
  bool invalid() const noexcept {
    return 10 * failed_replicates > replicates + failed_replicates;
  }

  /// Standard error of p_hat that treats replicates as the sampling unit.
  double se_cluster() const {
    if (replicates < 2) return 0.0;
    const double r = static_cast<double>(replicates);
    const double mean = rep_sum / r;
    const double var = std::fmax(rep_sum_sq / r - mean * mean, 0.0);
    return std::sqrt(var / (r - 1.0));
  }

  double ci_half_width() const noexcept {
    return 0.5 * (ci_high - ci_low);
  }
};

/// Accumulates replicate outcomes and finalizes an ErrorEstimate.
struct ErrorAccumulator {
  long errors = 0;
  long trials = 0;
  long resample_events = 0;
  int replicates = 0;
  int failed_replicates = 0;
  double rep_sum = 0.0;
  double rep_sum_sq = 0.0;

  void add_replicate(long rep_errors, long rep_trials) {
    errors += rep_errors;
    trials += rep_trials;
    replicates += 1;
    const double p = static_cast<double>(rep_errors) /
                     static_cast<double>(rep_trials);
    rep_sum += p;
    rep_sum_sq += p * p;
  }

  void merge(const ErrorAccumulator& other) {
    errors += other.errors;
    trials += other.trials;
    resample_events += other.resample_events;
    replicates += other.replicates;
    failed_replicates += other.failed_replicates;
    rep_sum += other.rep_sum;
    rep_sum_sq += other.rep_sum_sq;
  }

  ErrorEstimate finalize() const {
    if (trials <= 0) {
      throw std::domain_error("ErrorAccumulator: no completed trials");
    }
    ErrorEstimate e;
    e.trials = trials;
    e.errors = errors;
    e.resample_events = resample_events;
    e.replicates = replicates;
    e.failed_replicates = failed_replicates;
    e.rep_sum = rep_sum;
    e.rep_sum_sq = rep_sum_sq;
    e.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
    const WilsonInterval ci = wilson_interval(errors, trials);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    return e;
  }
};

/// Combines conditional error estimates from two disjoint regions of a
/// parameter set into the unconditional estimate, weighting by the volume
/// `vol` of the first region. Interval half-widths propagate in quadrature.
inline ErrorEstimate volume_split_errors(const ErrorEstimate& err_in,
                                         const ErrorEstimate& err_out,
                                         double vol) {
  if (!(vol >= 0.0 && vol <= 1.0)) {
    throw std::invalid_argument("volume_split_errors: vol outside [0, 1]");
  }
  if (vol == 0.0) return err_out;
  if (vol == 1.0) return err_in;
  ErrorEstimate e;
  e.p_hat = vol * err_in.p_hat + (1.0 - vol) * err_out.p_hat;
  const double half = std::sqrt(
      vol * vol * err_in.ci_half_width() * err_in.ci_half_width() +
      (1.0 - vol) * (1.0 - vol) * err_out.ci_half_width() *
          err_out.ci_half_width());
  e.ci_low = std::fmax(e.p_hat - half, 0.0);
  e.ci_high = std::fmin(e.p_hat + half, 1.0);
  e.trials = err_in.trials + err_out.trials;
  e.errors = err_in.errors + err_out.errors;
  e.resample_events = err_in.resample_events + err_out.resample_events;
  e.replicates = err_in.replicates + err_out.replicates;
  e.failed_replicates = err_in.failed_replicates + err_out.failed_replicates;
  return e;
}

}  // namespace hidim
