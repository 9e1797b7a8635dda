// End-to-end acceptance checks for the laboratory. Each test prints exactly
// one summary line: [ACCEPTANCE] <id> <name>: PASS|FAIL (details). Tolerances
// are pinned here, next to the checks that use them.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hidim/hidim.hpp"
#include "support/oracles.hpp"

using namespace hidim;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, const char* pattern = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void report(const char* tag, bool pass, const std::string& detail) {
  std::string line = "[ACCEPTANCE] ";
  line += tag;
  line += pass ? ": PASS" : ": FAIL";
  if (!detail.empty()) {
    line += " (" + detail + ")";
  }
  std::puts(line.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(pass) << line;
}

const SweepRow* find_row(const SweepResult& result, int d,
                         const std::string& classifier,
                         const std::string& theta) {
  for (const auto& row : result.rows) {
    if (row.d == d && row.classifier == classifier && row.theta == theta) {
      return &row;
    }
  }
  return nullptr;
}

}  // namespace

// ===== C1: oracle rule sits on the closed-form floor =====

TEST(Acceptance, C1BayesErrorFloor) {
  const auto t0 = Clock::now();
  constexpr double kTarget = 0.15865525;  // q_function(1)
  constexpr long kTrials = 1000000;       // 200 replicates x 5000 points

  SplitMix64 rng(0xC1u);
  const ModelParams theta = theta_sphere(sample_sphere_uniform(5, rng), 2.0);
  const Trainer trainer =
      make_trainer(ClassifierSpec{ClassifierKind::BayesOracle}, theta, 1.0);
  const ErrorEstimate est =
      estimate_error(trainer, theta, /*n=*/2, /*m=*/5000, /*replicates=*/200,
                     /*seed=*/0xC1F00Du);

  const double sigma =
      std::sqrt(kTarget * (1.0 - kTarget) / static_cast<double>(kTrials));
  const double dev = std::abs(est.p_hat - kTarget);
  const double elapsed = secs_since(t0);
  const bool pass =
      est.trials >= kTrials && dev <= 3.0 * sigma && elapsed < 30.0;
  report("C1 bayes-floor", pass,
         "p_hat=" + fmt(est.p_hat, "%.6f") + " target=" + fmt(kTarget, "%.6f") +
             " dev=" + fmt(dev / sigma, "%.2f") + " sigma, trials=" +
             std::to_string(est.trials) + ", t=" + fmt(elapsed, "%.1f") + "s");
}

// ===== C2: alignment-statistic moment identities at scale =====

TEST(Acceptance, C2MomentIdentities) {
  const auto t0 = Clock::now();
  const MomentReport rep =
      moment_diagnostics(/*d=*/1000, /*n=*/10, /*beta=*/1.0,
                         /*replicates=*/100000, /*seed=*/0xC2u);

  // The closed forms the suite must reproduce at d=1000, n=10, beta=1.
  bool anchors = rep.lines.size() == 5;
  if (anchors) {
    anchors = anchors && std::abs(rep.lines[1].expected - 0.1) < 1e-12 &&
              rep.lines[1].tolerance == 0.05;
    anchors = anchors && std::abs(rep.lines[2].expected - 101.0) < 1e-12 &&
              rep.lines[2].tolerance == 0.01;
    anchors = anchors && std::abs(rep.lines[3].expected - 20.4) < 1e-12 &&
              rep.lines[3].tolerance == 0.10;
    anchors = anchors && std::abs(rep.lines[4].expected - 10020.0) < 1e-12 &&
              rep.lines[4].tolerance == 0.05;
  }
  const double elapsed = secs_since(t0);
  const bool pass = anchors && rep.all_pass() && elapsed < 120.0;
  std::string detail = "observed: ";
  if (rep.lines.size() == 5) {
    detail += fmt(rep.lines[1].observed, "%.4g");
    detail += ", " + fmt(rep.lines[2].observed, "%.4g");
    detail += ", " + fmt(rep.lines[3].observed, "%.4g");
    detail += ", " + fmt(rep.lines[4].observed, "%.4g");
    detail += " vs 0.1, 101, 20.4, 10020";
  }
  detail += ", t=" + fmt(elapsed, "%.1f") + "s";
  report("C2 moment-identities", pass, detail);
}

// ===== C3: trained-rule error climbs toward 1/2 in the sublinear regime =====

TEST(Acceptance, C3ImpossibilityTrend) {
  const auto t0 = Clock::now();
  SweepPlan plan;
  plan.d_grid = {64, 256, 1024, 4096};
  plan.n_rule = PowerRule{0.25};  // n = 3, 4, 6, 8
  plan.family.kind = FamilyKind::Sphere;
  plan.family.alpha = 4.0;  // noise beta = 0.5
  plan.classifiers = {ClassifierSpec{ClassifierKind::MatchedFilter},
                      ClassifierSpec{ClassifierKind::PluginKnown},
                      ClassifierSpec{ClassifierKind::MLProjection},
                      ClassifierSpec{ClassifierKind::CoinFlip}};
  plan.theta_draws = 8;
  plan.replicates_per_theta = 25;
  plan.test_points = 512;
  plan.master_seed = 0xC3u;
  const SweepResult result = run_sweep(plan);

  constexpr double kFloor = 0.40;
  bool pass = true;
  std::string detail = "final max p:";
  for (const char* name : {"matched_filter", "plugin_known", "ml_projection"}) {
    const bool trend_ok = trend_test(result, name, kFloor) == TrendVerdict::Pass;
    const SweepRow* last = find_row(result, 4096, name, "max");
    const bool floor_ok = last != nullptr && last->est.p_hat >= kFloor;
    pass = pass && trend_ok && floor_ok;
    detail += std::string(" ") + name + "=" +
              (last != nullptr ? fmt(last->est.p_hat) : "?") +
              (trend_ok ? "" : " TREND-FAIL");
  }

  // The guessing baseline must stay pinned at 1/2 at every dimension.
  for (int d : plan.d_grid) {
    const SweepRow* coin = find_row(result, d, "coin_flip", "mean");
    const bool coin_ok =
        coin != nullptr &&
        std::abs(coin->est.p_hat - 0.5) <= 2.0 * coin->est.ci_half_width();
    pass = pass && coin_ok;
    if (!coin_ok) detail += " coin@d=" + std::to_string(d) + " off 0.5";
  }

  // Cross-check the final point against the independent semi-analytic MC.
  const oracles::MeanSe oracle =
      oracles::matched_filter_error_oracle(4096, 8, 0.5, 300000, 0xFACADEu);
  for (const char* name : {"matched_filter", "ml_projection"}) {
    const SweepRow* mean = find_row(result, 4096, name, "mean");
    bool ok = mean != nullptr;
    if (ok) {
      const double comb = std::sqrt(mean->est.se_cluster() * mean->est.se_cluster() +
                                    oracle.se * oracle.se);
      ok = std::abs(mean->est.p_hat - oracle.mean) <= 3.0 * comb;
      if (std::string(name) == "matched_filter") {
        detail += " | oracle=" + fmt(oracle.mean) + " mf-dev=" +
                  fmt(std::abs(mean->est.p_hat - oracle.mean) / comb, "%.2f") +
                  " sigma";
      }
    }
    pass = pass && ok;
  }

  const double elapsed = secs_since(t0);
  pass = pass && elapsed < 300.0;
  detail += ", t=" + fmt(elapsed, "%.1f") + "s";
  report("C3 impossibility-trend", pass, detail);
}

// ===== C4: matched filter agrees with the reduced two-moment MC =====

TEST(Acceptance, C4SemiAnalyticMatch) {
  const auto t0 = Clock::now();
  constexpr double kBeta = 0.5;  // alpha = 4
  const int ds[] = {100, 400, 1600};
  const int ns[] = {5, 10, 20};

  double worst_z = 0.0;
  int cells = 0;
  for (int d : ds) {
    for (int n : ns) {
      const std::uint64_t cell_seed =
          fold_seed(0xC4u, static_cast<std::uint64_t>(d * 1000 + n));
      SplitMix64 rng(cell_seed);
      const ModelParams theta = theta_sphere(sample_sphere_uniform(d, rng), 4.0);
      const Trainer trainer = make_trainer(
          ClassifierSpec{ClassifierKind::MatchedFilter}, theta, kBeta);
      const ErrorEstimate est =
          estimate_error(trainer, theta, n, /*m=*/512, /*replicates=*/100,
                         fold_seed(cell_seed, 0xE57u));
      const oracles::MeanSe oracle = oracles::matched_filter_error_oracle(
          d, n, kBeta, 200000, fold_seed(cell_seed, 0x0Au));
      const double comb = std::sqrt(est.se_cluster() * est.se_cluster() +
                                    oracle.se * oracle.se);
      worst_z = std::fmax(worst_z, std::abs(est.p_hat - oracle.mean) / comb);
      ++cells;
    }
  }

  const double elapsed = secs_since(t0);
  const bool pass = cells == 9 && worst_z <= 3.0 && elapsed < 180.0;
  report("C4 semi-analytic-match", pass,
         std::to_string(cells) + " cells, worst dev=" + fmt(worst_z, "%.2f") +
             " sigma (limit 3), t=" + fmt(elapsed, "%.1f") + "s");
}

// ===== C5: thresholding escapes on a rapidly decaying direction class =====

TEST(Acceptance, C5SparsityEscape) {
  const auto t0 = Clock::now();
  SweepPlan plan;
  plan.d_grid = {4096};
  plan.n_rule = FixedRule{100};
  plan.family.kind = FamilyKind::SparseExp;
  plan.family.alpha = 4.0;
  plan.family.decay = 0.5;
  plan.classifiers = {ClassifierSpec{ClassifierKind::SoftThreshold, 1.0},
                      ClassifierSpec{ClassifierKind::MatchedFilter}};
  plan.theta_draws = 2;
  plan.replicates_per_theta = 100;
  plan.test_points = 512;
  plan.master_seed = 0xC5u;
  const SweepResult result = run_sweep(plan);

  constexpr double kSoftCeiling = 0.06;
  constexpr double kMatchedFloor = 0.22;
  const SweepRow* soft = find_row(result, 4096, "soft_threshold", "mean");
  const SweepRow* matched = find_row(result, 4096, "matched_filter", "mean");
  const double elapsed = secs_since(t0);
  const bool pass = soft != nullptr && matched != nullptr &&
                    soft->est.p_hat <= kSoftCeiling &&
                    matched->est.p_hat >= kMatchedFloor && elapsed < 180.0;
  report("C5 sparsity-escape", pass,
         "soft=" + (soft != nullptr ? fmt(soft->est.p_hat) : "?") +
             " (limit <= 0.06), matched=" +
             (matched != nullptr ? fmt(matched->est.p_hat) : "?") +
             " (limit >= 0.22), t=" + fmt(elapsed, "%.1f") + "s");
}

// ===== C6: cap/complement recombination matches the unconditional run =====

namespace {

// Pools single-replicate estimates over fresh direction draws from `region`.
template <typename DrawH>
ErrorEstimate estimate_over_region(DrawH&& draw_h, int replicates,
                                   std::uint64_t seed) {
  ErrorAccumulator acc;
  SplitMix64 rng(fold_seed(seed, 0x4eadu));
  for (int r = 0; r < replicates; ++r) {
    const ModelParams theta = theta_sphere(draw_h(rng), 4.0);
    const Trainer trainer = make_trainer(
        ClassifierSpec{ClassifierKind::SoftThreshold, 1.0}, theta, 0.5);
    const ErrorEstimate one = estimate_error(
        trainer, theta, /*n=*/7, /*m=*/400, /*replicates=*/1,
        fold_seed(seed, static_cast<std::uint64_t>(r)));
    acc.add_replicate(one.errors, one.trials);
  }
  return acc.finalize();
}

}  // namespace

TEST(Acceptance, C6VolumeDecomposition) {
  const auto t0 = Clock::now();
  constexpr int kDim = 50;

  // Pick the cap threshold at the 70th percentile of the first coordinate's
  // magnitude, so the cap holds roughly 30% of the directions.
  SplitMix64 cal_rng(0xC6CA1u);
  std::vector<double> mags(20000);
  for (double& m : mags) m = std::abs(sample_sphere_uniform(kDim, cal_rng)(0));
  std::sort(mags.begin(), mags.end());
  const double cap = mags[static_cast<std::size_t>(0.7 * (mags.size() - 1))];

  // Independent empirical volume of the cap.
  SplitMix64 vol_rng(0xC6B01u);
  constexpr int kVolDraws = 200000;
  long hits = 0;
  for (int i = 0; i < kVolDraws; ++i) {
    if (std::abs(sample_sphere_uniform(kDim, vol_rng)(0)) > cap) ++hits;
  }
  const double vol = static_cast<double>(hits) / kVolDraws;
  const double vol_se = std::sqrt(vol * (1.0 - vol) / kVolDraws);

  constexpr int kReps = 500;
  const auto in_cap = [cap](SplitMix64& rng) {
    for (;;) {
      Eigen::VectorXd h = sample_sphere_uniform(kDim, rng);
      if (std::abs(h(0)) > cap) return h;
    }
  };
  const auto out_cap = [cap](SplitMix64& rng) {
    for (;;) {
      Eigen::VectorXd h = sample_sphere_uniform(kDim, rng);
      if (std::abs(h(0)) <= cap) return h;
    }
  };
  const auto anywhere = [](SplitMix64& rng) {
    return sample_sphere_uniform(kDim, rng);
  };
  const ErrorEstimate err_in = estimate_over_region(in_cap, kReps, 0xC6001u);
  const ErrorEstimate err_out = estimate_over_region(out_cap, kReps, 0xC6002u);
  const ErrorEstimate err_unc = estimate_over_region(anywhere, kReps, 0xC6003u);

  const ErrorEstimate joined = volume_split_errors(err_in, err_out, vol);
  const double gap = std::abs(err_in.p_hat - err_out.p_hat);
  const double tol =
      3.0 * std::sqrt(vol * vol * err_in.se_cluster() * err_in.se_cluster() +
                      (1.0 - vol) * (1.0 - vol) * err_out.se_cluster() *
                          err_out.se_cluster() +
                      err_unc.se_cluster() * err_unc.se_cluster() +
                      gap * gap * vol_se * vol_se);
  const double dev = std::abs(joined.p_hat - err_unc.p_hat);
  const double elapsed = secs_since(t0);
  const bool pass = dev <= tol;
  report("C6 volume-decomposition", pass,
         "vol=" + fmt(vol, "%.3f") + ", in=" + fmt(err_in.p_hat) + ", out=" +
             fmt(err_out.p_hat) + ", joined=" + fmt(joined.p_hat) +
             " vs unconditional=" + fmt(err_unc.p_hat) + ", dev=" +
             fmt(dev, "%.4f") + " <= " + fmt(tol, "%.4f") + ", t=" +
             fmt(elapsed, "%.1f") + "s");
}

// ===== C7: determinism, transform closed forms, oracle dominance =====

TEST(Acceptance, C7DeterminismAndStructure) {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;

  // (a) identical CSV bytes for a fixed seed, any thread count
  SweepPlan plan;
  plan.d_grid = {16, 32};
  plan.n_rule = FixedRule{6};
  plan.family.kind = FamilyKind::Sphere;
  plan.family.alpha = 2.0;
  plan.classifiers = {ClassifierSpec{ClassifierKind::MatchedFilter},
                      ClassifierSpec{ClassifierKind::PluginPooled}};
  plan.theta_draws = 2;
  plan.replicates_per_theta = 13;
  plan.test_points = 50;
  plan.master_seed = 0xC7u;
  const std::string csv1 = to_csv(run_sweep(plan, 1));
  const bool det_ok = csv1 == to_csv(run_sweep(plan, 2)) &&
                      csv1 == to_csv(run_sweep(plan, 4));
  pass = pass && det_ok;
  detail += det_ok ? "csv stable x{1,2,4} threads" : "CSV DIFFERS BY THREADS";

  // (b) structured whitening/sqrt agree with dense eigendecompositions
  double worst_dev = 0.0;
  SplitMix64 rng(0xC7B5u);
  for (int d : {2, 3, 5, 9, 17, 32}) {
    std::vector<CovarianceModel> models;
    models.push_back(CovarianceModel::spherical(0.3 + rng.uniform01()));
    models.push_back(CovarianceModel::rank_one_plus_spherical(
        sample_sphere_uniform(d, rng), 0.2 + 1.8 * rng.uniform01(),
        0.3 + 1.2 * rng.uniform01()));
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    Eigen::MatrixXd psd = a * a.transpose() / d +
                          0.1 * Eigen::MatrixXd::Identity(d, d);
    models.push_back(CovarianceModel::dense(psd));
    for (const auto& model : models) {
      const Eigen::MatrixXd sigma = model.dense_matrix(d);
      const Eigen::MatrixXd wmat = oracles::whitening_matrix(sigma);
      const Eigen::MatrixXd smat = oracles::sqrt_matrix(sigma);
      for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = rng.normal();
        worst_dev = std::fmax(
            worst_dev, (whiten_apply(model, v) - wmat * v).norm());
        worst_dev = std::fmax(
            worst_dev, (cov_sqrt_apply(model, v) - smat * v).norm());
      }
    }
  }
  const bool forms_ok = worst_dev <= 1e-10;
  pass = pass && forms_ok;
  detail += ", transform dev=" + fmt(worst_dev, "%.2e") + " (limit 1e-10)";

  // (c) the oracle rule dominates every trained rule on random setups
  constexpr int kConfigs = 20;
  constexpr int kTestPoints = 100000;
  double worst_margin = -1e9;  // max of (bayes - rule) in combined sigmas
  SplitMix64 cfg_rng(0xC7D0u);
  for (int c = 0; c < kConfigs; ++c) {
    const int d = 5;
    const double alpha = 1.5 + 2.5 * cfg_rng.uniform01();
    double noise_beta = 2.0 / alpha;
    ModelParams theta = [&]() -> ModelParams {
      switch (cfg_rng.below(4)) {
        case 0:
          return theta_sphere(sample_sphere_uniform(d, cfg_rng), alpha);
        case 1: {
          noise_beta = 0.4 + 1.1 * cfg_rng.uniform01();
          return theta_sensing_aware(sample_sphere_uniform(d, cfg_rng),
                                     0.3 + 1.7 * cfg_rng.uniform01(),
                                     noise_beta, alpha,
                                     2.0 * cfg_rng.uniform01() - 1.0);
        }
        case 2:
          return theta_sphere(
              make_sparse_h(
                  SparsityClass::exp_class(0.3 + 0.4 * cfg_rng.uniform01(), d),
                  cfg_rng),
              alpha);
        default:
          return theta_sphere(
              make_sparse_h(
                  SparsityClass::poly_class(0.75 + 1.25 * cfg_rng.uniform01(),
                                            d),
                  cfg_rng),
              alpha);
      }
    }();

    const Dataset train =
        gen_dataset(theta, 50, fold_seed(0xC7D1u, static_cast<std::uint64_t>(c)));
    std::vector<TrainedRule> rules;
    rules.push_back(train_matched_filter(train));
    rules.push_back(train_plugin_ml(train, CovMode{theta.cov}));
    rules.push_back(train_plugin_ml(train, CovMode{PooledMl{}}));
    rules.push_back(train_ml_projection(train, noise_beta));
    rules.push_back(train_soft_threshold(train, noise_beta, 1.0));
    TrainedRule bayes = train_bayes_oracle(theta);

    SplitMix64 test_rng(fold_seed(0xC7D2u, static_cast<std::uint64_t>(c)));
    std::vector<long> errs(rules.size(), 0);
    long bayes_errs = 0;
    Eigen::VectorXd z(d);
    for (int i = 0; i < kTestPoints; ++i) {
      const int y = test_rng.rademacher();
      for (int j = 0; j < d; ++j) z(j) = test_rng.normal();
      const Eigen::VectorXd x =
          (y > 0 ? theta.mu_plus : theta.mu_minus) + cov_sqrt_apply(theta.cov, z);
      if (predict(bayes, x) != y) ++bayes_errs;
      for (std::size_t rix = 0; rix < rules.size(); ++rix) {
        if (predict(rules[rix], x) != y) ++errs[rix];
      }
    }
    const double pb = static_cast<double>(bayes_errs) / kTestPoints;
    const double sb = std::sqrt(pb * (1.0 - pb) / kTestPoints);
    for (long e : errs) {
      const double pr = static_cast<double>(e) / kTestPoints;
      const double sr = std::sqrt(pr * (1.0 - pr) / kTestPoints);
      const double comb = std::sqrt(sb * sb + sr * sr);
      worst_margin = std::fmax(worst_margin, (pb - pr) / comb);
    }
  }
  const bool dom_ok = worst_margin <= 3.0;
  pass = pass && dom_ok;
  detail += ", dominance worst margin=" + fmt(worst_margin, "%.2f") +
            " sigma (limit 3)";

  const double elapsed = secs_since(t0);
  detail += ", t=" + fmt(elapsed, "%.1f") + "s";
  report("C7 determinism-and-structure", pass, detail);
}
