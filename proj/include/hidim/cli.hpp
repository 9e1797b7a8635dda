// Command implementations behind the executable.
//
// Exit codes: 0 success, 1 diagnostics found a failing identity, 2 invalid
// configuration or arguments, 3 sweep finished but flagged invalid cells,
// 4 unwritable output path, 5 diagnostics given too few replicates to
// conclude anything.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "hidim/analytic.hpp"
#include "hidim/config.hpp"
#include "hidim/csv.hpp"
#include "hidim/svg.hpp"
#include "hidim/sweep.hpp"

namespace hidim {

inline constexpr long kMinDiagnoseReplicates = 10000;

/// Thread count after the HIDIM_THREADS override. An unparseable override
/// is a configuration error.
inline int resolve_threads(int configured) {
  const char* env = std::getenv("HIDIM_THREADS");
  if (env == nullptr || *env == '\0') return configured;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 4096) {
    throw ConfigError(std::string("HIDIM_THREADS: bad value '") + env + "'");
  }
  return static_cast<int>(v);
}

inline int cmd_sweep(const std::string& config_path, std::ostream& out,
                     std::ostream& err) {
  RunConfig cfg;
  int threads = 1;
  try {
    cfg = load_config_file(config_path);
    threads = resolve_threads(cfg.threads);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return 2;
  }
  const SweepResult result = run_sweep(cfg.plan, threads);
  const std::string csv = to_csv(result, cfg.timings);
  try {
    write_text_file(cfg.csv_path, csv);
  } catch (const std::ios_base::failure& e) {
    err << e.what() << '\n';
    return 4;
  }
  out << "wrote " << cfg.csv_path << " (" << result.rows.size() << " rows)\n";
  if (cfg.plot) {
    // render strictly from the file just written, never from memory
    std::ifstream in(cfg.csv_path, std::ios::binary);
    std::ostringstream written;
    written << in.rdbuf();
    const double floor = q_function(0.5 * cfg.plan.family.alpha);
    try {
      write_text_file(cfg.effective_svg_path(),
                      sweep_svg_from_csv(written.str(), floor));
    } catch (const std::ios_base::failure& e) {
      err << e.what() << '\n';
      return 4;
    }
    out << "wrote " << cfg.effective_svg_path() << '\n';
  }
  out << "note: theta=max rows bound the family worst case from below ("
      << cfg.plan.theta_draws << " draws per dimension)\n";
  if (result.any_invalid()) {
    err << "warning: at least one cell exceeded the failed-replicate budget\n";
    return 3;
  }
  return 0;
}

inline int cmd_diagnose(int d, int n, double beta, long replicates,
                        std::uint64_t seed, int threads, std::ostream& out,
                        std::ostream& err) {
  if (d < 2 || n < 1 || !(beta > 0.0) || replicates < 1) {
    err << "diagnose: need d >= 2, n >= 1, beta > 0, reps >= 1\n";
    return 2;
  }
  try {
    threads = resolve_threads(threads);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return 2;
  }
  if (replicates < kMinDiagnoseReplicates) {
    out << "inconclusive: " << replicates << " replicates is below the "
        << kMinDiagnoseReplicates << " needed for the fixed tolerances\n";
    return 5;
  }
  const MomentReport report =
      moment_diagnostics(d, n, beta, replicates, seed, threads);
  out << "direction-estimate moment diagnostics: d=" << d << " n=" << n
      << " beta=" << format_g10(beta) << " replicates=" << replicates << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %-14s %-14s %-14s %-11s %s\n",
                "quantity", "closed_form", "empirical", "relative_error",
                "tolerance", "status");
  out << line;
  for (const auto& l : report.lines) {
    std::snprintf(line, sizeof line, "%-22s %-14.6g %-14.6g %-14.6g %-11.6g %s%s\n",
                  l.quantity.c_str(), l.expected, l.observed, l.rel_err,
                  l.tolerance, l.pass ? "pass" : "FAIL",
                  l.absolute ? "  (absolute)" : "");
    out << line;
  }
  std::snprintf(line, sizeof line,
                "w quantiles: 5%%=%.6g 50%%=%.6g 95%%=%.6g\n", report.w_q05,
                report.w_median, report.w_q95);
  out << line;
  out << "overall: " << (report.all_pass() ? "PASS" : "FAIL") << '\n';
  return report.all_pass() ? 0 : 1;
}

inline int cmd_bayes(double alpha, std::ostream& out, std::ostream& err) {
  if (!(alpha > 0.0)) {
    err << "bayes: alpha must be > 0\n";
    return 2;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8f\n", q_function(0.5 * alpha));
  out << buf;
  return 0;
}

inline int cmd_curves(const std::string& config_path, std::ostream& out,
                      std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return 2;
  }
  const Family& family = cfg.plan.family;
  if (family.kind != FamilyKind::SparseExp &&
      family.kind != FamilyKind::SparsePoly) {
    err << "curves: family must be sparse_exp or sparse_poly\n";
    return 2;
  }
  const int d = cfg.plan.d_grid.front();
  const SparsityClass cls =
      family.kind == FamilyKind::SparseExp
          ? SparsityClass::exp_class(family.decay, d)
          : SparsityClass::poly_class(family.decay, d);
  try {
    write_text_file(cfg.csv_path, sparsity_curve_csv(cls.sorted_magnitudes()));
  } catch (const std::ios_base::failure& e) {
    err << e.what() << '\n';
    return 4;
  }
  out << "wrote " << cfg.csv_path << " (" << d << " ranks)\n";
  return 0;
}

}  // namespace hidim
