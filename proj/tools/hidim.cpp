// hidim: Monte Carlo laboratory for two-class Gaussian classification in
// high dimension. See README.md for the config format and exit codes.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hidim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo laboratory: error of trainable rules on constant-"
      "difficulty Gaussian classification families as dimension grows"};
  app.require_subcommand(1);

  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the sweep described by a config file; write CSV (+SVG)");
  sweep->add_option("config", sweep_config, "Path to config file")->required();

  int diag_d = 0;
  int diag_n = 0;
  double diag_beta = 0.0;
  long diag_reps = 100000;
  std::uint64_t diag_seed = 1;
  int diag_threads = 1;
  CLI::App* diagnose = app.add_subcommand(
      "diagnose",
      "Check sampled moments of the direction-estimate statistics against "
      "their closed forms");
  diagnose->add_option("--d", diag_d, "Dimension (>= 2)")->required();
  diagnose->add_option("--n", diag_n, "Sample size (>= 1)")->required();
  diagnose->add_option("--beta", diag_beta, "Noise level (> 0)")->required();
  diagnose->add_option("--reps", diag_reps, "Replicates (default 100000)");
  diagnose->add_option("--seed", diag_seed, "Master seed (default 1)");
  diagnose->add_option("--threads", diag_threads, "Worker threads");

  double bayes_alpha = 0.0;
  CLI::App* bayes = app.add_subcommand(
      "bayes", "Print the optimal error Q(alpha/2) to 8 decimals");
  bayes->add_option("--alpha", bayes_alpha, "Class separation (> 0)")
      ->required();

  std::string curves_config;
  CLI::App* curves = app.add_subcommand(
      "curves", "Emit the sparsity magnitude profile (k, |h_(k)|) as CSV");
  curves->add_option("config", curves_config, "Path to config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sweep->parsed()) {
    return hidim::cmd_sweep(sweep_config, std::cout, std::cerr);
  }
  if (diagnose->parsed()) {
    return hidim::cmd_diagnose(diag_d, diag_n, diag_beta, diag_reps, diag_seed,
                               diag_threads, std::cout, std::cerr);
  }
  if (bayes->parsed()) {
    return hidim::cmd_bayes(bayes_alpha, std::cout, std::cerr);
  }
  return hidim::cmd_curves(curves_config, std::cout, std::cerr);
}
