#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adex/cli/commands.hpp"

namespace {

struct Common {
  std::string config_path;
  adex::cli::CliOptions opts;
};

void add_common_flags(CLI::App* sub, Common& common, bool needs_config) {
  auto* cfg = sub->add_option("--config", common.config_path, "experiment config file (JSON)");
  if (needs_config) cfg->required();
  sub->add_option("--seed", common.opts.seed, "override run.base_seed");
  sub->add_option("--trials", common.opts.trials, "override run.trials");
  sub->add_option("--threads", common.opts.threads, "trial-level parallelism")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", common.opts.out_dir, "override output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive experiments with a deployment decision"};
  app.require_subcommand(1);

  Common common;
  CLI::App* solve = app.add_subcommand("solve", "optimal allocation and equilibrium report");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo trials of a policy");
  CLI::App* frontier = app.add_subcommand("frontier", "trace the length-regret frontier");
  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in property suites");
  add_common_flags(solve, common, true);
  add_common_flags(simulate, common, true);
  add_common_flags(frontier, common, true);
  add_common_flags(selftest, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (selftest->parsed()) return adex::cli::cmd_selftest(common.opts, std::cout);
    const adex::cli::ConfigFile cfg = adex::cli::load_config_file(common.config_path);
    if (solve->parsed()) return adex::cli::cmd_solve(cfg, common.opts, std::cout);
    if (simulate->parsed()) return adex::cli::cmd_simulate(cfg, common.opts, std::cout);
    if (frontier->parsed()) return adex::cli::cmd_frontier(cfg, common.opts, std::cout);
  } catch (const adex::cli::config_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
