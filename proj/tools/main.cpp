// ostra: analytic benchmarks, incentive audits, and event simulation for
// ostracism-enforced trade in bipartite buyer-seller markets.
//
// Exit codes: 0 all checks pass, 1 check failures, 2 configuration errors.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ostra/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<double> horizon;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--replications", args.replications, "replication count override");
  cmd->add_option("--horizon", args.horizon, "simulation horizon override");
}

ostra::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  ostra::ExperimentConfig config = ostra::load_config(args.config_path);
  if (args.seed) {
    config.verify.seed = *args.seed;
    config.simulate.seed = *args.seed;
  }
  if (args.replications) {
    config.simulate.replications = *args.replications;
    config.verify.mc_replications = *args.replications;
  }
  if (args.horizon) config.simulate.horizon = *args.horizon;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ostracism-market benchmarks, audits, and simulation"};
  app.require_subcommand(1);

  CommonArgs solve_args, verify_args, sweep_args, simulate_args;
  attach_common(app.add_subcommand("solve", "compute benchmark trade levels"), solve_args);
  attach_common(app.add_subcommand("verify", "run the full invariant suite"), verify_args);
  attach_common(app.add_subcommand("sweep", "benchmarks over a parameter grid"), sweep_args);
  attach_common(app.add_subcommand("simulate", "run seeded replications"), simulate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("solve"))
      return ostra::cmd_solve(load_with_overrides(solve_args), solve_args.out_dir,
                              std::cout);
    if (app.got_subcommand("verify"))
      return ostra::cmd_verify(load_with_overrides(verify_args), verify_args.out_dir,
                               std::cout);
    if (app.got_subcommand("sweep"))
      return ostra::cmd_sweep(load_with_overrides(sweep_args), sweep_args.out_dir,
                              std::cout);
    if (app.got_subcommand("simulate"))
      return ostra::cmd_simulate(load_with_overrides(simulate_args),
                                 simulate_args.out_dir, std::cout);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 2;
}
