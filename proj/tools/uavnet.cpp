#include "uavnet/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace uavnet::cli;

namespace
{

struct CommonOptions
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void
add_common(CLI::App* sub, CommonOptions& opts)
{
  sub->add_option("--config", opts.config, "JSON configuration (built-in defaults when omitted)");
  sub->add_option("--out", opts.out, "output directory (overrides output_dir)");
  sub->add_option("--seed", opts.seed, "random seed (overrides seed)");
}

int
report_violations(const std::vector<std::string>& violations)
{
  for (const auto& v : violations)
    std::cerr << "error: " << v << '\n';
  return kExitConfig;
}

/// Loads the config (or defaults), applies overrides and runs `command`.
int
run_with(const CommonOptions& opts, std::optional<Command> command)
{
  ParsedConfig parsed;
  if (!opts.config.empty())
    parsed = load_config(opts.config);
  if (!parsed.violations.empty())
    return report_violations(parsed.violations);

  auto config = parsed.config;
  if (command)
    config.command = command;
  if (opts.seed)
    {
      config.seed = *opts.seed;
      if (config.command == Command::kSweep)
        config.sweep_seeds = {*opts.seed};
    }
  if (!opts.out.empty())
    config.output_dir = opts.out;
  return execute(config, config.output_dir, std::cout);
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Link scheduling and UAV placement for UAV-UGV networks"};
  app.require_subcommand(1);

  std::string run_path;
  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "execute the command named in a config file");
  run->add_option("config", run_path, "JSON configuration")->required();
  run->add_option("--out", run_opts.out, "output directory (overrides output_dir)");
  run->add_option("--seed", run_opts.seed, "random seed (overrides seed)");

  CommonOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "alternating scheduling and placement");
  add_common(solve, solve_opts);

  CommonOptions baseline_opts;
  std::string which;
  auto* baseline = app.add_subcommand("baseline", "fixed or random two-UGV selection");
  baseline->add_option("which", which, "fixed or random")
      ->required()
      ->check(CLI::IsMember({"fixed", "random"}));
  add_common(baseline, baseline_opts);

  CommonOptions oracle_opts;
  auto* oracle = app.add_subcommand("oracle", "exact schedule at the solver's final placement");
  add_common(oracle, oracle_opts);

  CommonOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "sum rate against the number of UGVs");
  add_common(sweep, sweep_opts);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_path, "JSON configuration")->required();

  auto* defaults = app.add_subcommand("defaults", "print the default configuration");

  CLI11_PARSE(app, argc, argv);

  if (*run)
    {
      run_opts.config = run_path;
      return run_with(run_opts, std::nullopt);
    }
  if (*solve)
    return run_with(solve_opts, Command::kSolve);
  if (*baseline)
    return run_with(baseline_opts,
                    which == "fixed" ? Command::kBaselineFixed : Command::kBaselineRandom);
  if (*oracle)
    return run_with(oracle_opts, Command::kOracle);
  if (*sweep)
    return run_with(sweep_opts, Command::kSweep);
  if (*validate)
    {
      const auto parsed = load_config(validate_path);
      if (!parsed.violations.empty())
        {
          for (const auto& v : parsed.violations)
            std::cout << v << '\n';
          return kExitConfig;
        }
      std::cout << "valid\n";
      return kExitOk;
    }
  if (*defaults)
    {
      RunConfig config;
      config.command = Command::kSolve;
      std::cout << config_to_json(config).dump(2) << '\n';
      return kExitOk;
    }
  return kExitFailure;
}
