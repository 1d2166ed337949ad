#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out;
  bool deterministic = false;
  double lambda = 0.0;
  int vms = 0;
  double alpha = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  bool lambda_set = false, vms_set = false, alpha_set = false,
       horizon_set = false, seed_set = false, runs_set = false;
};

seqalloc::cli::RunConfig make_config(const Flags& flags,
                                     const std::string& command) {
  using namespace seqalloc::cli;
  RunConfig cfg = flags.config_path.empty() ? default_config()
                                            : load_config(flags.config_path);
  cfg.deterministic = flags.deterministic;

  if (flags.alpha_set) {
    cfg.distribution = std::make_shared<seqalloc::ExponentialComplexity>(flags.alpha);
  }
  if (flags.horizon_set) {
    cfg.horizon_hours = flags.horizon;
    cfg.solver.grid.t_end = flags.horizon;
  }
  if (flags.lambda_set) {
    cfg.lambda = flags.lambda;
    if (cfg.table.lambda_grid.size() <= 1) {
      cfg.table.lambda_grid = {flags.lambda};
    }
  }
  if (flags.seed_set) {
    cfg.scenario.seed = flags.seed;
  }
  if (flags.runs_set) {
    cfg.scenario.runs = flags.runs;
  }
  if (flags.vms_set) {
    if (command == "solve") {
      cfg.solve.n_list = {flags.vms};
    } else if (command == "table") {
      cfg.table.n_vms_max = flags.vms;
    } else if (command == "revenue") {
      cfg.revenue.n_vms = flags.vms;
    } else {
      cfg.initial_vms = flags.vms;
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace seqalloc::cli;

  CLI::App app{"Dynamic qualification-threshold solver, pricing policy tables "
               "and discrete-event allocation simulator"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", flags.out, "Output path override");
  app.add_flag("--deterministic", flags.deterministic,
               "Omit timestamps so outputs are byte-reproducible");
  app.add_option("--lambda", flags.lambda, "Arrival rate override (per hour)")
      ->each([&flags](const std::string&) { flags.lambda_set = true; });
  app.add_option("--vms", flags.vms, "VM count override (role depends on subcommand)")
      ->each([&flags](const std::string&) { flags.vms_set = true; });
  app.add_option("--alpha", flags.alpha, "Exponential complexity rate override")
      ->each([&flags](const std::string&) { flags.alpha_set = true; });
  app.add_option("--horizon", flags.horizon, "Horizon override (hours)")
      ->each([&flags](const std::string&) { flags.horizon_set = true; });
  app.add_option("--seed", flags.seed, "Simulation seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  app.add_option("--runs", flags.runs, "Replication count for simulate")
      ->each([&flags](const std::string&) { flags.runs_set = true; });

  auto* solve = app.add_subcommand("solve", "Solve threshold curves, write CSV");
  auto* table = app.add_subcommand("table", "Build a policy table file");
  auto* simulate = app.add_subcommand("simulate", "Run the allocation simulation");
  auto* revenue = app.add_subcommand("revenue", "Evaluate expected revenue");
  auto* verify = app.add_subcommand("verify", "Run independent-oracle checks");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = make_config(flags, command);
    if (solve->parsed()) {
      return cmd_solve(cfg, flags.out);
    }
    if (table->parsed()) {
      return cmd_table(cfg, flags.out);
    }
    if (simulate->parsed()) {
      return cmd_simulate(cfg, flags.out);
    }
    if (revenue->parsed()) {
      return cmd_revenue(cfg, flags.out);
    }
    if (verify->parsed()) {
      return cmd_verify(cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
