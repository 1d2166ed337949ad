#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqalloc/json_io.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/sim.hpp"
#include "seqalloc/solver.hpp"

namespace seqalloc::cli {

/// Everything a subcommand can need, parsed from one JSON config file.
/// Command-line flags override individual fields after parsing.
struct RunConfig {
  DistributionPtr distribution;
  double horizon_hours = 12.0;
  double lambda = 100.0;
  int initial_vms = 100;
  PricingParams pricing;
  SolverConfig solver;

  struct Table {
    std::string path;
    std::vector<double> lambda_grid;
    int n_vms_max = 100;
    bool inline_build = false;  // build in memory instead of loading `path`
  } table;

  struct ScenarioCfg {
    std::vector<CapacityEvent> capacity_events;
    std::uint64_t seed = 0;
    bool adaptive = true;
    bool switch_on_allocation = true;
    std::size_t runs = 1;
  } scenario;

  struct Solve {
    std::vector<int> n_list;
    std::string out = "thresholds.csv";
  } solve;

  struct Simulate {
    std::string out = "trace.csv";
  } simulate;

  struct Revenue {
    int n_vms = 100;
    double t_from = 0.0;
  } revenue;

  struct Verify {
    std::vector<int> n_list{1, 10, 100};
    int dp_steps = 0;  // 0 = derive from lambda and horizon
    std::vector<double> scales{0.8, 0.9, 1.1, 1.2};
    int n_vms_max = 0;  // 0 = table.n_vms_max
  } verify;

  bool deterministic = false;

  /// Builds the Scenario fed to the simulator.
  seqalloc::Scenario make_scenario() const;

  /// Full validation of every field; throws std::invalid_argument.
  void validate() const;
};

RunConfig default_config();
RunConfig load_config(const std::string& path);

/// Current UTC time as an ISO-8601 string (empty when deterministic).
std::string timestamp(bool deterministic);

}  // namespace seqalloc::cli
