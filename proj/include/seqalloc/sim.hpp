#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "seqalloc/distribution.hpp"
#include "seqalloc/policy.hpp"

namespace seqalloc {

/// Exogenous change in the available VM count at a point in time
/// (negative = loss, positive = provisioning).
struct CapacityEvent {
  double time = 0.0;
  int delta = 0;
};

/// One simulation script. `adaptive` controls whether threshold lookups
/// react to inventory changes at all (false freezes the t=0 curve);
/// `switch_on_allocation` controls whether allocations, in addition to
/// capacity events, move the curve index used for lookups.
struct Scenario {
  double horizon = 12.0;
  int initial_vms = 100;
  double lambda = 100.0;
  DistributionPtr distribution;
  PricingParams pricing;
  std::vector<CapacityEvent> capacity_events;  // sorted by time
  std::uint64_t seed = 0;
  bool adaptive = true;
  bool switch_on_allocation = true;

  void validate() const;
};

struct Arrival {
  double time = 0.0;
  double complexity = 0.0;
};

struct TraceRow {
  enum class Kind { Arrival, Capacity };
  double time = 0.0;
  Kind kind = Kind::Arrival;
  double complexity = 0.0;  // NaN for capacity rows
  double threshold = 0.0;   // lookup threshold in effect (post-event for capacity rows)
  bool qualified = false;   // arrivals only
  double price = 0.0;       // NaN unless allocated
  int inventory_after = 0;
  double cumulative_revenue = 0.0;
};

struct SimTotals {
  std::size_t n_arrivals = 0;
  std::size_t n_allocated = 0;
  double final_revenue = 0.0;
};

struct SimResult {
  std::vector<TraceRow> rows;
  std::vector<std::pair<double, int>> inventory_trace;      // (time, available)
  std::vector<std::pair<double, double>> revenue_trace;     // (time, cumulative)
  SimTotals totals;
  std::vector<std::string> warnings;  // e.g. capacity losses clamped at zero
};

/// Poisson arrival stream with i.i.d. complexities drawn by inverse-cdf
/// sampling; fully determined by the seed.
std::vector<Arrival> generate_arrivals(double lambda, double horizon,
                                       const ComplexityDistribution& d,
                                       std::uint64_t seed);

/// Runs the allocation mechanism over the merged stream of arrivals and
/// capacity events (capacity applies first on time ties). Throws
/// std::invalid_argument if the table horizon does not match the scenario.
SimResult run(const Scenario& scenario, const PolicyTable& table);

struct MonteCarloStats {
  double mean_revenue = 0.0;
  double std_error = 0.0;
  double mean_allocations = 0.0;
  std::size_t n_runs = 0;
};

/// Replications with seeds base_seed .. base_seed + n_runs - 1.
MonteCarloStats monte_carlo(const Scenario& scenario, const PolicyTable& table,
                            std::size_t n_runs, std::uint64_t base_seed);

/// Trace CSV: time,event_type,complexity,threshold,qualified,price,
/// inventory_after,cumulative_revenue. Header row always present; an
/// initial "# created ..." comment line is written only when `created`
/// is nonempty.
void write_trace_csv(const SimResult& result, std::ostream& out,
                     const std::string& created = {});

}  // namespace seqalloc
