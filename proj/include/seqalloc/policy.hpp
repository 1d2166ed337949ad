#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seqalloc/distribution.hpp"
#include "seqalloc/solver.hpp"

namespace seqalloc {

/// Returned by PolicyTable::lookup when no VM is available: every task is
/// rejected.
inline constexpr double kRejectAllThreshold =
    std::numeric_limits<double>::infinity();

/// Pricing rule parameters: an allocation at threshold y and time t is
/// charged q * y + S(t), where S is a piecewise-constant schedule.
struct PricingParams {
  double q = 1.0;  // VM computational efficiency, in [0, 1]
  std::vector<std::pair<double, double>> s_schedule;  // (start time, value)
  double kappa_t = 0.0;  // constant offset entering expected revenue only

  /// S(t): value of the last breakpoint at or before t, 0 before the first.
  double s_at(double t) const;
  void validate() const;
};

/// q * threshold + S(t). Throws std::domain_error for non-finite thresholds.
double price(const PricingParams& pricing, double threshold, double t);

/// Precomputed family of threshold curves indexed by (arrival rate,
/// available VM count); the runtime policy is read off by lookup().
/// Immutable after construction, safe for concurrent reads.
class PolicyTable {
public:
  PolicyTable(DistributionPtr distribution, double horizon,
              std::vector<double> lambda_grid, int n_vms_max,
              SolverConfig solver,
              std::vector<std::vector<ThresholdCurve>> curves,
              std::string created = {});

  const ComplexityDistribution& distribution() const { return *distribution_; }
  DistributionPtr distribution_ptr() const { return distribution_; }
  double horizon() const { return solver_.grid.t_end; }
  const std::vector<double>& lambda_grid() const { return lambda_grid_; }
  int n_vms_max() const { return n_vms_max_; }
  const TimeGrid& grid() const { return solver_.grid; }
  const SolverConfig& solver() const { return solver_; }
  const std::string& created() const { return created_; }

  /// Index of the grid rate nearest to lambda_now (ties pick the lower).
  std::size_t nearest_lambda_index(double lambda_now) const;

  const ThresholdCurve& curve(std::size_t lambda_index, int n_vms) const;

  /// Threshold in effect at time t with n_available VMs under arrival rate
  /// lambda_now. Counts above n_vms_max clamp to n_vms_max; a zero count
  /// returns kRejectAllThreshold. Throws std::domain_error if t is outside
  /// [0, horizon].
  double lookup(double lambda_now, int n_available, double t) const;

  /// Checks convergence flags, curve shapes, terminal boundary values and
  /// the ordering in N; throws std::runtime_error on violation.
  void validate() const;

private:
  DistributionPtr distribution_;
  std::vector<double> lambda_grid_;
  int n_vms_max_;
  SolverConfig solver_;
  std::vector<std::vector<ThresholdCurve>> curves_;  // [lambda_index][N-1]
  std::string created_;
};

/// Solves one curve family per grid rate and assembles the table.
/// Fails (std::runtime_error naming lambda and N) if any curve does not
/// converge.
PolicyTable build_table(const ComplexityDistribution& d,
                        const std::vector<double>& lambda_grid, int n_vms_max,
                        const SolverConfig& cfg, std::string created = {});

/// JSON persistence. Round trips are lossless: values are written with
/// shortest-round-trip precision. load_table validates the document and
/// throws std::runtime_error naming the offending field on malformed or
/// inconsistent input.
void save_table(const PolicyTable& table, const std::string& path);
PolicyTable load_table(const std::string& path);

}  // namespace seqalloc
