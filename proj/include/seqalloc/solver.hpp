#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "seqalloc/distribution.hpp"

namespace seqalloc {

/// Uniform grid over the allocation horizon [t_start, t_end].
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 12.0;
  int n_steps = 1024;  // grid has n_steps + 1 nodes

  double dt() const { return (t_end - t_start) / n_steps; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(n_steps) + 1; }
  double node(std::size_t i) const { return t_start + static_cast<double>(i) * dt(); }
  std::vector<double> nodes() const;

  /// Throws std::invalid_argument if t_end <= t_start or n_steps < 2.
  void validate() const;

  bool operator==(const TimeGrid&) const = default;
};

/// Qualification-threshold curve y_N(t) sampled on a TimeGrid, for a fixed
/// count of available VMs. Produced by solve_threshold; immutable by
/// convention once solved.
struct ThresholdCurve {
  int n_vms = 1;
  TimeGrid grid;
  std::vector<double> values;  // one per grid node, finite and >= 0
  bool converged = false;
  int iterations = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();

  /// Linear interpolation between grid nodes. Throws std::domain_error if
  /// t lies outside [t_start, t_end].
  double value_at(double t) const;
};

struct SolverConfig {
  double tolerance = 1e-8;  // sup-norm stopping threshold
  int max_iterations = 500;
  double damping = 1.0;  // next = damping * map(y) + (1 - damping) * y
  TimeGrid grid{};

  void validate() const;
};

/// Inventory-weighting factor J_N evaluated at accumulated qualified
/// intensity H >= 0. Equals a Poisson term over a Poisson partial sum,
///   J_N(H) = (H^(N-1)/(N-1)!) / sum_{k=0}^{N-1} H^k/k!,
/// computed with running term ratios and rescaling so it stays finite for
/// N in the hundreds and H up to 1e4 and beyond. Throws std::domain_error
/// for n_vms < 1 or H < 0.
double j_factor(double accumulated_intensity, int n_vms);

/// Mean of the survival S = 1 - F over one grid interval whose threshold
/// endpoints have survivals s_a, s_b, under the model that 1/S varies
/// linearly across the interval (exact for the exponential-family optimal
/// curve). Used for the per-interval qualified-arrival mass.
double mean_survival(double s_a, double s_b);

/// Solves the optimal-threshold integral equation for n_vms available VMs
/// by damped Picard iteration on cfg.grid. Returns the curve with honest
/// converged/iterations/residual fields; throws std::runtime_error if the
/// iteration produces non-finite values.
ThresholdCurve solve_threshold(const ComplexityDistribution& d, double lambda,
                               int n_vms, const SolverConfig& cfg,
                               const ThresholdCurve* warm_start = nullptr);

/// Curves for N = 1..n_vms_max, each warm-started from its predecessor.
/// Errors from solve_threshold are rethrown annotated with the failing N.
std::vector<ThresholdCurve> solve_family(const ComplexityDistribution& d,
                                         double lambda, int n_vms_max,
                                         const SolverConfig& cfg);

/// Root of y = (1 - F(y))/f(y): the limiting threshold for a large VM
/// pool. Bisection to 1e-10; throws std::runtime_error if no bracket with
/// a sign change is found.
double infinite_limit_threshold(const ComplexityDistribution& d);

}  // namespace seqalloc
