#pragma once

#include <vector>

#include "seqalloc/distribution.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/solver.hpp"

namespace seqalloc {

struct DpConfig {
  int n_time_steps = 600;
  void validate() const;
};

/// Backward-induction value function over (remaining units k, time step i),
/// with at most one arrival per step. Deliberately a different formulation
/// from the integral-equation solver so agreement between the two is
/// meaningful evidence.
struct DpSolution {
  double horizon = 0.0;
  int n_vms = 0;
  int n_time_steps = 0;
  // value[k][i], k = 0..n_vms, i = 0..n_time_steps (terminal column zero)
  std::vector<std::vector<double>> value;
  // threshold[k][i] = value[k][i+1] - value[k-1][i+1], k >= 1, i < n_time_steps
  std::vector<std::vector<double>> threshold;

  double dt() const { return horizon / n_time_steps; }
  /// Threshold in force during the step containing t, for k remaining units.
  double threshold_at(int k, double t) const;
};

/// Requires lambda * dt <= 0.25 (single-arrival approximation); throws
/// std::invalid_argument otherwise.
DpSolution dp_solve(const ComplexityDistribution& d, double lambda,
                    double horizon, int n_vms, const DpConfig& cfg);

/// The DP threshold curve for n_vms units sampled on the DP step grid.
ThresholdCurve dp_threshold(const ComplexityDistribution& d, double lambda,
                            double horizon, int n_vms, const DpConfig& cfg);

/// Literal double-sum evaluation of the inventory weighting factor, usable
/// as an independent reference for small n_vms (factorials overflow beyond
/// n_vms ~ 170).
double j_factor_direct(double accumulated_intensity, int n_vms);

struct PerturbationEntry {
  double scale = 1.0;
  double revenue = 0.0;
  double margin = 0.0;  // base revenue minus this revenue
};

struct PerturbationReport {
  double base_revenue = 0.0;
  std::vector<PerturbationEntry> entries;
  /// True when every non-unit scale produced strictly lower revenue.
  bool all_below() const;
};

/// Evaluates the expected-revenue functional under uniformly scaled copies
/// of the curve and reports the margins against the unscaled optimum.
PerturbationReport perturbation_check(const ThresholdCurve& curve,
                                      const ComplexityDistribution& d,
                                      double lambda, int n_vms,
                                      const PricingParams& pricing,
                                      const std::vector<double>& scales = {
                                          0.8, 0.9, 1.1, 1.2});

}  // namespace seqalloc
