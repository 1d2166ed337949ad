#pragma once

#include "seqalloc/distribution.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/solver.hpp"

namespace seqalloc {

/// Inputs for one expected-revenue evaluation: the threshold curve in
/// force, the pricing parameters, the raw arrival rate and how many VMs
/// are counted (n_vms may be smaller than the count the curve was solved
/// for).
struct RevenueQuery {
  ThresholdCurve curve;
  PricingParams pricing;
  double lambda = 0.0;
  double t_from = 0.0;
  int n_vms = 1;

  void validate() const;
};

/// Thinned arrival rate lambda * (1 - F(y(s))) at time s (threshold
/// linearly interpolated on the curve grid).
double qualified_intensity(const ThresholdCurve& curve,
                           const ComplexityDistribution& d, double lambda,
                           double s);

/// Density of the waiting time until the n-th qualified arrival after t,
/// evaluated at s in [t, horizon]. Accumulated intensity is integrated on
/// the curve grid; large n are handled in log space.
double waiting_density(const ThresholdCurve& curve,
                       const ComplexityDistribution& d, double lambda, int n,
                       double t, double s);

/// Total expected revenue collected from rq.t_from to the end of the
/// horizon with n_vms units: sum over units of q * int y(s) h_n(s) ds,
/// plus the constant pricing offset kappa_t.
double expected_revenue(const RevenueQuery& rq, const ComplexityDistribution& d);

}  // namespace seqalloc
