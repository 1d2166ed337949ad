#include "seqalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqalloc/revenue.hpp"

namespace seqalloc {

namespace {

/// E[(X - theta)+]: expected surplus of one arrival over the threshold.
/// Closed form for the exponential family, quadrature otherwise.
double expected_surplus(const ComplexityDistribution& d, double theta) {
  if (const auto* e = dynamic_cast<const ExponentialComplexity*>(&d)) {
    return std::exp(-e->rate_alpha() * theta) / e->rate_alpha();
  }
  // int_theta^inf (1 - F(x)) dx, trapezoid with expanding cutoff
  const double scale = std::max(theta, d.inv_cdf(0.5));
  double upper = std::max(theta + scale, d.inv_cdf(1.0 - 1e-12));
  const int n = 4096;
  const double h = (upper - theta) / n;
  double acc = 0.5 * ((1.0 - d.cdf(theta)) + (1.0 - d.cdf(upper)));
  for (int i = 1; i < n; ++i) {
    acc += 1.0 - d.cdf(theta + i * h);
  }
  return acc * h;
}

}  // namespace

void DpConfig::validate() const {
  if (n_time_steps < 10) {
    throw std::invalid_argument("DpConfig: n_time_steps must be >= 10");
  }
}

double DpSolution::threshold_at(int k, double t) const {
  if (k < 1 || k > n_vms) {
    throw std::invalid_argument("DpSolution::threshold_at: k out of range");
  }
  if (t < 0.0 || t > horizon) {
    throw std::domain_error("DpSolution::threshold_at: t outside [0, horizon]");
  }
  const auto i = std::min(static_cast<int>(t / dt()), n_time_steps - 1);
  return threshold[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
}

DpSolution dp_solve(const ComplexityDistribution& d, double lambda,
                    double horizon, int n_vms, const DpConfig& cfg) {
  cfg.validate();
  if (!(lambda > 0.0) || !(horizon > 0.0) || n_vms < 1) {
    throw std::invalid_argument("dp_solve: need lambda > 0, horizon > 0, n_vms >= 1");
  }
  const int steps = cfg.n_time_steps;
  const double dt = horizon / steps;
  if (lambda * dt > 0.25) {
    throw std::invalid_argument(
        "dp_solve: lambda * dt exceeds 0.25; raise n_time_steps");
  }
  const double p_arrival = -std::expm1(-lambda * dt);

  DpSolution sol;
  sol.horizon = horizon;
  sol.n_vms = n_vms;
  sol.n_time_steps = steps;
  sol.value.assign(static_cast<std::size_t>(n_vms) + 1,
                   std::vector<double>(static_cast<std::size_t>(steps) + 1, 0.0));
  sol.threshold.assign(static_cast<std::size_t>(n_vms) + 1,
                       std::vector<double>(static_cast<std::size_t>(steps), 0.0));

  for (int i = steps - 1; i >= 0; --i) {
    for (int k = 1; k <= n_vms; ++k) {
      const double continue_k = sol.value[k][i + 1];
      const double continue_k1 = sol.value[k - 1][i + 1];
      const double theta = continue_k - continue_k1;  // opportunity cost
      sol.threshold[k][i] = theta;
      sol.value[k][i] = continue_k + p_arrival * expected_surplus(d, theta);
    }
  }
  return sol;
}

ThresholdCurve dp_threshold(const ComplexityDistribution& d, double lambda,
                            double horizon, int n_vms, const DpConfig& cfg) {
  const DpSolution sol = dp_solve(d, lambda, horizon, n_vms, cfg);
  ThresholdCurve curve;
  curve.n_vms = n_vms;
  curve.grid = TimeGrid{0.0, horizon, cfg.n_time_steps};
  curve.values.resize(curve.grid.n_nodes());
  for (int i = 0; i < cfg.n_time_steps; ++i) {
    curve.values[static_cast<std::size_t>(i)] =
        sol.threshold[static_cast<std::size_t>(n_vms)][static_cast<std::size_t>(i)];
  }
  curve.values.back() = 0.0;  // no continuation value at the horizon
  curve.converged = true;
  curve.iterations = cfg.n_time_steps;
  curve.residual = 0.0;
  return curve;
}

double j_factor_direct(double accumulated_intensity, int n_vms) {
  const double h = accumulated_intensity;
  if (n_vms < 1) {
    throw std::domain_error("j_factor_direct: n_vms must be >= 1");
  }
  if (h < 0.0) {
    throw std::domain_error("j_factor_direct: intensity must be >= 0");
  }
  double numerator = 0.0;
  double denominator = 0.0;
  double factorial = 1.0;  // (n-1)!
  for (int n = 1; n <= n_vms; ++n) {
    if (n > 1) {
      factorial *= static_cast<double>(n - 1);
    }
    const double power = std::pow(h, n - 1);
    const double lower =
        n == 1 ? 0.0 : static_cast<double>(n - 1) * std::pow(h, n - 2);
    numerator += (power - lower) / factorial;
    denominator += power / factorial;
  }
  return numerator / denominator;
}

bool PerturbationReport::all_below() const {
  for (const auto& e : entries) {
    if (e.scale != 1.0 && !(e.margin > 0.0)) {
      return false;
    }
  }
  return !entries.empty();
}

PerturbationReport perturbation_check(const ThresholdCurve& curve,
                                      const ComplexityDistribution& d,
                                      double lambda, int n_vms,
                                      const PricingParams& pricing,
                                      const std::vector<double>& scales) {
  PerturbationReport report;
  RevenueQuery base;
  base.curve = curve;
  base.pricing = pricing;
  base.lambda = lambda;
  base.t_from = curve.grid.t_start;
  base.n_vms = n_vms;
  report.base_revenue = expected_revenue(base, d);

  for (double scale : scales) {
    if (!(scale > 0.0)) {
      throw std::invalid_argument("perturbation_check: scales must be > 0");
    }
    RevenueQuery rq = base;
    for (double& v : rq.curve.values) {
      v *= scale;
    }
    PerturbationEntry entry;
    entry.scale = scale;
    entry.revenue = expected_revenue(rq, d);
    entry.margin = report.base_revenue - entry.revenue;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace seqalloc
