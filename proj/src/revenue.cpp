#include "seqalloc/revenue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace seqalloc {

namespace {

constexpr double kLogSkip = -690.0;  // below exp() underflow to 1e-300

struct IntegrationGrid {
  std::vector<double> t;     // t_from followed by the curve nodes beyond it
  std::vector<double> y;     // interpolated thresholds
  std::vector<double> mass;  // per-interval qualified-arrival mass
  std::vector<double> cum;   // prefix sums of mass (accumulated intensity)
};

IntegrationGrid build_integration_grid(const ThresholdCurve& curve,
                                       const ComplexityDistribution& d,
                                       double lambda, double t_from) {
  const TimeGrid& g = curve.grid;
  IntegrationGrid out;
  out.t.push_back(t_from);
  const double dt = g.dt();
  auto first = static_cast<std::size_t>(
      std::ceil((t_from - g.t_start) / dt - 1e-12));
  if (g.node(first) <= t_from + 1e-15 * std::max(1.0, std::abs(t_from))) {
    ++first;
  }
  for (std::size_t i = first; i < g.n_nodes(); ++i) {
    out.t.push_back(g.node(i));
  }
  if (out.t.size() < 2) {
    out.t.push_back(g.t_end);
  }

  const std::size_t n = out.t.size();
  out.y.resize(n);
  std::vector<double> surv(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = curve.value_at(std::min(out.t[i], g.t_end));
    surv[i] = 1.0 - d.cdf(out.y[i]);
  }
  out.mass.resize(n - 1);
  out.cum.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out.mass[j] =
        lambda * (out.t[j + 1] - out.t[j]) * mean_survival(surv[j], surv[j + 1]);
    out.cum[j + 1] = out.cum[j] + out.mass[j];
  }
  return out;
}

}  // namespace

void RevenueQuery::validate() const {
  if (curve.values.size() != curve.grid.n_nodes()) {
    throw std::invalid_argument("RevenueQuery: malformed curve");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("RevenueQuery: lambda must be > 0");
  }
  if (t_from < curve.grid.t_start || t_from > curve.grid.t_end) {
    throw std::invalid_argument("RevenueQuery: t_from outside the curve span");
  }
  if (n_vms < 1 || n_vms > curve.n_vms) {
    throw std::invalid_argument(
        "RevenueQuery: n_vms must lie in [1, curve.n_vms]");
  }
  pricing.validate();
}

double qualified_intensity(const ThresholdCurve& curve,
                           const ComplexityDistribution& d, double lambda,
                           double s) {
  return lambda * (1.0 - d.cdf(curve.value_at(s)));
}

double waiting_density(const ThresholdCurve& curve,
                       const ComplexityDistribution& d, double lambda, int n,
                       double t, double s) {
  if (n < 1) {
    throw std::domain_error("waiting_density: n must be >= 1");
  }
  if (t > s || s > curve.grid.t_end || t < curve.grid.t_start) {
    throw std::domain_error("waiting_density: need t <= s within the grid span");
  }
  const auto grid = build_integration_grid(curve, d, lambda, t);
  // accumulated intensity H(t, s): prefix sums with linear interpolation
  double h = 0.0;
  for (std::size_t j = 0; j + 1 < grid.t.size(); ++j) {
    if (grid.t[j + 1] <= s) {
      h = grid.cum[j + 1];
    } else {
      const double span = grid.t[j + 1] - grid.t[j];
      const double frac = span > 0.0 ? (s - grid.t[j]) / span : 0.0;
      h = grid.cum[j] + frac * grid.mass[j];
      break;
    }
  }
  const double rate = qualified_intensity(curve, d, lambda, s);
  if (n == 1) {
    return rate * std::exp(-h);
  }
  if (h <= 0.0) {
    return 0.0;
  }
  const double log_density =
      -h + static_cast<double>(n - 1) * std::log(h) - std::lgamma(n);
  return rate * std::exp(log_density);
}

double expected_revenue(const RevenueQuery& rq,
                        const ComplexityDistribution& d) {
  rq.validate();
  const auto grid = build_integration_grid(rq.curve, d, rq.lambda, rq.t_from);
  const std::size_t n_nodes = grid.t.size();
  const double h_max = grid.cum.back();

  std::vector<double> log_cum(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    log_cum[i] = grid.cum[i] > 0.0 ? std::log(grid.cum[i])
                                   : -std::numeric_limits<double>::infinity();
  }

  double total = 0.0;
  std::vector<double> integrand(n_nodes);
  for (int n = 1; n <= rq.n_vms; ++n) {
    const double lgam = std::lgamma(static_cast<double>(n));
    if (n > 1 && h_max > 0.0 &&
        static_cast<double>(n - 1) > h_max &&
        -h_max + static_cast<double>(n - 1) * std::log(h_max) - lgam < kLogSkip) {
      break;  // this and all later units contribute below double precision
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
      double pmf;
      if (grid.cum[i] <= 0.0) {
        pmf = (n == 1) ? 1.0 : 0.0;
      } else {
        pmf = std::exp(-grid.cum[i] +
                       static_cast<double>(n - 1) * log_cum[i] - lgam);
      }
      integrand[i] = pmf > 0.0 ? grid.y[i] * pmf : 0.0;
    }
    // trapezoid in the accumulated-intensity variable:
    //   int y(s) h_n(s) ds = int y(s(h)) pois_{n-1}(h) dh
    double term = 0.0;
    for (std::size_t j = 0; j + 1 < n_nodes; ++j) {
      if (grid.mass[j] > 0.0) {
        term += grid.mass[j] * 0.5 * (integrand[j] + integrand[j + 1]);
      }
    }
    total += rq.pricing.q * term;
  }
  return total + rq.pricing.kappa_t;
}

}  // namespace seqalloc
