#include "seqalloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqalloc {

namespace {

constexpr double kRescaleLimit = 1e280;

void validate_finite(const std::vector<double>& values, int n_vms,
                     int iteration) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(
          "solve_threshold: non-finite iterate for N = " +
          std::to_string(n_vms) + " at iteration " + std::to_string(iteration));
    }
  }
}

}  // namespace

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(n_nodes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = node(i);
  }
  out.back() = t_end;
  return out;
}

void TimeGrid::validate() const {
  if (!(t_end > t_start)) {
    throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
  }
  if (n_steps < 2) {
    throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
  }
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw std::invalid_argument("TimeGrid: bounds must be finite");
  }
}

double ThresholdCurve::value_at(double t) const {
  const double lo = grid.t_start;
  const double hi = grid.t_end;
  if (t < lo || t > hi) {
    throw std::domain_error("ThresholdCurve::value_at: t outside grid span");
  }
  const double x = (t - lo) / grid.dt();
  auto i = static_cast<std::size_t>(x);
  if (i >= static_cast<std::size_t>(grid.n_steps)) {
    return values.back();
  }
  const double frac = x - static_cast<double>(i);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("SolverConfig: tolerance must be > 0");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  }
  if (!(damping > 0.0) || damping > 1.0) {
    throw std::invalid_argument("SolverConfig: damping must lie in (0, 1]");
  }
  grid.validate();
}

namespace {

/// Reciprocals 1/k for the running Poisson term, grown on demand; the
/// division would otherwise dominate the solver's inner loop.
const double* reciprocal_table(int n) {
  thread_local std::vector<double> table{0.0, 1.0};
  while (table.size() <= static_cast<std::size_t>(n)) {
    table.push_back(1.0 / static_cast<double>(table.size()));
  }
  return table.data();
}

/// j_factor body without argument checks; inv_k = reciprocal_table(n_vms).
inline double j_factor_kernel(double h, int n_vms, const double* inv_k) {
  if (n_vms == 1) {
    return 1.0;
  }
  if (h == 0.0) {
    return 0.0;
  }
  // term_k = H^k / k! up to a common rescale shared with the running sum,
  // so only the ratio survives and neither quantity overflows.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n_vms; ++k) {
    term *= h * inv_k[k];
    sum += term;
    if (sum > kRescaleLimit) {
      term /= kRescaleLimit;
      sum /= kRescaleLimit;
    }
    if (term == 0.0) {
      return 0.0;  // remaining terms underflow; J is below double precision
    }
  }
  return term / sum;
}

}  // namespace

double j_factor(double accumulated_intensity, int n_vms) {
  const double h = accumulated_intensity;
  if (n_vms < 1) {
    throw std::domain_error("j_factor: n_vms must be >= 1");
  }
  if (h < 0.0 || !std::isfinite(h)) {
    throw std::domain_error("j_factor: accumulated intensity must be finite and >= 0");
  }
  return j_factor_kernel(h, n_vms, reciprocal_table(n_vms));
}

double mean_survival(double s_a, double s_b) {
  if (s_a <= 0.0 || s_b <= 0.0) {
    return 0.0;
  }
  const double diff = s_a - s_b;
  if (std::abs(diff) <= 1e-12 * std::max(s_a, s_b)) {
    return 0.5 * (s_a + s_b);
  }
  return s_a * s_b * std::log(s_a / s_b) / diff;
}

namespace {

/// One application of the Picard map. State shared across nodes:
///  - survivals and hazard gaps at the current iterate,
///  - per-interval qualified-arrival masses m_j = lambda*dt*mean_survival,
///  - their prefix sums C (so H(t_i, s_j) = C_j - C_i).
/// The tail integral for node i is a trapezoid in the accumulated-intensity
/// variable: lambda * int G(y) J_N ds = int hazard_gap(y(s(h))) J_N(h) dh.
void apply_picard_map(const ComplexityDistribution& d, double lambda,
                      int n_vms, const TimeGrid& grid,
                      const std::vector<double>& y, std::vector<double>& out) {
  const std::size_t n = y.size();
  const double dt = grid.dt();

  std::vector<double> gap(n);
  std::vector<double> mass(n - 1);
  std::vector<double> cum(n, 0.0);
  {
    std::vector<double> surv(n);
    for (std::size_t i = 0; i < n; ++i) {
      surv[i] = 1.0 - d.cdf(y[i]);
      gap[i] = d.hazard_gap(y[i]);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      mass[j] = lambda * dt * mean_survival(surv[j], surv[j + 1]);
      cum[j + 1] = cum[j] + mass[j];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    double integral = 0.0;
    double j_prev = gap[i] * j_factor(0.0, n_vms);
    for (std::size_t j = i; j + 1 < n; ++j) {
      const double j_next = gap[j + 1] * j_factor(cum[j + 1] - cum[i], n_vms);
      integral += mass[j] * 0.5 * (j_prev + j_next);
      j_prev = j_next;
    }
    out[i] = gap[i] + integral;
  }
}

}  // namespace

ThresholdCurve solve_threshold(const ComplexityDistribution& d, double lambda,
                               int n_vms, const SolverConfig& cfg,
                               const ThresholdCurve* warm_start) {
  cfg.validate();
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("solve_threshold: lambda must be > 0");
  }
  if (n_vms < 1) {
    throw std::invalid_argument("solve_threshold: n_vms must be >= 1");
  }
  if (warm_start != nullptr && !(warm_start->grid == cfg.grid)) {
    throw std::invalid_argument("solve_threshold: warm start uses a different grid");
  }

  ThresholdCurve curve;
  curve.n_vms = n_vms;
  curve.grid = cfg.grid;

  const std::size_t n = cfg.grid.n_nodes();
  std::vector<double> y;
  if (warm_start != nullptr) {
    y = warm_start->values;
  } else {
    y.assign(n, infinite_limit_threshold(d));
  }

  std::vector<double> mapped(n);
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;

  while (iterations < cfg.max_iterations) {
    ++iterations;
    apply_picard_map(d, lambda, n_vms, cfg.grid, y, mapped);
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = cfg.damping * mapped[i] + (1.0 - cfg.damping) * y[i];
      residual = std::max(residual, std::abs(next - y[i]));
      y[i] = next;
    }
    validate_finite(y, n_vms, iterations);
    if (residual <= cfg.tolerance) {
      converged = true;
      break;
    }
  }

  curve.values = std::move(y);
  curve.converged = converged;
  curve.iterations = iterations;
  curve.residual = residual;
  return curve;
}

std::vector<ThresholdCurve> solve_family(const ComplexityDistribution& d,
                                         double lambda, int n_vms_max,
                                         const SolverConfig& cfg) {
  if (n_vms_max < 1) {
    throw std::invalid_argument("solve_family: n_vms_max must be >= 1");
  }
  std::vector<ThresholdCurve> family;
  family.reserve(static_cast<std::size_t>(n_vms_max));
  for (int n = 1; n <= n_vms_max; ++n) {
    const ThresholdCurve* warm = family.empty() ? nullptr : &family.back();
    try {
      family.push_back(solve_threshold(d, lambda, n, cfg, warm));
    } catch (const std::exception& e) {
      throw std::runtime_error("solve_family: failure at N = " +
                               std::to_string(n) + ": " + e.what());
    }
  }
  return family;
}

double infinite_limit_threshold(const ComplexityDistribution& d) {
  const auto excess = [&d](double y) { return y - d.hazard_gap(y); };

  double lo = 0.0;
  double f_lo = excess(lo);
  if (f_lo == 0.0) {
    return lo;
  }
  if (f_lo > 0.0) {
    throw std::runtime_error(
        "infinite_limit_threshold: hazard gap negative at the origin");
  }
  double hi = 1.0;
  double f_hi = excess(hi);
  int expansions = 0;
  while (f_hi < 0.0) {
    if (++expansions > 64) {
      throw std::runtime_error(
          "infinite_limit_threshold: no sign change found while expanding bracket");
    }
    hi *= 2.0;
    f_hi = excess(hi);
  }

  constexpr double kTol = 1e-10;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = excess(mid);
    if (f_mid == 0.0) {
      return mid;
    }
    (f_mid < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace seqalloc
