#include "seqalloc/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqalloc {

double ComplexityDistribution::hazard_gap(double x) const {
  const double f = pdf(x);
  if (f <= 0.0) {
    throw std::domain_error("hazard_gap: pdf vanishes at x = " +
                            std::to_string(x));
  }
  return (1.0 - cdf(x)) / f;
}

ExponentialComplexity::ExponentialComplexity(double rate_alpha)
    : alpha_(rate_alpha) {
  if (!(rate_alpha > 0.0) || !std::isfinite(rate_alpha)) {
    throw std::invalid_argument("ExponentialComplexity: alpha must be > 0");
  }
}

double ExponentialComplexity::pdf(double x) const {
  if (x < 0.0) {
    throw std::domain_error("pdf: negative complexity");
  }
  return alpha_ * std::exp(-alpha_ * x);
}

double ExponentialComplexity::cdf(double x) const {
  if (x < 0.0) {
    throw std::domain_error("cdf: negative complexity");
  }
  return -std::expm1(-alpha_ * x);
}

double ExponentialComplexity::inv_cdf(double u) const {
  if (!(u >= 0.0) || u >= 1.0) {
    throw std::domain_error("inv_cdf: u must lie in [0, 1)");
  }
  return -std::log1p(-u) / alpha_;
}

std::unique_ptr<ComplexityDistribution> ExponentialComplexity::clone() const {
  return std::make_unique<ExponentialComplexity>(alpha_);
}

}  // namespace seqalloc
