#pragma once

#include <memory>
#include <string>

namespace seqalloc {

/// Task-complexity distribution on [0, inf).
///
/// Everything downstream (solver, policy, revenue, simulator) touches the
/// distribution only through this interface, so additional families can be
/// added without changing any solver code.
class ComplexityDistribution {
public:
  virtual ~ComplexityDistribution() = default;

  /// Family tag used in config files (e.g. "exponential").
  virtual std::string family() const = 0;

  /// Density f(x). Throws std::domain_error for x < 0.
  virtual double pdf(double x) const = 0;

  /// Distribution function F(x), nondecreasing with F(0) = 0.
  virtual double cdf(double x) const = 0;

  /// Quantile function; defined for u in [0, 1). Throws std::domain_error
  /// outside that range.
  virtual double inv_cdf(double u) const = 0;

  /// (1 - F(x)) / f(x). Throws std::domain_error where pdf(x) == 0.
  double hazard_gap(double x) const;

  virtual std::unique_ptr<ComplexityDistribution> clone() const = 0;
};

/// Exponential complexity with rate alpha (mean 1/alpha).
class ExponentialComplexity final : public ComplexityDistribution {
public:
  /// Throws std::invalid_argument unless alpha > 0.
  explicit ExponentialComplexity(double rate_alpha);

  double rate_alpha() const noexcept { return alpha_; }

  std::string family() const override { return "exponential"; }
  double pdf(double x) const override;
  double cdf(double x) const override;
  double inv_cdf(double u) const override;
  std::unique_ptr<ComplexityDistribution> clone() const override;

private:
  double alpha_;
};

using DistributionPtr = std::shared_ptr<const ComplexityDistribution>;

}  // namespace seqalloc
