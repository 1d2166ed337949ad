#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "seqalloc/distribution.hpp"

using namespace seqalloc;

TEST_CASE("exponential pdf closed forms") {
  const ExponentialComplexity d1(1.0);
  CHECK(d1.pdf(0.0) == doctest::Approx(1.0));
  CHECK(d1.pdf(1.0) == doctest::Approx(std::exp(-1.0)));
  const ExponentialComplexity d2(2.0);
  CHECK(d2.pdf(0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK_THROWS_AS(d1.pdf(-0.1), std::domain_error);
}

TEST_CASE("exponential cdf and quantile closed forms") {
  const ExponentialComplexity d1(1.0);
  CHECK(d1.cdf(std::log(2.0)) == doctest::Approx(0.5));
  CHECK(d1.cdf(0.0) == 0.0);
  CHECK(d1.inv_cdf(0.0) == 0.0);
  const ExponentialComplexity d2(2.0);
  CHECK(d2.inv_cdf(0.5) == doctest::Approx(std::log(2.0) / 2.0));
  CHECK_THROWS_AS(d1.inv_cdf(1.0), std::domain_error);
  CHECK_THROWS_AS(d1.inv_cdf(-0.01), std::domain_error);
  CHECK_THROWS_AS(d1.cdf(-1.0), std::domain_error);
}

TEST_CASE("quantile inverts the cdf on random support points") {
  const double alphas[] = {0.25, 1.0, 4.0};
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(1e-6, 30.0);
  for (double alpha : alphas) {
    const ExponentialComplexity d(alpha);
    for (int i = 0; i < 1000; ++i) {
      const double x = unif(gen) / alpha;
      const double back = d.inv_cdf(d.cdf(x));
      CHECK(std::abs(back - x) <= 1e-9 * x);
    }
  }
}

TEST_CASE("hazard gap is constant 1/alpha and matches its composition") {
  const ExponentialComplexity d1(1.0);
  CHECK(d1.hazard_gap(0.0) == doctest::Approx(1.0));
  CHECK(d1.hazard_gap(3.7) == doctest::Approx(1.0));
  const ExponentialComplexity d4(4.0);
  CHECK(d4.hazard_gap(3.0) == doctest::Approx(0.25));
  const ExponentialComplexity dh(0.5);
  CHECK(dh.hazard_gap(0.0) == doctest::Approx(2.0));

  // composition identity, bitwise as computed
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double x = unif(gen);
    const double composed = (1.0 - d1.cdf(x)) / d1.pdf(x);
    CHECK(d1.hazard_gap(x) == composed);
  }
}

TEST_CASE("virtual valuation x - hazard_gap(x) is nondecreasing") {
  const ExponentialComplexity d(0.7);
  double prev = -1e300;
  for (int i = 0; i <= 500; ++i) {
    const double x = 0.05 * i;
    const double vv = x - d.hazard_gap(x);
    CHECK(vv >= prev - 1e-12);
    prev = vv;
  }
}

TEST_CASE("constructor rejects non-positive rates") {
  CHECK_THROWS_AS(ExponentialComplexity(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ExponentialComplexity(-1.0), std::invalid_argument);
}
