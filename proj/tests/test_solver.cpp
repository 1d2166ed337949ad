#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "seqalloc/oracle.hpp"
#include "seqalloc/solver.hpp"

using namespace seqalloc;

namespace {

const ExponentialComplexity kUnitExp(1.0);

SolverConfig small_config(double horizon = 12.0, int n_steps = 256) {
  SolverConfig cfg;
  cfg.grid = TimeGrid{0.0, horizon, n_steps};
  return cfg;
}

// closed form for one VM: y(t) = (1/alpha) ln(e + alpha lambda (T - t))
double one_unit_closed_form(double alpha, double lambda, double horizon,
                            double t) {
  return std::log(std::exp(1.0) + alpha * lambda * (horizon - t)) / alpha;
}

}  // namespace

TEST_CASE("time grid validation and node layout") {
  TimeGrid g{0.0, 12.0, 4};
  g.validate();
  CHECK(g.dt() == doctest::Approx(3.0));
  CHECK(g.n_nodes() == 5);
  CHECK(g.nodes().back() == 12.0);
  CHECK_THROWS_AS((TimeGrid{0.0, 0.0, 8}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 1}.validate()), std::invalid_argument);
}

TEST_CASE("j_factor closed cases") {
  CHECK(j_factor(0.0, 1) == 1.0);
  CHECK(j_factor(123.4, 1) == 1.0);
  CHECK(j_factor(0.0, 2) == 0.0);
  CHECK(j_factor(0.0, 50) == 0.0);
  CHECK(j_factor(2.0, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(j_factor(1.0, 0), std::domain_error);
  CHECK_THROWS_AS(j_factor(-0.5, 3), std::domain_error);
}

TEST_CASE("j_factor matches the literal double sum for small N") {
  for (int n = 1; n <= 6; ++n) {
    for (double h : {0.0, 0.1, 1.0, 2.0, 10.0}) {
      const double stable = j_factor(h, n);
      const double direct = j_factor_direct(h, n);
      CHECK(std::abs(stable - direct) <=
            1e-10 * std::max(1e-300, std::abs(direct)));
    }
  }
}

TEST_CASE("j_factor monotone in N and bounded") {
  for (int n = 1; n <= 50; ++n) {
    for (int i = 0; i < 50; ++i) {
      const double h = 0.25 * static_cast<double>(i) * static_cast<double>(i);
      const double a = j_factor(h, n);
      const double b = j_factor(h, n + 1);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
      CHECK(b <= a + 1e-14);
    }
  }
}

TEST_CASE("j_factor stays finite at large N and H") {
  for (double h : {1.0, 400.0, 1e4, 5e4}) {
    for (int n : {170, 500, 800}) {
      const double v = j_factor(h, n);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  // deep underflow region: far more units than expected arrivals
  CHECK(j_factor(0.1, 500) == 0.0);
}

TEST_CASE("one-unit closed form satisfies the threshold equation") {
  // y(t) = 1 + lambda int_t^T exp(-y(s)) ds, checked by composite Simpson
  // on a fine independent grid before the closed form is used as an oracle.
  const double lambda = 100.0;
  const double horizon = 12.0;
  for (double t : {0.0, 3.0, 7.3, 11.0}) {
    const int n = 200000;
    const double h = (horizon - t) / n;
    auto f = [&](double s) {
      return std::exp(-one_unit_closed_form(1.0, lambda, horizon, s));
    };
    double acc = f(t) + f(horizon);
    for (int i = 1; i < n; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * f(t + i * h);
    }
    const double integral = acc * h / 3.0;
    const double rhs = 1.0 + lambda * integral;
    CHECK(std::abs(rhs - one_unit_closed_form(1.0, lambda, horizon, t)) <= 1e-9);
  }
}

TEST_CASE("solved one-unit curve matches the closed form") {
  SolverConfig cfg = small_config(12.0, 1024);
  const double lambda = 100.0;
  const auto curve = solve_threshold(kUnitExp, lambda, 1, cfg);
  REQUIRE(curve.converged);
  double sup = 0.0;
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    const double t = cfg.grid.node(i);
    sup = std::max(sup, std::abs(curve.values[i] -
                                 one_unit_closed_form(1.0, lambda, 12.0, t)));
  }
  CHECK(sup <= 1e-3);
  CHECK(curve.values[0] ==
        doctest::Approx(std::log(std::exp(1.0) + 1200.0)).epsilon(1e-6));
  CHECK(curve.values.back() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("terminal value equals the hazard-gap fixed point") {
  SolverConfig cfg = small_config();
  for (int n : {1, 3, 17}) {
    const auto curve = solve_threshold(kUnitExp, 50.0, n, cfg);
    REQUIRE(curve.converged);
    CHECK(std::abs(curve.values.back() - 1.0) <= 1e-6);
  }
}

TEST_CASE("vanishing arrival rate gives the constant limit curve") {
  SolverConfig cfg = small_config();
  const auto curve = solve_threshold(kUnitExp, 1e-12, 5, cfg);
  REQUIRE(curve.converged);
  for (double v : curve.values) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("family ordering, time monotonicity and warm starts") {
  SolverConfig cfg = small_config(12.0, 192);
  const double lambda = 100.0;
  const auto family = solve_family(kUnitExp, lambda, 25, cfg);
  REQUIRE(family.size() == 25);
  for (const auto& c : family) {
    REQUIRE(c.converged);
  }
  // Theorem-style ordering in N, pointwise
  for (std::size_t k = 1; k < family.size(); ++k) {
    for (std::size_t i = 0; i < family[k].values.size(); ++i) {
      CHECK(family[k].values[i] <= family[k - 1].values[i] + 1e-6);
    }
  }
  // nonincreasing in time for the exponential family
  for (const auto& c : family) {
    for (std::size_t i = 0; i + 1 < c.values.size(); ++i) {
      CHECK(c.values[i] >= c.values[i + 1] - 1e-6);
    }
  }
  // degenerate family equals the direct solve
  const auto single = solve_family(kUnitExp, lambda, 1, cfg);
  const auto direct = solve_threshold(kUnitExp, lambda, 1, cfg);
  REQUIRE(single.size() == 1);
  CHECK(single[0].values == direct.values);
}

TEST_CASE("lower arrival rate lowers the curve") {
  SolverConfig cfg = small_config(12.0, 192);
  const auto lo = solve_family(kUnitExp, 10.0, 10, cfg).back();
  const auto hi = solve_family(kUnitExp, 100.0, 10, cfg).back();
  CHECK(lo.values[0] < hi.values[0]);
}

TEST_CASE("converged curve is a near fixed point of the map") {
  SolverConfig cfg = small_config(12.0, 192);
  const auto curve = solve_threshold(kUnitExp, 100.0, 4, cfg);
  REQUIRE(curve.converged);
  SolverConfig one_step = cfg;
  one_step.max_iterations = 1;
  one_step.tolerance = 1e-300;  // force exactly one sweep
  const auto moved = solve_threshold(kUnitExp, 100.0, 4, one_step, &curve);
  CHECK(moved.residual <= 10.0 * cfg.tolerance);
}

TEST_CASE("curve distance to the large-N limit shrinks as N doubles") {
  SolverConfig cfg = small_config(12.0, 192);
  const double limit = infinite_limit_threshold(kUnitExp);
  const auto family = solve_family(kUnitExp, 100.0, 50, cfg);
  double d25 = 0.0;
  double d50 = 0.0;
  for (std::size_t i = 0; i < family[24].values.size(); ++i) {
    d25 = std::max(d25, std::abs(family[24].values[i] - limit));
    d50 = std::max(d50, std::abs(family[49].values[i] - limit));
  }
  CHECK(d50 < d25);
}

TEST_CASE("infinite limit threshold solves y = hazard_gap(y)") {
  CHECK(infinite_limit_threshold(ExponentialComplexity(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(infinite_limit_threshold(ExponentialComplexity(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(infinite_limit_threshold(ExponentialComplexity(0.25)) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("solver input validation") {
  SolverConfig cfg = small_config();
  CHECK_THROWS_AS(solve_threshold(kUnitExp, -1.0, 1, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_threshold(kUnitExp, 10.0, 0, cfg),
                  std::invalid_argument);
  SolverConfig bad = cfg;
  bad.damping = 0.0;
  CHECK_THROWS_AS(solve_threshold(kUnitExp, 10.0, 1, bad),
                  std::invalid_argument);
  // warm start on a mismatched grid
  const auto warm = solve_threshold(kUnitExp, 10.0, 1, small_config(12.0, 64));
  CHECK_THROWS_AS(solve_threshold(kUnitExp, 10.0, 2, cfg, &warm),
                  std::invalid_argument);
}

TEST_CASE("non-convergence is reported honestly") {
  SolverConfig cfg = small_config(12.0, 128);
  cfg.max_iterations = 2;
  const auto curve = solve_threshold(kUnitExp, 100.0, 1, cfg);
  CHECK_FALSE(curve.converged);
  CHECK(curve.iterations == 2);
  CHECK(curve.residual > cfg.tolerance);
}
