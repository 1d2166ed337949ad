// Throwaway measurement driver used while calibrating tolerances; not a
// registered test.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "seqalloc/oracle.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/revenue.hpp"
#include "seqalloc/sim.hpp"
#include "seqalloc/solver.hpp"

using namespace seqalloc;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "all";
  const ExponentialComplexity d(1.0);
  const double lambda = 100.0;
  const double horizon = 12.0;
  SolverConfig cfg;
  cfg.grid = TimeGrid{0.0, horizon, 1024};

  if (mode == "all" || mode == "n1") {
    double t0 = now_s();
    const auto y1 = solve_threshold(d, lambda, 1, cfg);
    double sup = 0.0;
    for (std::size_t i = 0; i < y1.values.size(); ++i) {
      const double t = cfg.grid.node(i);
      sup = std::max(sup, std::abs(y1.values[i] -
                                   std::log(std::exp(1.0) + lambda * (horizon - t))));
    }
    std::printf("[n1] conv=%d its=%d res=%.2e sup_err=%.3e y0=%.8f (%.2fs)\n",
                y1.converged, y1.iterations, y1.residual, sup, y1.values[0],
                now_s() - t0);
  }

  if (mode == "all" || mode == "cold100") {
    for (double damping : {1.0, 0.5}) {
      SolverConfig c2 = cfg;
      c2.damping = damping;
      c2.max_iterations = 300;
      double t0 = now_s();
      const auto y = solve_threshold(d, lambda, 100, c2);
      std::printf("[cold100] damping=%.2f conv=%d its=%d res=%.2e y0=%.5f (%.1fs)\n",
                  damping, y.converged, y.iterations, y.residual, y.values[0],
                  now_s() - t0);
    }
  }

  if (mode == "all" || mode == "family") {
    double t0 = now_s();
    const auto family = solve_family(d, lambda, 100, cfg);
    const double secs = now_s() - t0;
    int total_iters = 0;
    bool all_conv = true;
    for (const auto& c : family) {
      total_iters += c.iterations;
      all_conv = all_conv && c.converged;
    }
    bool ordered = true;
    for (std::size_t k = 1; k < family.size(); ++k) {
      for (std::size_t i = 0; i < family[k].values.size(); ++i) {
        if (family[k].values[i] > family[k - 1].values[i] + 1e-6) {
          ordered = false;
        }
      }
    }
    std::printf("[family] conv=%d iters=%d ordered=%d y100(0)=%.5f (%.1fs)\n",
                all_conv, total_iters, ordered, family.back().values[0], secs);

    // Corollary-1 distances as N doubles
    t0 = now_s();
    std::vector<ThresholdCurve> ext = family;
    for (int n = 101; n <= 200; ++n) {
      ext.push_back(solve_threshold(d, lambda, n, cfg, &ext.back()));
    }
    const double limit = infinite_limit_threshold(d);
    std::printf("[limit] ");
    for (int n : {25, 50, 100, 200}) {
      double dist = 0.0;
      for (double v : ext[static_cast<std::size_t>(n) - 1].values) {
        dist = std::max(dist, std::abs(v - limit));
      }
      std::printf("N=%d:%.5f ", n, dist);
    }
    std::printf("(ext %.1fs)\n", now_s() - t0);

    // DP cross-oracle
    t0 = now_s();
    DpConfig dp_cfg;
    dp_cfg.n_time_steps = 12000;
    for (int n : {1, 10, 100}) {
      const auto dp = dp_solve(d, lambda, horizon, n, dp_cfg);
      const auto& curve = family[static_cast<std::size_t>(n) - 1];
      double worst = 0.0;
      double worst_t = 0.0;
      for (std::size_t i = 0; i < curve.values.size(); ++i) {
        const double t = curve.grid.node(i);
        if (t > horizon - 0.5) break;
        const double rel = std::abs(curve.values[i] - dp.threshold_at(n, t)) /
                           curve.values[i];
        if (rel > worst) {
          worst = rel;
          worst_t = t;
        }
      }
      std::printf("[dp] N=%d max_rel=%.3f%% at t=%.2f (K=%d)\n", n,
                  100.0 * worst, worst_t, dp_cfg.n_time_steps);
    }
    std::printf("[dp] total %.1fs\n", now_s() - t0);

    // perturbation margins
    PricingParams pricing;
    for (int n : {1, 10, 100}) {
      const auto rep = perturbation_check(family[static_cast<std::size_t>(n) - 1],
                                          d, lambda, n, pricing);
      std::printf("[perturb] N=%d base=%.5f margins:", n, rep.base_revenue);
      for (const auto& e : rep.entries) {
        std::printf(" %.2f:%.5f", e.scale, e.margin);
      }
      std::printf(" all_below=%d\n", rep.all_below());
    }

    // MC vs quadrature (frozen curve, no events) and adaptive vs frozen
    auto table = PolicyTable(d.clone(), horizon, {lambda}, 100, cfg,
                             {family}, "");
    Scenario base;
    base.horizon = horizon;
    base.initial_vms = 100;
    base.lambda = lambda;
    base.distribution = DistributionPtr(d.clone());
    base.adaptive = false;
    base.switch_on_allocation = false;

    RevenueQuery rq;
    rq.curve = family.back();
    rq.pricing = PricingParams{};
    rq.lambda = lambda;
    rq.t_from = 0.0;
    rq.n_vms = 100;
    const double quad = expected_revenue(rq, d);

    t0 = now_s();
    const auto mc = monte_carlo(base, table, 10000, 1);
    std::printf("[mc] frozen: mean=%.4f se=%.4f quad=%.4f |diff|/se=%.2f (%.1fs)\n",
                mc.mean_revenue, mc.std_error, quad,
                std::abs(mc.mean_revenue - quad) / mc.std_error, now_s() - t0);

    // also check the switching variant against the same functional
    Scenario sw = base;
    sw.adaptive = true;
    sw.switch_on_allocation = true;
    const auto mc_sw = monte_carlo(sw, table, 10000, 1);
    std::printf("[mc] switching: mean=%.4f se=%.4f (diff vs quad %.2f se)\n",
                mc_sw.mean_revenue, mc_sw.std_error,
                std::abs(mc_sw.mean_revenue - quad) / mc_sw.std_error);

    // adaptive vs frozen on the event schedule, paired seeds
    Scenario ev = base;
    ev.capacity_events = {{2.0, -15}, {4.0, 10}, {6.0, -5}, {8.0, 5}};
    ev.adaptive = true;
    ev.switch_on_allocation = true;
    Scenario ev_frozen = ev;
    ev_frozen.adaptive = false;
    t0 = now_s();
    double sum_d = 0.0, ss_d = 0.0;
    const int pairs = 10000;
    for (int s = 0; s < pairs; ++s) {
      ev.seed = static_cast<std::uint64_t>(s);
      ev_frozen.seed = ev.seed;
      const double diff = run(ev, table).totals.final_revenue -
                          run(ev_frozen, table).totals.final_revenue;
      sum_d += diff;
      ss_d += diff * diff;
    }
    const double mean_d = sum_d / pairs;
    const double sd = std::sqrt((ss_d - pairs * mean_d * mean_d) / (pairs - 1));
    std::printf("[paired] mean_diff=%.4f sd=%.4f t=%.2f (%.1fs)\n", mean_d, sd,
                mean_d / (sd / std::sqrt(static_cast<double>(pairs))),
                now_s() - t0);
  }
  return 0;
}
