#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "seqalloc/oracle.hpp"
#include "seqalloc/revenue.hpp"
#include "seqalloc/sim.hpp"

namespace seqalloc::cli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + path + "'");
  }
  return out;
}

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

PolicyTable obtain_table(const RunConfig& cfg) {
  if (cfg.table.inline_build) {
    return build_table(*cfg.distribution, cfg.table.lambda_grid,
                       cfg.table.n_vms_max, cfg.solver,
                       timestamp(cfg.deterministic));
  }
  if (cfg.table.path.empty()) {
    throw std::invalid_argument(
        "no policy table configured; set table.path (build one with the "
        "'table' subcommand) or table.inline=true");
  }
  if (!std::filesystem::exists(cfg.table.path)) {
    throw std::invalid_argument("policy table '" + cfg.table.path +
                                "' not found; build it first with the "
                                "'table' subcommand");
  }
  try {
    return load_table(cfg.table.path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::string& out_override) {
  if (cfg.solve.n_list.empty()) {
    throw std::invalid_argument("solve: empty N list (set solve.n_list or --vms)");
  }
  std::vector<int> ns = cfg.solve.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<ThresholdCurve> curves;
  const ThresholdCurve* warm = nullptr;
  for (int n : ns) {
    ThresholdCurve c = solve_threshold(*cfg.distribution, cfg.lambda, n,
                                       cfg.solver, warm);
    if (!c.converged) {
      throw std::runtime_error("solve: no convergence for lambda=" +
                               fmt(cfg.lambda) + ", N=" + std::to_string(n) +
                               " (residual " + fmt(c.residual) + ")");
    }
    curves.push_back(std::move(c));
    warm = &curves.back();
  }

  const std::string path = out_override.empty() ? cfg.solve.out : out_override;
  auto out = open_out(path);
  const std::string created = timestamp(cfg.deterministic);
  if (!created.empty()) {
    out << "# created " << created << '\n';
  }
  out << "t";
  for (int n : ns) {
    out << ",y_" << n;
  }
  out << '\n';
  const auto nodes = cfg.solver.grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << fmt(nodes[i], "%.6f");
    for (const auto& c : curves) {
      out << ',' << fmt(c.values[i]);
    }
    out << '\n';
  }
  std::cout << "wrote " << path << " (" << ns.size() << " curves, "
            << nodes.size() << " nodes)\n";
  return kExitOk;
}

int cmd_table(const RunConfig& cfg, const std::string& out_override) {
  const std::string path = out_override.empty()
                               ? (cfg.table.path.empty() ? "policy_table.json"
                                                         : cfg.table.path)
                               : out_override;
  const auto t0 = std::chrono::steady_clock::now();
  PolicyTable table =
      build_table(*cfg.distribution, cfg.table.lambda_grid, cfg.table.n_vms_max,
                  cfg.solver, timestamp(cfg.deterministic));
  save_table(table, path);
  const auto secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  std::cout << "wrote " << path << " (" << cfg.table.lambda_grid.size()
            << " rates x N<=" << cfg.table.n_vms_max << ", "
            << fmt(secs, "%.1f") << "s)\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_override) {
  const PolicyTable table = obtain_table(cfg);
  const Scenario scenario = cfg.make_scenario();
  const std::string path =
      out_override.empty() ? cfg.simulate.out : out_override;

  if (cfg.scenario.runs <= 1) {
    const SimResult result = run(scenario, table);
    auto out = open_out(path);
    write_trace_csv(result, out, timestamp(cfg.deterministic));
    for (const auto& w : result.warnings) {
      std::cerr << "warning: " << w << '\n';
    }
    std::cout << "arrivals " << result.totals.n_arrivals << ", allocated "
              << result.totals.n_allocated << ", final revenue "
              << fmt(result.totals.final_revenue) << "\nwrote " << path << '\n';
    return kExitOk;
  }

  const MonteCarloStats stats =
      monte_carlo(scenario, table, cfg.scenario.runs, cfg.scenario.seed);
  auto out = open_out(path);
  const std::string created = timestamp(cfg.deterministic);
  if (!created.empty()) {
    out << "# created " << created << '\n';
  }
  out << "runs,base_seed,mean_revenue,std_error,mean_allocations\n"
      << stats.n_runs << ',' << cfg.scenario.seed << ','
      << fmt(stats.mean_revenue) << ',' << fmt(stats.std_error) << ','
      << fmt(stats.mean_allocations) << '\n';
  std::cout << "runs " << stats.n_runs << ": mean revenue "
            << fmt(stats.mean_revenue) << " (se " << fmt(stats.std_error)
            << "), mean allocations " << fmt(stats.mean_allocations)
            << "\nwrote " << path << '\n';
  return kExitOk;
}

int cmd_revenue(const RunConfig& cfg, const std::string& out_override) {
  const PolicyTable table = obtain_table(cfg);
  const std::size_t li = table.nearest_lambda_index(cfg.lambda);
  const int n = cfg.revenue.n_vms;
  if (n > table.n_vms_max()) {
    throw std::invalid_argument("revenue.n_vms exceeds the table's n_vms_max");
  }
  RevenueQuery rq;
  rq.curve = table.curve(li, n);
  rq.pricing = cfg.pricing;
  rq.lambda = table.lambda_grid()[li];
  rq.t_from = cfg.revenue.t_from;
  rq.n_vms = n;
  const double value = expected_revenue(rq, table.distribution());

  std::cout << "expected_revenue " << fmt(value, "%.12g") << " (lambda "
            << fmt(rq.lambda) << ", N " << n << ", from t=" << fmt(rq.t_from)
            << ", kappa_t " << fmt(cfg.pricing.kappa_t) << ")\n";
  if (!out_override.empty()) {
    auto out = open_out(out_override);
    out << fmt(value, "%.12g") << '\n';
  }
  return kExitOk;
}

namespace {

struct CheckPrinter {
  bool all_ok = true;
  void operator()(bool ok, const std::string& name, const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
  }
};

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  CheckPrinter check;
  const ComplexityDistribution& d = *cfg.distribution;
  const double lambda = cfg.lambda;
  const double horizon = cfg.horizon_hours;

  // J-factor: telescoped implementation against the literal double sum.
  {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
      for (double h : {0.0, 0.1, 1.0, 2.0, 10.0}) {
        const double a = j_factor(h, n);
        const double b = j_factor_direct(h, n);
        const double scale = std::max(1e-30, std::abs(b));
        worst = std::max(worst, std::abs(a - b) / scale);
      }
    }
    check(worst <= 1e-10, "j-factor telescoping identity",
          "max relative gap " + fmt(worst, "%.3e"));
  }
  {
    bool ok = true;
    for (int n = 1; n <= 50 && ok; ++n) {
      for (int i = 0; i < 50 && ok; ++i) {
        const double h = 0.25 * static_cast<double>(i * i);
        const double a = j_factor(h, n);
        const double b = j_factor(h, n + 1);
        ok = b <= a + 1e-12 && a >= 0.0 && a <= 1.0;
      }
    }
    check(ok, "j-factor monotone in N and bounded", ok ? "50x50 sample" : "violated");
  }

  // One-unit curve against the closed form (exponential families only).
  const auto* expo = dynamic_cast<const ExponentialComplexity*>(&d);
  ThresholdCurve y1;
  if (expo != nullptr) {
    y1 = solve_threshold(d, lambda, 1, cfg.solver);
    const double alpha = expo->rate_alpha();
    double sup = 0.0;
    for (std::size_t i = 0; i < y1.values.size(); ++i) {
      const double t = cfg.solver.grid.node(i);
      const double closed =
          std::log(std::exp(1.0) + lambda * alpha * (horizon - t)) / alpha;
      sup = std::max(sup, std::abs(y1.values[i] - closed));
    }
    check(y1.converged && sup <= 1e-3, "one-unit closed form",
          "sup distance " + fmt(sup, "%.3e") + " over " +
              std::to_string(y1.values.size()) + " nodes");
  }

  // Family checks: convergence, boundary, ordering, monotone decay.
  const int n_max = cfg.verify.n_vms_max > 0 ? cfg.verify.n_vms_max
                                             : cfg.table.n_vms_max;
  const auto t_family0 = std::chrono::steady_clock::now();
  const auto family = solve_family(d, lambda, n_max, cfg.solver);
  const double family_secs = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - t_family0)
                                 .count();
  {
    bool conv = true;
    for (const auto& c : family) {
      conv = conv && c.converged;
    }
    check(conv, "family convergence",
          "N=1.." + std::to_string(n_max) + " in " + fmt(family_secs, "%.1f") +
              "s");
    const double limit = infinite_limit_threshold(d);
    double worst = 0.0;
    for (const auto& c : family) {
      worst = std::max(worst, std::abs(c.values.back() - limit));
    }
    check(worst <= 1e-6, "terminal boundary value",
          "max |y_N(T) - limit| = " + fmt(worst, "%.3e"));
    bool ordered = true;
    for (std::size_t k = 1; k < family.size() && ordered; ++k) {
      for (std::size_t i = 0; i < family[k].values.size(); ++i) {
        if (family[k].values[i] > family[k - 1].values[i] + 1e-6) {
          ordered = false;
          break;
        }
      }
    }
    check(ordered, "threshold ordering in N", "pointwise, slack 1e-6");
  }

  // Dynamic-programming cross-oracle.
  {
    DpConfig dp_cfg;
    dp_cfg.n_time_steps =
        cfg.verify.dp_steps > 0
            ? cfg.verify.dp_steps
            : std::max(600, static_cast<int>(std::ceil(lambda * horizon / 0.1)));
    const double t_hi = horizon - 0.5;
    for (int n : cfg.verify.n_list) {
      if (n > n_max) {
        continue;
      }
      const DpSolution dp = dp_solve(d, lambda, horizon, n, dp_cfg);
      const auto& curve = family[static_cast<std::size_t>(n) - 1];
      double worst = 0.0;
      for (std::size_t i = 0; i < curve.values.size(); ++i) {
        const double t = curve.grid.node(i);
        if (t > t_hi) {
          break;
        }
        const double ref = dp.threshold_at(n, t);
        worst = std::max(worst, std::abs(curve.values[i] - ref) /
                                    std::max(1e-12, std::abs(curve.values[i])));
      }
      check(worst <= 0.05, "dynamic-program cross-check N=" + std::to_string(n),
            "max relative distance " + fmt(100.0 * worst, "%.2f") +
                "% on t <= horizon-0.5");
    }
  }

  // Perturbation optimality certificate.
  for (int n : cfg.verify.n_list) {
    if (n > n_max) {
      continue;
    }
    const auto report =
        perturbation_check(family[static_cast<std::size_t>(n) - 1], d, lambda,
                           n, cfg.pricing, cfg.verify.scales);
    std::string detail = "base " + fmt(report.base_revenue, "%.6g") + ";";
    for (const auto& e : report.entries) {
      detail += " x" + fmt(e.scale, "%.3g") + " margin " + fmt(e.margin, "%.4g");
    }
    check(report.all_below(), "perturbation optimality N=" + std::to_string(n),
          detail);
  }

  std::cout << (check.all_ok ? "verification passed\n" : "verification FAILED\n");
  return check.all_ok ? kExitOk : kExitVerification;
}

}  // namespace seqalloc::cli
