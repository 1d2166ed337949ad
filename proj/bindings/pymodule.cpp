#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "seqalloc/distribution.hpp"
#include "seqalloc/oracle.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/revenue.hpp"
#include "seqalloc/sim.hpp"
#include "seqalloc/solver.hpp"

namespace py = pybind11;
using namespace seqalloc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic VM qualification thresholds, pricing tables and "
            "allocation simulation";

  py::class_<ComplexityDistribution, DistributionPtr>(m, "ComplexityDistribution")
      .def_property_readonly("family", &ComplexityDistribution::family)
      .def("pdf", &ComplexityDistribution::pdf, py::arg("x"))
      .def("cdf", &ComplexityDistribution::cdf, py::arg("x"))
      .def("inv_cdf", &ComplexityDistribution::inv_cdf, py::arg("u"))
      .def("hazard_gap", &ComplexityDistribution::hazard_gap, py::arg("x"));

  py::class_<ExponentialComplexity, ComplexityDistribution,
             std::shared_ptr<ExponentialComplexity>>(m, "ExponentialComplexity")
      .def(py::init<double>(), py::arg("rate_alpha"))
      .def_property_readonly("rate_alpha", &ExponentialComplexity::rate_alpha);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init([](double t_start, double t_end, int n_steps) {
             TimeGrid g{t_start, t_end, n_steps};
             g.validate();
             return g;
           }),
           py::arg("t_start"), py::arg("t_end"), py::arg("n_steps"))
      .def_readonly("t_start", &TimeGrid::t_start)
      .def_readonly("t_end", &TimeGrid::t_end)
      .def_readonly("n_steps", &TimeGrid::n_steps)
      .def_property_readonly("dt", &TimeGrid::dt)
      .def("nodes", &TimeGrid::nodes);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](double tolerance, int max_iterations, double damping,
                       TimeGrid grid) {
             SolverConfig cfg{tolerance, max_iterations, damping, grid};
             cfg.validate();
             return cfg;
           }),
           py::arg("tolerance") = 1e-8, py::arg("max_iterations") = 500,
           py::arg("damping") = 1.0,
           py::arg("grid") = TimeGrid{0.0, 12.0, 1024})
      .def_readonly("tolerance", &SolverConfig::tolerance)
      .def_readonly("max_iterations", &SolverConfig::max_iterations)
      .def_readonly("damping", &SolverConfig::damping)
      .def_readonly("grid", &SolverConfig::grid);

  py::class_<ThresholdCurve>(m, "ThresholdCurve")
      .def_readonly("n_vms", &ThresholdCurve::n_vms)
      .def_readonly("grid", &ThresholdCurve::grid)
      .def_readonly("values", &ThresholdCurve::values)
      .def_readonly("converged", &ThresholdCurve::converged)
      .def_readonly("iterations", &ThresholdCurve::iterations)
      .def_readonly("residual", &ThresholdCurve::residual)
      .def("value_at", &ThresholdCurve::value_at, py::arg("t"));

  m.def("j_factor", &j_factor, py::arg("accumulated_intensity"),
        py::arg("n_vms"));
  m.def("j_factor_direct", &j_factor_direct, py::arg("accumulated_intensity"),
        py::arg("n_vms"));
  m.def("infinite_limit_threshold", &infinite_limit_threshold, py::arg("d"));
  m.def(
      "solve_threshold",
      [](const ComplexityDistribution& d, double lambda, int n_vms,
         const SolverConfig& cfg, const ThresholdCurve* warm) {
        return solve_threshold(d, lambda, n_vms, cfg, warm);
      },
      py::arg("d"), py::arg("lambda_"), py::arg("n_vms"),
      py::arg("cfg") = SolverConfig{}, py::arg("warm_start") = nullptr,
      py::call_guard<py::gil_scoped_release>());
  m.def("solve_family", &solve_family, py::arg("d"), py::arg("lambda_"),
        py::arg("n_vms_max"), py::arg("cfg") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<PricingParams>(m, "PricingParams")
      .def(py::init([](double q, std::vector<std::pair<double, double>> sched,
                       double kappa_t) {
             PricingParams pp{q, std::move(sched), kappa_t};
             pp.validate();
             return pp;
           }),
           py::arg("q") = 1.0,
           py::arg("s_schedule") = std::vector<std::pair<double, double>>{},
           py::arg("kappa_t") = 0.0)
      .def_readonly("q", &PricingParams::q)
      .def_readonly("s_schedule", &PricingParams::s_schedule)
      .def_readonly("kappa_t", &PricingParams::kappa_t)
      .def("s_at", &PricingParams::s_at, py::arg("t"));

  m.def("price", &price, py::arg("pricing"), py::arg("threshold"),
        py::arg("t"));

  py::class_<PolicyTable>(m, "PolicyTable")
      .def_property_readonly("horizon", &PolicyTable::horizon)
      .def_property_readonly("lambda_grid", &PolicyTable::lambda_grid)
      .def_property_readonly("n_vms_max", &PolicyTable::n_vms_max)
      .def_property_readonly("grid", &PolicyTable::grid)
      .def_property_readonly("created", &PolicyTable::created)
      .def_property_readonly("distribution", &PolicyTable::distribution_ptr)
      .def("nearest_lambda_index", &PolicyTable::nearest_lambda_index,
           py::arg("lambda_now"))
      .def("curve", &PolicyTable::curve, py::arg("lambda_index"),
           py::arg("n_vms"), py::return_value_policy::copy)
      .def("lookup", &PolicyTable::lookup, py::arg("lambda_now"),
           py::arg("n_available"), py::arg("t"));

  m.def("build_table", &build_table, py::arg("d"), py::arg("lambda_grid"),
        py::arg("n_vms_max"), py::arg("cfg") = SolverConfig{},
        py::arg("created") = std::string{},
        py::call_guard<py::gil_scoped_release>());
  m.def("save_table", &save_table, py::arg("table"), py::arg("path"));
  m.def("load_table", &load_table, py::arg("path"));

  py::class_<RevenueQuery>(m, "RevenueQuery")
      .def(py::init([](ThresholdCurve curve, PricingParams pricing,
                       double lambda, double t_from, int n_vms) {
             RevenueQuery rq{std::move(curve), std::move(pricing), lambda,
                             t_from, n_vms};
             rq.validate();
             return rq;
           }),
           py::arg("curve"), py::arg("pricing"), py::arg("lambda_"),
           py::arg("t_from") = 0.0, py::arg("n_vms") = 1)
      .def_readonly("curve", &RevenueQuery::curve)
      .def_readonly("pricing", &RevenueQuery::pricing)
      .def_readonly("lambda_", &RevenueQuery::lambda)
      .def_readonly("t_from", &RevenueQuery::t_from)
      .def_readonly("n_vms", &RevenueQuery::n_vms);

  m.def("qualified_intensity", &qualified_intensity, py::arg("curve"),
        py::arg("d"), py::arg("lambda_"), py::arg("s"));
  m.def("waiting_density", &waiting_density, py::arg("curve"), py::arg("d"),
        py::arg("lambda_"), py::arg("n"), py::arg("t"), py::arg("s"));
  m.def("expected_revenue", &expected_revenue, py::arg("query"), py::arg("d"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<CapacityEvent>(m, "CapacityEvent")
      .def(py::init<double, int>(), py::arg("time"), py::arg("delta"))
      .def_readonly("time", &CapacityEvent::time)
      .def_readonly("delta", &CapacityEvent::delta);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](double horizon, int initial_vms, double lambda,
                       DistributionPtr distribution, PricingParams pricing,
                       std::vector<CapacityEvent> events, std::uint64_t seed,
                       bool adaptive, bool switch_on_allocation) {
             Scenario s;
             s.horizon = horizon;
             s.initial_vms = initial_vms;
             s.lambda = lambda;
             s.distribution = std::move(distribution);
             s.pricing = std::move(pricing);
             s.capacity_events = std::move(events);
             s.seed = seed;
             s.adaptive = adaptive;
             s.switch_on_allocation = switch_on_allocation;
             s.validate();
             return s;
           }),
           py::arg("horizon"), py::arg("initial_vms"), py::arg("lambda_"),
           py::arg("distribution"), py::arg("pricing") = PricingParams{},
           py::arg("capacity_events") = std::vector<CapacityEvent>{},
           py::arg("seed") = 0, py::arg("adaptive") = true,
           py::arg("switch_on_allocation") = true)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("adaptive", &Scenario::adaptive)
      .def_readwrite("switch_on_allocation", &Scenario::switch_on_allocation)
      .def_readonly("horizon", &Scenario::horizon)
      .def_readonly("initial_vms", &Scenario::initial_vms)
      .def_readonly("lambda_", &Scenario::lambda);

  py::class_<Arrival>(m, "Arrival")
      .def_readonly("time", &Arrival::time)
      .def_readonly("complexity", &Arrival::complexity);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("time", &TraceRow::time)
      .def_property_readonly(
          "event_type",
          [](const TraceRow& r) {
            return r.kind == TraceRow::Kind::Arrival ? "arrival" : "capacity";
          })
      .def_readonly("complexity", &TraceRow::complexity)
      .def_readonly("threshold", &TraceRow::threshold)
      .def_readonly("qualified", &TraceRow::qualified)
      .def_readonly("price", &TraceRow::price)
      .def_readonly("inventory_after", &TraceRow::inventory_after)
      .def_readonly("cumulative_revenue", &TraceRow::cumulative_revenue);

  py::class_<SimTotals>(m, "SimTotals")
      .def_readonly("n_arrivals", &SimTotals::n_arrivals)
      .def_readonly("n_allocated", &SimTotals::n_allocated)
      .def_readonly("final_revenue", &SimTotals::final_revenue);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("rows", &SimResult::rows)
      .def_readonly("inventory_trace", &SimResult::inventory_trace)
      .def_readonly("revenue_trace", &SimResult::revenue_trace)
      .def_readonly("totals", &SimResult::totals)
      .def_readonly("warnings", &SimResult::warnings);

  py::class_<MonteCarloStats>(m, "MonteCarloStats")
      .def_readonly("mean_revenue", &MonteCarloStats::mean_revenue)
      .def_readonly("std_error", &MonteCarloStats::std_error)
      .def_readonly("mean_allocations", &MonteCarloStats::mean_allocations)
      .def_readonly("n_runs", &MonteCarloStats::n_runs);

  m.def("generate_arrivals", &generate_arrivals, py::arg("lambda_"),
        py::arg("horizon"), py::arg("d"), py::arg("seed"));
  m.def("run", &run, py::arg("scenario"), py::arg("table"),
        py::call_guard<py::gil_scoped_release>());
  m.def("monte_carlo", &monte_carlo, py::arg("scenario"), py::arg("table"),
        py::arg("n_runs"), py::arg("base_seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<DpConfig>(m, "DpConfig")
      .def(py::init([](int n_time_steps) {
             DpConfig cfg{n_time_steps};
             cfg.validate();
             return cfg;
           }),
           py::arg("n_time_steps") = 600)
      .def_readonly("n_time_steps", &DpConfig::n_time_steps);

  py::class_<DpSolution>(m, "DpSolution")
      .def_readonly("horizon", &DpSolution::horizon)
      .def_readonly("n_vms", &DpSolution::n_vms)
      .def_readonly("n_time_steps", &DpSolution::n_time_steps)
      .def_readonly("value", &DpSolution::value)
      .def_readonly("threshold", &DpSolution::threshold)
      .def("threshold_at", &DpSolution::threshold_at, py::arg("k"),
           py::arg("t"));

  m.def("dp_solve", &dp_solve, py::arg("d"), py::arg("lambda_"),
        py::arg("horizon"), py::arg("n_vms"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("dp_threshold", &dp_threshold, py::arg("d"), py::arg("lambda_"),
        py::arg("horizon"), py::arg("n_vms"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<PerturbationEntry>(m, "PerturbationEntry")
      .def_readonly("scale", &PerturbationEntry::scale)
      .def_readonly("revenue", &PerturbationEntry::revenue)
      .def_readonly("margin", &PerturbationEntry::margin);

  py::class_<PerturbationReport>(m, "PerturbationReport")
      .def_readonly("base_revenue", &PerturbationReport::base_revenue)
      .def_readonly("entries", &PerturbationReport::entries)
      .def("all_below", &PerturbationReport::all_below);

  m.def("perturbation_check", &perturbation_check, py::arg("curve"),
        py::arg("d"), py::arg("lambda_"), py::arg("n_vms"), py::arg("pricing"),
        py::arg("scales") = std::vector<double>{0.8, 0.9, 1.1, 1.2},
        py::call_guard<py::gil_scoped_release>());
}
