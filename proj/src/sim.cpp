#include "seqalloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace seqalloc {

namespace {

/// 53-bit uniform in [0, 1) from a mt19937_64 draw; keeps the sampling
/// path independent of standard-library distribution implementations so
/// traces are reproducible across platforms.
double next_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

void Scenario::validate() const {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("Scenario: horizon must be > 0");
  }
  if (initial_vms < 0) {
    throw std::invalid_argument("Scenario: initial_vms must be >= 0");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("Scenario: lambda must be > 0");
  }
  if (!distribution) {
    throw std::invalid_argument("Scenario: missing distribution");
  }
  pricing.validate();
  for (std::size_t i = 0; i < capacity_events.size(); ++i) {
    const auto& ev = capacity_events[i];
    if (ev.time < 0.0 || ev.time > horizon) {
      throw std::invalid_argument("Scenario: capacity event outside [0, horizon]");
    }
    if (i > 0 && ev.time < capacity_events[i - 1].time) {
      throw std::invalid_argument("Scenario: capacity events must be sorted by time");
    }
  }
}

std::vector<Arrival> generate_arrivals(double lambda, double horizon,
                                       const ComplexityDistribution& d,
                                       std::uint64_t seed) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("generate_arrivals: lambda must be > 0");
  }
  std::mt19937_64 gen(seed);
  std::vector<Arrival> arrivals;
  double t = 0.0;
  for (;;) {
    t += -std::log1p(-next_uniform(gen)) / lambda;
    if (t >= horizon) {
      break;
    }
    arrivals.push_back({t, d.inv_cdf(next_uniform(gen))});
  }
  return arrivals;
}

SimResult run(const Scenario& scenario, const PolicyTable& table) {
  scenario.validate();
  if (std::abs(table.horizon() - scenario.horizon) >
      1e-9 * std::max(1.0, scenario.horizon)) {
    throw std::invalid_argument(
        "run: policy table horizon does not match the scenario horizon");
  }

  const auto arrivals = generate_arrivals(
      scenario.lambda, scenario.horizon, *scenario.distribution, scenario.seed);

  SimResult result;
  result.totals.n_arrivals = arrivals.size();
  result.inventory_trace.emplace_back(0.0, scenario.initial_vms);
  result.revenue_trace.emplace_back(0.0, 0.0);

  int available = scenario.initial_vms;
  int capacity_baseline = scenario.initial_vms;  // ignores allocations
  double revenue = 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const auto lookup_count = [&]() {
    if (!scenario.adaptive) {
      return scenario.initial_vms;
    }
    return scenario.switch_on_allocation ? available : capacity_baseline;
  };

  std::size_t ai = 0;
  std::size_t ei = 0;
  while (ai < arrivals.size() || ei < scenario.capacity_events.size()) {
    const bool take_event =
        ei < scenario.capacity_events.size() &&
        (ai >= arrivals.size() ||
         scenario.capacity_events[ei].time <= arrivals[ai].time);
    if (take_event) {
      const auto& ev = scenario.capacity_events[ei++];
      int applied = ev.delta;
      if (available + applied < 0) {
        applied = -available;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "capacity loss of %d at t=%.6f clamped to %d "
                      "(inventory would go negative)",
                      -ev.delta, ev.time, -applied);
        result.warnings.emplace_back(buf);
      }
      available += applied;
      capacity_baseline = std::max(0, capacity_baseline + applied);

      TraceRow row;
      row.time = ev.time;
      row.kind = TraceRow::Kind::Capacity;
      row.complexity = nan;
      row.threshold = table.lookup(scenario.lambda, lookup_count(), ev.time);
      row.qualified = false;
      row.price = nan;
      row.inventory_after = available;
      row.cumulative_revenue = revenue;
      result.rows.push_back(row);
      result.inventory_trace.emplace_back(ev.time, available);
    } else {
      const auto& arr = arrivals[ai++];
      const double threshold =
          table.lookup(scenario.lambda, lookup_count(), arr.time);
      const bool qualified = arr.complexity >= threshold;
      const bool allocate = qualified && available > 0;

      TraceRow row;
      row.time = arr.time;
      row.kind = TraceRow::Kind::Arrival;
      row.complexity = arr.complexity;
      row.threshold = threshold;
      row.qualified = qualified;
      row.price = nan;
      if (allocate) {
        --available;
        row.price = price(scenario.pricing, threshold, arr.time);
        revenue += row.price;
        ++result.totals.n_allocated;
        result.inventory_trace.emplace_back(arr.time, available);
        result.revenue_trace.emplace_back(arr.time, revenue);
      }
      row.inventory_after = available;
      row.cumulative_revenue = revenue;
      result.rows.push_back(row);
    }
  }

  result.totals.final_revenue = revenue;
  return result;
}

MonteCarloStats monte_carlo(const Scenario& scenario, const PolicyTable& table,
                            std::size_t n_runs, std::uint64_t base_seed) {
  if (n_runs < 2) {
    throw std::invalid_argument("monte_carlo: n_runs must be >= 2");
  }
  std::vector<double> revenues(n_runs);
  std::vector<double> allocations(n_runs);

  const auto worker = [&](std::size_t begin, std::size_t end) {
    Scenario local = scenario;
    for (std::size_t i = begin; i < end; ++i) {
      local.seed = base_seed + i;
      const SimResult r = run(local, table);
      revenues[i] = r.totals.final_revenue;
      allocations[i] = static_cast<double>(r.totals.n_allocated);
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            n_runs);
  if (n_threads <= 1) {
    worker(0, n_runs);
  } else {
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (n_runs + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_runs, begin + chunk);
      if (begin >= end) {
        break;
      }
      futures.push_back(
          std::async(std::launch::async, worker, begin, end));
    }
    for (auto& f : futures) {
      f.get();
    }
  }

  MonteCarloStats stats;
  stats.n_runs = n_runs;
  double sum = 0.0;
  double alloc_sum = 0.0;
  for (std::size_t i = 0; i < n_runs; ++i) {
    sum += revenues[i];
    alloc_sum += allocations[i];
  }
  stats.mean_revenue = sum / static_cast<double>(n_runs);
  stats.mean_allocations = alloc_sum / static_cast<double>(n_runs);
  double ss = 0.0;
  for (double r : revenues) {
    const double dev = r - stats.mean_revenue;
    ss += dev * dev;
  }
  stats.std_error = std::sqrt(ss / static_cast<double>(n_runs - 1) /
                              static_cast<double>(n_runs));
  return stats;
}

void write_trace_csv(const SimResult& result, std::ostream& out,
                     const std::string& created) {
  if (!created.empty()) {
    out << "# created " << created << '\n';
  }
  out << "time,event_type,complexity,threshold,qualified,price,"
         "inventory_after,cumulative_revenue\n";
  char buf[64];
  const auto put = [&](double v, const char* fmt) {
    if (std::isnan(v)) {
      return;  // empty field
    }
    if (std::isinf(v)) {
      out << (v > 0 ? "inf" : "-inf");
      return;
    }
    std::snprintf(buf, sizeof(buf), fmt, v);
    out << buf;
  };
  for (const auto& row : result.rows) {
    put(row.time, "%.6f");
    out << ',' << (row.kind == TraceRow::Kind::Arrival ? "arrival" : "capacity")
        << ',';
    put(row.complexity, "%.9g");
    out << ',';
    put(row.threshold, "%.9g");
    out << ',';
    if (row.kind == TraceRow::Kind::Arrival) {
      out << (row.qualified ? '1' : '0');
    }
    out << ',';
    put(row.price, "%.9g");
    out << ',' << row.inventory_after << ',';
    put(row.cumulative_revenue, "%.9g");
    out << '\n';
  }
}

}  // namespace seqalloc
