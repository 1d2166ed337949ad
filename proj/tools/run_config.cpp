#include "run_config.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace seqalloc::cli {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

}  // namespace

Scenario RunConfig::make_scenario() const {
  Scenario s;
  s.horizon = horizon_hours;
  s.initial_vms = initial_vms;
  s.lambda = lambda;
  s.distribution = distribution;
  s.pricing = pricing;
  s.capacity_events = scenario.capacity_events;
  s.seed = scenario.seed;
  s.adaptive = scenario.adaptive;
  s.switch_on_allocation = scenario.switch_on_allocation;
  return s;
}

void RunConfig::validate() const {
  if (!distribution) {
    fail("missing distribution");
  }
  if (!(horizon_hours > 0.0)) {
    fail("horizon_hours must be > 0");
  }
  if (!(lambda > 0.0)) {
    fail("lambda must be > 0");
  }
  if (initial_vms < 0) {
    fail("initial_vms must be >= 0");
  }
  pricing.validate();
  solver.validate();
  if (std::abs(solver.grid.t_end - horizon_hours) > 1e-12 * horizon_hours) {
    fail("solver grid horizon disagrees with horizon_hours");
  }
  if (table.n_vms_max < 1) {
    fail("table.n_vms_max must be >= 1");
  }
  for (std::size_t i = 0; i < table.lambda_grid.size(); ++i) {
    if (!(table.lambda_grid[i] > 0.0) ||
        (i > 0 && !(table.lambda_grid[i] > table.lambda_grid[i - 1]))) {
      fail("table.lambda_grid must be positive and strictly increasing");
    }
  }
  for (int n : solve.n_list) {
    if (n < 1) {
      fail("solve.n_list entries must be >= 1");
    }
  }
  if (revenue.n_vms < 1) {
    fail("revenue.n_vms must be >= 1");
  }
  if (revenue.t_from < 0.0 || revenue.t_from > horizon_hours) {
    fail("revenue.t_from must lie in [0, horizon_hours]");
  }
  for (int n : verify.n_list) {
    if (n < 1) {
      fail("verify.n_list entries must be >= 1");
    }
  }
  for (double sc : verify.scales) {
    if (!(sc > 0.0)) {
      fail("verify.scales must be > 0");
    }
  }
  if (scenario.runs < 1) {
    fail("scenario.runs must be >= 1");
  }
  make_scenario().validate();
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.distribution = std::make_shared<ExponentialComplexity>(1.0);
  cfg.solver.grid = TimeGrid{0.0, cfg.horizon_hours, 1024};
  cfg.table.lambda_grid = {cfg.lambda};
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail("cannot open '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("parse error in '" + path + "': " + e.what());
  }

  RunConfig cfg = default_config();
  try {
    if (auto it = j.find("distribution"); it != j.end()) {
      cfg.distribution = distribution_from_json(*it);
    }
    cfg.horizon_hours = j.value("horizon_hours", cfg.horizon_hours);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.initial_vms = j.value("initial_vms", cfg.initial_vms);
    if (auto it = j.find("pricing"); it != j.end()) {
      cfg.pricing = pricing_from_json(*it);
    }
    int n_steps = 1024;
    if (auto it = j.find("solver"); it != j.end()) {
      n_steps = it->value("n_steps", n_steps);
      cfg.solver = solver_config_from_json(*it, cfg.horizon_hours, n_steps);
    } else {
      cfg.solver.grid = TimeGrid{0.0, cfg.horizon_hours, n_steps};
    }
    if (auto it = j.find("table"); it != j.end()) {
      cfg.table.path = it->value("path", cfg.table.path);
      if (auto lg = it->find("lambda_grid"); lg != it->end()) {
        cfg.table.lambda_grid = lg->get<std::vector<double>>();
      }
      cfg.table.n_vms_max = it->value("n_vms_max", cfg.table.n_vms_max);
      cfg.table.inline_build = it->value("inline", cfg.table.inline_build);
    } else {
      cfg.table.lambda_grid = {cfg.lambda};
    }
    if (auto it = j.find("scenario"); it != j.end()) {
      if (auto ev = it->find("capacity_events"); ev != it->end()) {
        for (const auto& entry : *ev) {
          if (!entry.is_array() || entry.size() != 2) {
            fail("scenario.capacity_events entries must be [time, delta]");
          }
          cfg.scenario.capacity_events.push_back(
              {entry[0].get<double>(), entry[1].get<int>()});
        }
      }
      cfg.scenario.seed = it->value("seed", cfg.scenario.seed);
      cfg.scenario.adaptive = it->value("adaptive", cfg.scenario.adaptive);
      cfg.scenario.switch_on_allocation =
          it->value("switch_on_allocation", cfg.scenario.switch_on_allocation);
      cfg.scenario.runs = it->value("runs", cfg.scenario.runs);
    }
    if (auto it = j.find("solve"); it != j.end()) {
      if (auto nl = it->find("n_list"); nl != it->end()) {
        cfg.solve.n_list = nl->get<std::vector<int>>();
      }
      cfg.solve.out = it->value("out", cfg.solve.out);
    }
    if (auto it = j.find("simulate"); it != j.end()) {
      cfg.simulate.out = it->value("out", cfg.simulate.out);
    }
    if (auto it = j.find("revenue"); it != j.end()) {
      cfg.revenue.n_vms = it->value("n_vms", cfg.revenue.n_vms);
      cfg.revenue.t_from = it->value("t_from", cfg.revenue.t_from);
    }
    if (auto it = j.find("verify"); it != j.end()) {
      if (auto nl = it->find("n_list"); nl != it->end()) {
        cfg.verify.n_list = nl->get<std::vector<int>>();
      }
      cfg.verify.dp_steps = it->value("dp_steps", cfg.verify.dp_steps);
      if (auto sc = it->find("scales"); sc != it->end()) {
        cfg.verify.scales = sc->get<std::vector<double>>();
      }
      cfg.verify.n_vms_max = it->value("n_vms_max", cfg.verify.n_vms_max);
    }
  } catch (const nlohmann::json::exception& e) {
    fail("invalid value in '" + path + "': " + e.what());
  } catch (const std::runtime_error& e) {
    fail(e.what());
  }
  return cfg;
}

std::string timestamp(bool deterministic) {
  if (deterministic) {
    return {};
  }
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace seqalloc::cli
