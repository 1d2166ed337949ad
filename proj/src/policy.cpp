#include "seqalloc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "seqalloc/json_io.hpp"

namespace seqalloc {

double PricingParams::s_at(double t) const {
  double value = 0.0;
  for (const auto& [start, v] : s_schedule) {
    if (start > t) {
      break;
    }
    value = v;
  }
  return value;
}

void PricingParams::validate() const {
  if (!(q >= 0.0) || q > 1.0) {
    throw std::invalid_argument("PricingParams: q must lie in [0, 1]");
  }
  for (std::size_t i = 1; i < s_schedule.size(); ++i) {
    if (s_schedule[i].first < s_schedule[i - 1].first) {
      throw std::invalid_argument("PricingParams: s_schedule must be sorted by time");
    }
  }
}

double price(const PricingParams& pricing, double threshold, double t) {
  if (!std::isfinite(threshold)) {
    throw std::domain_error("price: threshold must be finite");
  }
  return pricing.q * threshold + pricing.s_at(t);
}

PolicyTable::PolicyTable(DistributionPtr distribution, double horizon,
                         std::vector<double> lambda_grid, int n_vms_max,
                         SolverConfig solver,
                         std::vector<std::vector<ThresholdCurve>> curves,
                         std::string created)
    : distribution_(std::move(distribution)),
      lambda_grid_(std::move(lambda_grid)),
      n_vms_max_(n_vms_max),
      solver_(std::move(solver)),
      curves_(std::move(curves)),
      created_(std::move(created)) {
  if (!distribution_) {
    throw std::invalid_argument("PolicyTable: null distribution");
  }
  if (lambda_grid_.empty()) {
    throw std::invalid_argument("PolicyTable: empty lambda grid");
  }
  for (std::size_t i = 0; i < lambda_grid_.size(); ++i) {
    if (!(lambda_grid_[i] > 0.0) ||
        (i > 0 && !(lambda_grid_[i] > lambda_grid_[i - 1]))) {
      throw std::invalid_argument(
          "PolicyTable: lambda grid must be positive and strictly increasing");
    }
  }
  if (n_vms_max_ < 1) {
    throw std::invalid_argument("PolicyTable: n_vms_max must be >= 1");
  }
  if (std::abs(horizon - solver_.grid.t_end) > 1e-12 * std::max(1.0, horizon)) {
    throw std::invalid_argument("PolicyTable: horizon does not match solver grid");
  }
  validate();
}

std::size_t PolicyTable::nearest_lambda_index(double lambda_now) const {
  std::size_t best = 0;
  double best_dist = std::abs(lambda_now - lambda_grid_[0]);
  for (std::size_t i = 1; i < lambda_grid_.size(); ++i) {
    const double dist = std::abs(lambda_now - lambda_grid_[i]);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

const ThresholdCurve& PolicyTable::curve(std::size_t lambda_index,
                                         int n_vms) const {
  if (lambda_index >= curves_.size()) {
    throw std::out_of_range("PolicyTable::curve: lambda index out of range");
  }
  if (n_vms < 1 || n_vms > n_vms_max_) {
    throw std::out_of_range("PolicyTable::curve: n_vms out of range");
  }
  return curves_[lambda_index][static_cast<std::size_t>(n_vms) - 1];
}

double PolicyTable::lookup(double lambda_now, int n_available,
                           double t) const {
  if (n_available < 0) {
    throw std::invalid_argument("PolicyTable::lookup: negative VM count");
  }
  if (t < 0.0 || t > horizon()) {
    throw std::domain_error("PolicyTable::lookup: t outside [0, horizon]");
  }
  if (n_available == 0) {
    return kRejectAllThreshold;
  }
  const std::size_t li = nearest_lambda_index(lambda_now);
  const int n = std::min(n_available, n_vms_max_);
  return curve(li, n).value_at(t);
}

void PolicyTable::validate() const {
  if (curves_.size() != lambda_grid_.size()) {
    throw std::runtime_error("PolicyTable: one curve family required per lambda");
  }
  const std::size_t nodes = solver_.grid.n_nodes();
  constexpr double kOrderSlack = 1e-6;
  for (std::size_t li = 0; li < curves_.size(); ++li) {
    const auto& family = curves_[li];
    if (family.size() != static_cast<std::size_t>(n_vms_max_)) {
      throw std::runtime_error("PolicyTable: family for lambda index " +
                               std::to_string(li) + " is incomplete");
    }
    for (int n = 1; n <= n_vms_max_; ++n) {
      const auto& c = family[static_cast<std::size_t>(n) - 1];
      if (c.n_vms != n || c.values.size() != nodes) {
        throw std::runtime_error("PolicyTable: malformed curve (lambda index " +
                                 std::to_string(li) + ", N=" +
                                 std::to_string(n) + ")");
      }
      if (!c.converged) {
        throw std::runtime_error("PolicyTable: unconverged curve (lambda index " +
                                 std::to_string(li) + ", N=" +
                                 std::to_string(n) + ")");
      }
      for (double v : c.values) {
        if (!std::isfinite(v) || v < 0.0) {
          throw std::runtime_error("PolicyTable: invalid threshold value (N=" +
                                   std::to_string(n) + ")");
        }
      }
      const double terminal = c.values.back();
      if (std::abs(terminal - distribution_->hazard_gap(terminal)) >
          10.0 * solver_.tolerance) {
        throw std::runtime_error(
            "PolicyTable: terminal boundary violated (lambda index " +
            std::to_string(li) + ", N=" + std::to_string(n) + ")");
      }
      if (n > 1) {
        const auto& prev = family[static_cast<std::size_t>(n) - 2];
        for (std::size_t i = 0; i < nodes; ++i) {
          if (c.values[i] > prev.values[i] + kOrderSlack) {
            throw std::runtime_error(
                "PolicyTable: threshold ordering violated between N=" +
                std::to_string(n - 1) + " and N=" + std::to_string(n) +
                " (lambda index " + std::to_string(li) + ")");
          }
        }
      }
    }
  }
}

PolicyTable build_table(const ComplexityDistribution& d,
                        const std::vector<double>& lambda_grid, int n_vms_max,
                        const SolverConfig& cfg, std::string created) {
  cfg.validate();
  if (lambda_grid.empty()) {
    throw std::invalid_argument("build_table: empty lambda grid");
  }
  std::vector<std::vector<ThresholdCurve>> curves;
  curves.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    auto family = solve_family(d, lambda, n_vms_max, cfg);
    for (const auto& c : family) {
      if (!c.converged) {
        throw std::runtime_error(
            "build_table: solver did not converge for lambda=" +
            std::to_string(lambda) + ", N=" + std::to_string(c.n_vms) +
            " (residual " + std::to_string(c.residual) + ")");
      }
    }
    curves.push_back(std::move(family));
  }
  return PolicyTable(d.clone(), cfg.grid.t_end, lambda_grid, n_vms_max, cfg,
                     std::move(curves), std::move(created));
}

void save_table(const PolicyTable& table, const std::string& path) {
  nlohmann::json j;
  j["distribution"] = distribution_to_json(table.distribution());
  j["horizon_hours"] = table.horizon();
  j["lambda_grid"] = table.lambda_grid();
  j["n_vms_max"] = table.n_vms_max();
  j["grid"] = nlohmann::json{{"n_steps", table.grid().n_steps}};
  j["solver"] = solver_config_to_json(table.solver());
  if (!table.created().empty()) {
    j["created"] = table.created();
  }
  nlohmann::json curves = nlohmann::json::object();
  for (std::size_t li = 0; li < table.lambda_grid().size(); ++li) {
    for (int n = 1; n <= table.n_vms_max(); ++n) {
      const std::string key = std::to_string(li) + ":" + std::to_string(n);
      curves[key] = table.curve(li, n).values;
    }
  }
  j["curves"] = std::move(curves);

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_table: cannot open '" + path + "' for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("save_table: write to '" + path + "' failed");
  }
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw std::runtime_error(std::string("load_table: missing field '") +
                             field + "'");
  }
  return *it;
}

}  // namespace

PolicyTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_table: cannot open '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_table: parse error in '" + path +
                             "': " + e.what());
  }

  auto distribution = distribution_from_json(require_field(j, "distribution"));
  const double horizon = require_field(j, "horizon_hours").get<double>();
  const auto lambda_grid =
      require_field(j, "lambda_grid").get<std::vector<double>>();
  const int n_vms_max = require_field(j, "n_vms_max").get<int>();
  const int n_steps =
      require_field(require_field(j, "grid"), "n_steps").get<int>();
  const SolverConfig cfg =
      solver_config_from_json(require_field(j, "solver"), horizon, n_steps);

  const auto& curves_json = require_field(j, "curves");
  std::vector<std::vector<ThresholdCurve>> curves(lambda_grid.size());
  for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
    curves[li].reserve(static_cast<std::size_t>(n_vms_max));
    for (int n = 1; n <= n_vms_max; ++n) {
      const std::string key = std::to_string(li) + ":" + std::to_string(n);
      auto it = curves_json.find(key);
      if (it == curves_json.end()) {
        throw std::runtime_error("load_table: missing curve '" + key + "'");
      }
      ThresholdCurve c;
      c.n_vms = n;
      c.grid = cfg.grid;
      try {
        c.values = it->get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_table: curve '" + key +
                                 "' is not a numeric array: " + e.what());
      }
      if (c.values.size() != cfg.grid.n_nodes()) {
        throw std::runtime_error("load_table: curve '" + key + "' has " +
                                 std::to_string(c.values.size()) +
                                 " values, expected " +
                                 std::to_string(cfg.grid.n_nodes()));
      }
      c.converged = true;  // tables only persist converged builds
      c.iterations = 0;
      c.residual = 0.0;
      curves[li].push_back(std::move(c));
    }
  }

  std::string created = j.value("created", std::string{});
  return PolicyTable(std::move(distribution), horizon, lambda_grid, n_vms_max,
                     cfg, std::move(curves), std::move(created));
}

}  // namespace seqalloc
