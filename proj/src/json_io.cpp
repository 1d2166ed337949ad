#include "seqalloc/json_io.hpp"

#include <stdexcept>
#include <string>

namespace seqalloc {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

const nlohmann::json& require(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    fail(std::string("missing field '") + field + "'");
  }
  return *it;
}

}  // namespace

nlohmann::json distribution_to_json(const ComplexityDistribution& d) {
  nlohmann::json j;
  j["family"] = d.family();
  if (const auto* e = dynamic_cast<const ExponentialComplexity*>(&d)) {
    j["alpha"] = e->rate_alpha();
  }
  return j;
}

std::unique_ptr<ComplexityDistribution> distribution_from_json(
    const nlohmann::json& j) {
  if (!j.is_object()) {
    fail("'distribution' must be an object");
  }
  const std::string family = require(j, "family").get<std::string>();
  if (family == "exponential") {
    const double alpha = require(j, "alpha").get<double>();
    return std::make_unique<ExponentialComplexity>(alpha);
  }
  fail("unknown distribution family '" + family + "'");
}

nlohmann::json solver_config_to_json(const SolverConfig& cfg) {
  return nlohmann::json{{"tolerance", cfg.tolerance},
                        {"max_iterations", cfg.max_iterations},
                        {"damping", cfg.damping}};
}

SolverConfig solver_config_from_json(const nlohmann::json& j, double horizon,
                                     int n_steps) {
  SolverConfig cfg;
  cfg.grid = TimeGrid{0.0, horizon, n_steps};
  if (!j.is_object()) {
    fail("'solver' must be an object");
  }
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  cfg.damping = j.value("damping", cfg.damping);
  cfg.validate();
  return cfg;
}

nlohmann::json pricing_to_json(const PricingParams& pricing) {
  nlohmann::json sched = nlohmann::json::array();
  for (const auto& [t, v] : pricing.s_schedule) {
    sched.push_back(nlohmann::json::array({t, v}));
  }
  return nlohmann::json{
      {"q", pricing.q}, {"kappa_t", pricing.kappa_t}, {"s_schedule", sched}};
}

PricingParams pricing_from_json(const nlohmann::json& j) {
  PricingParams pricing;
  if (!j.is_object()) {
    fail("'pricing' must be an object");
  }
  pricing.q = j.value("q", pricing.q);
  pricing.kappa_t = j.value("kappa_t", pricing.kappa_t);
  if (auto it = j.find("s_schedule"); it != j.end()) {
    for (const auto& entry : *it) {
      if (!entry.is_array() || entry.size() != 2) {
        fail("'s_schedule' entries must be [time, value] pairs");
      }
      pricing.s_schedule.emplace_back(entry[0].get<double>(),
                                      entry[1].get<double>());
    }
  }
  pricing.validate();
  return pricing;
}

}  // namespace seqalloc
