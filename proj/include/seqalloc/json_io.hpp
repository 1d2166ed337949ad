#pragma once

#include <memory>

#include "json.hpp"
#include "seqalloc/distribution.hpp"
#include "seqalloc/policy.hpp"
#include "seqalloc/solver.hpp"

namespace seqalloc {

// Shared JSON (de)serialization used by table files, run configs and the
// CLI. Parsers throw std::runtime_error naming the offending field.

nlohmann::json distribution_to_json(const ComplexityDistribution& d);
std::unique_ptr<ComplexityDistribution> distribution_from_json(
    const nlohmann::json& j);

nlohmann::json solver_config_to_json(const SolverConfig& cfg);
/// Grid bounds are carried separately ("horizon_hours" at the document
/// level), so only tolerance/max_iterations/damping live here.
SolverConfig solver_config_from_json(const nlohmann::json& j, double horizon,
                                     int n_steps);

nlohmann::json pricing_to_json(const PricingParams& pricing);
PricingParams pricing_from_json(const nlohmann::json& j);

}  // namespace seqalloc
