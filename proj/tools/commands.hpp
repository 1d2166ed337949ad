#pragma once

#include <string>

#include "run_config.hpp"

namespace seqalloc::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerification = 3;

int cmd_solve(const RunConfig& cfg, const std::string& out_override);
int cmd_table(const RunConfig& cfg, const std::string& out_override);
int cmd_simulate(const RunConfig& cfg, const std::string& out_override);
int cmd_revenue(const RunConfig& cfg, const std::string& out_override);
int cmd_verify(const RunConfig& cfg);

}  // namespace seqalloc::cli
