#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace lwr::cli {

struct CommandResult {
  int exit_code = 0;  ///< 0 success, 1 when at least one rung failed
  std::vector<std::filesystem::path> files;
};

/// One run; writes the per-step diagnostics and a profile per snapshot time.
CommandResult cmd_run(const RunConfig& config, std::ostream& log);
/// Halving ladder in h (space_ladder holds element counts).
CommandResult cmd_convergence_space(const RunConfig& config, std::ostream& log);
/// Halving ladder in Δt (time_ladder holds step sizes).
CommandResult cmd_convergence_time(const RunConfig& config, std::ostream& log);
/// Sweep over chi_list × deconv_list × degree_list with profiles at snapshot_times.
CommandResult cmd_scenario_study(const RunConfig& config, std::ostream& log);

CommandResult dispatch(Command command, const RunConfig& config, std::ostream& log);

/// Full command line entry point. Returns the process exit code:
/// 0 success, 1 rung failure, 2 configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lwr::cli
