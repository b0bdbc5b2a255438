#ifndef TBI_TOOLS_COMMANDS_HPP
#define TBI_TOOLS_COMMANDS_HPP

#include "run_config.hpp"

namespace tbi::cli {

// Each command returns the process exit code: 0 success, 1 computational or
// physics failure, 2 configuration error. Artifacts are byte-stable for
// identical configurations.
int cmd_overlap_curve(const RunConfig& config);
int cmd_violation_map(const RunConfig& config);
int cmd_squid_report(const RunConfig& config);
int cmd_pseudo_map(const RunConfig& config);

/// Sidecar path of an overlap-curve artifact: "<output>.meta.json".
std::string sidecar_path(const std::string& output);

} // namespace tbi::cli

#endif
