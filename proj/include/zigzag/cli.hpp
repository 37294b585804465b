#pragma once

#include <json.hpp>
#include <string>

#include "zigzag/targets.hpp"

namespace zigzag::cli {

using Json = nlohmann::json;

/// Parse a JSON config file; throws ConfigError on missing files or parse
/// errors.
Json load_config_file(const std::string& path);

/// Build a target from its config block.  Named shortcuts: iso-g2, cor-g2,
/// dsc-g2, bimod-g2, lt2, ht2, plus parameterized gaussian /
/// gaussian-mixture / student-t / quartic / gaussian-location and the
/// data-backed dugong / weibull-survival.
TargetSpec target_from_config(const Json& target_cfg);

// Batch commands.  Each returns a process exit status: 0 on success.
// Config errors throw ConfigError and sampler failures propagate; use
// `dispatch` for the documented 0/1/2 exit-code policy.
int cmd_sample(const Json& config);
int cmd_tune(const Json& config);
int cmd_compare(const Json& config);
int cmd_robustness(const Json& config);
int cmd_simulate_data(const Json& config);

/// Run one subcommand with the documented exit codes: 0 success, 1 sampler
/// or IO failure, 2 configuration error.  Diagnostics go to stderr.
int dispatch(const std::string& command, const Json& config);

/// Output root: the ZIGZAG_OUTPUT_ROOT environment variable, or "." when
/// unset.  Artifacts land in <root>/<config.output_dir>/.
std::string output_root();

/// FNV-1a hash of the canonical config dump (output location and worker
/// count excluded), as fixed-width hex.
std::string config_hash(const Json& config);

}  // namespace zigzag::cli
