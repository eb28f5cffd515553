#pragma once

#include "cli_config.hpp"

namespace bloch::cli {

int cmd_exceptional(const JobConfig& config, const Options& options);
int cmd_polarizability(const JobConfig& config, const Options& options);
int cmd_dispersion(const JobConfig& config, const Options& options);
int cmd_cluster(const JobConfig& config, const Options& options);
int cmd_validate(const Options& options);

/// --out flag > BLOCH_OUT environment variable > "out".
std::string resolve_out_root(const std::string& flag_value);

}  // namespace bloch::cli
