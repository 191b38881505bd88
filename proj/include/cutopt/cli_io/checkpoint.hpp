#pragma once

#include "cutopt/cli_io/config.hpp"
#include "cutopt/optimize/optimizer.hpp"

#include <string>

namespace cutopt {

/// Text checkpoint: a "cutopt-checkpoint 1" header, the config hash, the
/// iteration counters, the embedded config, the history so far and the
/// full design density vector with round-trip precision.
struct Checkpoint {
  ProblemConfig config;
  std::string hash;
  OptimizationState state;
};

void write_checkpoint(const std::string& path, const ProblemConfig& config, const OptimizationState& state);

/// Throws IoError for unreadable files and ConfigError for malformed
/// content or a hash that does not match the embedded config.
Checkpoint read_checkpoint(const std::string& path);

/// Throws ConfigError unless the checkpoint was written for this config.
void require_matching_config(const Checkpoint& cp, const ProblemConfig& config);

}  // namespace cutopt
