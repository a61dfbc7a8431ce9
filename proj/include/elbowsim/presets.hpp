#pragma once

#include <string>
#include <vector>

#include "elbowsim/config.hpp"

namespace elbowsim {

/// Names accepted by the CLI's `preset` subcommand: fig2..fig7 plus
/// "paper", the batch that runs all six.
std::vector<std::string> preset_names();

/// Resolved manifests for one preset (six manifests for "paper").
/// Throws ConfigError for unknown names.
std::vector<RunManifest> preset_manifests(const std::string& name);

}  // namespace elbowsim
