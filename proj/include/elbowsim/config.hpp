#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "elbowsim/sim.hpp"

namespace elbowsim {

/// Parse or validation failure; message carries line number and field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Where a run writes its artifacts and which column groups it emits.
struct OutputSpec {
    std::string name = "run";
    std::filesystem::path dir = "out";
    bool states = true;
    bool controls = true;
    bool diagnostics = true;
};

/// One fully resolved experiment: what to simulate and where to put it.
struct RunManifest {
    OutputSpec output;
    SimConfig config;

    void validate() const;  ///< throws ConfigError naming the violated invariant
};

/// Parses one INI-style config document with sections [manipulator],
/// [controller], [disturbance], [sim], [output]. Key names mirror the
/// struct fields; unknown sections or keys are rejected. Omitted keys take
/// the documented defaults, which the resolved manifest echoes back.
RunManifest parse_config(const std::string& text);

/// Reads and parses a config file; the default run name is the file stem.
RunManifest parse_config_file(const std::filesystem::path& path);

/// Renders a manifest as a config document that parses back to an
/// equivalent manifest (full float precision).
std::string render_config(const RunManifest& manifest);

}  // namespace elbowsim
