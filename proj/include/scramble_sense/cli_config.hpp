#pragma once

#include <string>
#include <vector>

#include "scramble_sense/harness.hpp"

// Config-driven front end: JSON experiment configs (schema-validated,
// unknown keys rejected), bundled presets, and the run / scaling command
// implementations that write the CSV / JSON artifacts.  The CLI binary is
// a thin argument-parsing wrapper over these functions.

namespace scrsense {

inline constexpr const char *kArtifactVersion = "1.0.0";

// Config or schema problem: surfaces as exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParsedConfig {
    ExperimentConfig experiment;
    std::vector<long long> shots;  // single entry for `run`, sweep for `scaling`
    std::string output_dir = ".";
    std::uint64_t config_hash = 0;  // FNV-1a of the canonical JSON dump
};

// Parse and validate a config document; throws ConfigError on malformed
// JSON, unknown keys, or out-of-range values.
ParsedConfig parse_config_text(const std::string &json_text);
ParsedConfig load_config_file(const std::string &path);

// Bundled preset documents (JSON text): fig2, fig3, ruc, hamiltonian.
std::string preset_config(const std::string &name);
std::vector<std::string> preset_names();

// Command bodies.  Both write files under config.output_dir and return the
// paths written; numerical failures (collisions, singular systems)
// propagate as std::runtime_error and surface as exit code 3.
std::vector<std::string> cmd_run(const ParsedConfig &config);
std::vector<std::string> cmd_scaling(const ParsedConfig &config);

std::uint64_t fnv1a64(const std::string &text);
std::string hex64(std::uint64_t v);

// Shortest round-trip decimal form (stable across runs and platforms).
std::string format_double(double v);

}  // namespace scrsense
