#pragma once

#include "moldmpc/harness/experiment.hpp"

#include <filesystem>
#include <string>

namespace moldmpc
{

/// JSON form of the experiment configuration. Keys mirror the struct fields;
/// temperatures inside `plant` are in K, everything else in SI units or C as
/// named. Missing keys keep their built-in defaults, so a partial file only
/// overrides what it lists. Unknown top-level keys are rejected.
std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);

void save_experiment_config(const ExperimentConfig& config, const std::filesystem::path& path);
/// Throws InputError when the file cannot be read or parsed, ConfigError
/// when the result does not validate.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

} // namespace moldmpc
