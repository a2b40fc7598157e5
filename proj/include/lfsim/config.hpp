// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfsim/experiments.hpp"

namespace lfsim {

/// Seed used when none is given, so default runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Flat key=value configuration with INI-style sections. Keys are stored as
/// "section.key". '#' starts a comment, blank lines are ignored, values keep
/// internal punctuation. Duplicate or unknown keys are rejected.
struct ConfigFile {
    std::map<std::string, std::string> values;

    static ConfigFile parse_text(const std::string& text);
    static ConfigFile parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
};

/// Everything a command needs, resolved from a config file: the experiment
/// itself plus the optional sweep/profile specification, and a flattened
/// echo of every effective value for output metadata.
struct ResolvedConfig {
    ExperimentConfig experiment;
    std::string type = "simulate";  ///< "simulate" or "rssi_profile"
    std::optional<SweepAxis> sweep_axis;
    std::vector<double> sweep_values;
    double profile_max_distance_m = 141.0;
    double profile_step_m = 1.0;
    std::vector<std::pair<std::string, std::string>> flattened;
};

/// Resolves and validates a parsed config, applying defaults (the reference
/// 100x100 m scenario with four corner APs). Throws InvalidParameter on bad
/// values.
ResolvedConfig resolve_config(const ConfigFile& file);

/// Built-in configurations reproducing the simulator's standard comparison
/// figures (`fig5`..`fig16`, `figk`). Empty optional when unknown.
std::optional<std::string> preset_config_text(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace lfsim
