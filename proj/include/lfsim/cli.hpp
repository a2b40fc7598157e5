// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "lfsim/config.hpp"

namespace lfsim::cli {

/// Process exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;  ///< bad flags, config errors, bad dimensions
inline constexpr int kIoError = 3;     ///< filesystem failures
inline constexpr int kNumericError = 4;  ///< e.g. an all-singular bound map

struct GlobalOptions {
    std::optional<std::uint64_t> seed;  ///< overrides the config seed
    int workers = 1;
};

/// Builds the offline database for the configured scenario and writes it to
/// `out_path` (plus `<out_path>.manifest.json`). Exactly one of config_path /
/// preset must be nonempty; the same applies to every command below.
int cmd_build_db(const std::string& config_path, const std::string& preset,
                 const std::string& out_path, const GlobalOptions& opts, std::ostream& diag);

/// Locates a single inline measurement (2Q comma-separated values: Q RSSI in
/// dBm then Q DoA in degrees) against a stored database. Prints the estimate
/// and the K neighbor rows to `out`.
int cmd_locate(const std::string& db_path, const std::string& measurement_csv,
               const std::string& method_token, std::optional<int> k, std::ostream& out,
               std::ostream& diag);

/// Runs the configured comparison and writes summary.csv + cdf.csv (or
/// rssi_profile.csv for profile-type configs) plus manifest.json to out_dir.
int cmd_simulate(const std::string& config_path, const std::string& preset,
                 const std::string& out_dir, const GlobalOptions& opts, std::ostream& diag);

/// Runs a parameter sweep; axis/values default to the config's [sweep]
/// section when the flags are empty. One CSV per series.
int cmd_sweep(const std::string& config_path, const std::string& preset,
              const std::string& axis_token, const std::string& values_csv,
              const std::string& out_dir, const GlobalOptions& opts, std::ostream& diag);

/// Evaluates the numeric and closed-form error bounds on a grid over the
/// area. Degenerate rows are flagged, not fatal; the command fails with the
/// numeric exit code only when no grid point admits the numeric bound.
int cmd_crlb_map(const std::string& config_path, const std::string& preset, double grid_step,
                 const std::string& out_path, const GlobalOptions& opts, std::ostream& diag);

}  // namespace lfsim::cli
