// SPDX-License-Identifier: Apache-2.0
//
// lfsim: indoor location-fingerprint positioning simulator.
// Subcommands: build-db, locate, simulate, sweep, crlb-map.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lfsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lfsim: indoor location-fingerprint positioning simulator"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    int workers = 1;
    app.add_option("--seed", seed, "master seed (default 42, never time-based)");
    app.add_option("--workers", workers, "parallel workers; outputs are identical for any count")
        ->default_val(1);

    std::string config_path;
    std::string preset;
    std::string out;
    const auto add_config_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (key = value, [sections])");
        cmd->add_option("--preset", preset, "built-in configuration (fig5..fig16, figk)");
    };

    CLI::App* build_db = app.add_subcommand("build-db", "build the offline fingerprint database");
    add_config_flags(build_db);
    build_db->add_option("--out", out, "output database CSV path")->required();

    std::string db_path;
    std::string measurement;
    std::string method = "wknn";
    std::optional<int> k;
    CLI::App* locate = app.add_subcommand("locate", "locate one inline measurement");
    locate->add_option("--db", db_path, "fingerprint database CSV")->required();
    locate
        ->add_option("--measurement", measurement,
                     "2Q comma-separated values: Q RSSI (dBm) then Q DoA (degrees)")
        ->required();
    locate->add_option("--method", method, "nn|knn|wknn|doalf (default wknn)");
    locate->add_option("--k", k, "neighbor count (default 4; 1 for nn)");

    CLI::App* simulate = app.add_subcommand("simulate", "run the configured comparison");
    add_config_flags(simulate);
    simulate->add_option("--out", out, "output directory")->required();

    std::string axis;
    std::string values;
    CLI::App* sweep = app.add_subcommand("sweep", "sweep one scenario parameter");
    add_config_flags(sweep);
    sweep->add_option("--axis", axis,
                      "rp_interval|ap_count|exponent|shadow_std|doa_std|k "
                      "(default: the config's [sweep] section)");
    sweep->add_option("--values", values, "comma-separated axis values");
    sweep->add_option("--out", out, "output directory")->required();

    double grid_step = 10.0;
    CLI::App* crlb_map = app.add_subcommand("crlb-map", "error-bound map over the area");
    add_config_flags(crlb_map);
    crlb_map->add_option("--grid-step", grid_step, "map grid spacing in meters")->default_val(10.0);
    crlb_map->add_option("--out", out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lfsim::cli::kUsageError;
    }

    lfsim::cli::GlobalOptions opts;
    opts.seed = seed;
    opts.workers = workers;

    if (build_db->parsed()) {
        return lfsim::cli::cmd_build_db(config_path, preset, out, opts, std::cerr);
    }
    if (locate->parsed()) {
        return lfsim::cli::cmd_locate(db_path, measurement, method, k, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        return lfsim::cli::cmd_simulate(config_path, preset, out, opts, std::cerr);
    }
    if (sweep->parsed()) {
        return lfsim::cli::cmd_sweep(config_path, preset, axis, values, out, opts, std::cerr);
    }
    if (crlb_map->parsed()) {
        return lfsim::cli::cmd_crlb_map(config_path, preset, grid_step, out, opts, std::cerr);
    }
    return lfsim::cli::kUsageError;
}
