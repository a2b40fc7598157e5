// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lfsim/radio.hpp"

namespace lfsim {

/// Deployment area plus everything needed to synthesize measurements in it.
/// DoA noise is carried in degrees (the unit used at config and file
/// boundaries); doa_model() converts once for the radians-based internals.
struct Scenario {
    double area_width_m = 100.0;
    double area_height_m = 100.0;
    std::vector<Point> aps;  ///< ordered, Q entries
    double rp_interval_m = 5.0;
    double tx_power_dbm = 0.0;
    RadioModel radio;
    double doa_std_deg = 0.0;

    DoaModel doa_model() const { return DoaModel{deg2rad(doa_std_deg)}; }
    std::size_t ap_count() const { return aps.size(); }
    void validate() const;
};

/// Feature vector of one location: Q RSSI values followed by Q DoA values.
struct Fingerprint {
    std::vector<double> rssi_dbm;
    std::vector<Angle> doa;

    std::size_t ap_count() const { return rssi_dbm.size(); }
    void validate() const;  // equal lengths, nonempty
};

/// One surveyed reference point. `doa_deg` is the authoritative stored form
/// of the angles (what the database file prints); `fp.doa` always equals its
/// radian conversion, so save/load round trips are byte-exact.
struct DatabaseRow {
    Point rp;
    Fingerprint fp;
    std::vector<double> doa_deg;
};

/// Offline fingerprint database: averaged features at every reference point,
/// plus the scenario it was generated from. Immutable once built.
struct FingerprintDatabase {
    Scenario scenario;
    std::uint64_t seed = 0;
    int samples_per_rp = 1;
    std::vector<DatabaseRow> rows;

    std::size_t ap_count() const { return scenario.ap_count(); }
    std::size_t size() const { return rows.size(); }
    void validate() const;
};

/// Uniform survey grid with the given spacing, anchored at (0,0) and
/// including both boundary rows, in row-major order (y outer, x inner).
/// Throws InvalidParameter unless 0 < interval <= min(width, height).
std::vector<Point> deploy_grid(double area_width_m, double area_height_m, double interval_m);

/// AP layout: exactly the four corners for count == 4 (the reference
/// deployment), otherwise `count` points equally spaced along the perimeter
/// starting at (0,0), counterclockwise.
std::vector<Point> place_aps(double area_width_m, double area_height_m, int count);

/// The scenario's survey grid: deploy_grid over the area, minus points
/// closer to any AP than the channel model's reference distance (the model
/// is undefined there; with corner APs this drops the corner grid points).
std::vector<Point> survey_grid(const Scenario& scenario);

/// Builds the offline database: at each grid point, `samples_per_rp` draws of
/// RSSI and DoA per AP are averaged (arithmetic mean for RSSI, circular mean
/// for DoA). Draw substreams are keyed by (RP, AP, sample), so the result is
/// identical no matter how the loop is ordered or parallelized.
/// Throws DegenerateGeometry if a grid point coincides with an AP.
FingerprintDatabase build_database(const Scenario& scenario, const std::vector<Point>& grid,
                                   int samples_per_rp, RngStream master);

/// CSV persistence. The file starts with '#' metadata lines carrying the full
/// scenario, then `x,y,s_1..s_Q,phi_1..phi_Q` with angles in degrees. All
/// values are printed with 17 significant digits and reparse to the exact
/// same doubles.
void save_database(const FingerprintDatabase& db, const std::filesystem::path& path);
FingerprintDatabase load_database(const std::filesystem::path& path);

}  // namespace lfsim
