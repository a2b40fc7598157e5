// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lfsim/geometry.hpp"
#include "lfsim/rng.hpp"

namespace lfsim {

/// Log-distance path-loss model with Gaussian shadowing:
///   PL(d) = pl_ref_db + 10*exponent*log10(d/ref_distance_m) + N(0, shadow_std_db^2)
/// valid for d >= ref_distance_m.
struct RadioModel {
    double pl_ref_db = 0.0;       ///< loss at the reference distance, dB
    double ref_distance_m = 1.0;  ///< reference distance d0, meters
    double exponent = 2.0;        ///< path-loss exponent n
    double shadow_std_db = 0.0;   ///< shadow-fading standard deviation, dB
    std::string name;

    void validate() const;
};

/// Direction-of-arrival measurement noise: estimates are Gaussian around the
/// true bearing with this standard deviation.
struct DoaModel {
    double doa_std_rad = 0.0;

    void validate() const;
};

/// Free-space loss at reference distance d0: 20*log10(4*pi*d0/wavelength).
/// Throws InvalidParameter for nonpositive inputs.
double free_space_reference(double wavelength_m, double d0_m);

/// Path loss in dB at distance `d`. Deterministic mean when `rng` is null;
/// otherwise one shadowing draw is added (consumed even when the model's
/// shadow_std_db is zero, so parallel streams stay aligned across models).
/// Throws OutOfModelRange when d < ref_distance_m.
double path_loss(const RadioModel& model, double d, RngStream* rng = nullptr);

/// Received signal strength: tx_power_dbm - path_loss(model, d, &rng).
double sample_rssi(const RadioModel& model, double tx_power_dbm, double d, RngStream& rng);

/// Noiseless received signal strength (the shadowing-free mean).
double mean_rssi(const RadioModel& model, double tx_power_dbm, double d);

/// One DoA estimate: true bearing plus Gaussian error, re-canonicalized.
Angle sample_doa(Angle true_bearing, const DoaModel& doa, RngStream& rng);

/// Indoor NLOS presets, addressable as `mmwave60` and `wifi24` from configs
/// and the CLI. Values are kept exactly as published for the two bands
/// (including the negative intercepts); see README for the sign convention.
RadioModel mmwave60_preset();
RadioModel wifi24_preset();

/// Preset lookup by name; empty optional when unknown.
std::optional<RadioModel> radio_preset(std::string_view name);

}  // namespace lfsim
