// SPDX-License-Identifier: Apache-2.0
#include "lfsim/radio.hpp"

#include <cmath>

namespace lfsim {

void RadioModel::validate() const {
    if (!(ref_distance_m > 0.0)) {
        throw InvalidParameter("radio model: ref_distance_m must be > 0");
    }
    if (!(shadow_std_db >= 0.0)) {
        throw InvalidParameter("radio model: shadow_std_db must be >= 0");
    }
    if (!std::isfinite(exponent) || !std::isfinite(pl_ref_db)) {
        throw InvalidParameter("radio model: parameters must be finite");
    }
}

void DoaModel::validate() const {
    if (!(doa_std_rad >= 0.0)) {
        throw InvalidParameter("doa model: doa_std_rad must be >= 0");
    }
}

double free_space_reference(double wavelength_m, double d0_m) {
    if (!(wavelength_m > 0.0)) {
        throw InvalidParameter("free_space_reference: wavelength must be > 0");
    }
    if (!(d0_m > 0.0)) {
        throw InvalidParameter("free_space_reference: reference distance must be > 0");
    }
    return 20.0 * std::log10(4.0 * kPi * d0_m / wavelength_m);
}

double path_loss(const RadioModel& model, double d, RngStream* rng) {
    if (!(d >= model.ref_distance_m)) {
        throw OutOfModelRange("path_loss: distance below the model's reference distance");
    }
    double pl = model.pl_ref_db + 10.0 * model.exponent * std::log10(d / model.ref_distance_m);
    if (rng != nullptr) {
        pl += model.shadow_std_db * rng->normal();
    }
    return pl;
}

double sample_rssi(const RadioModel& model, double tx_power_dbm, double d, RngStream& rng) {
    return tx_power_dbm - path_loss(model, d, &rng);
}

double mean_rssi(const RadioModel& model, double tx_power_dbm, double d) {
    return tx_power_dbm - path_loss(model, d, nullptr);
}

Angle sample_doa(Angle true_bearing, const DoaModel& doa, RngStream& rng) {
    return Angle::from_radians(true_bearing.radians() + doa.doa_std_rad * rng.normal());
}

RadioModel mmwave60_preset() {
    RadioModel m;
    m.pl_ref_db = -75.3;
    m.ref_distance_m = 1.0;
    m.exponent = 1.68;  // 10n = 16.8
    m.shadow_std_db = std::sqrt(2.45);
    m.name = "mmwave60";
    return m;
}

RadioModel wifi24_preset() {
    RadioModel m;
    m.pl_ref_db = -48.5;
    m.ref_distance_m = 1.0;
    m.exponent = 2.05;  // 10n = 20.5
    m.shadow_std_db = std::sqrt(3.04);
    m.name = "wifi24";
    return m;
}

std::optional<RadioModel> radio_preset(std::string_view name) {
    if (name == "mmwave60") return mmwave60_preset();
    if (name == "wifi24") return wifi24_preset();
    return std::nullopt;
}

}  // namespace lfsim
