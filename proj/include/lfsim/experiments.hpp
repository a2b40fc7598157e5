// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lfsim/crlb.hpp"
#include "lfsim/matching.hpp"

namespace lfsim {

/// One curve in a comparison: an estimator configuration, optionally paired
/// with its own radio model (cross-band comparisons re-synthesize both the
/// database and the online draws under each band while sharing the
/// underlying noise streams).
struct Series {
    std::string label;
    MatchConfig match;
    std::optional<RadioModel> radio;  ///< defaults to the scenario's model

    const RadioModel& radio_or(const RadioModel& fallback) const {
        return radio ? *radio : fallback;
    }
};

struct ExperimentConfig {
    Scenario scenario;
    std::vector<Series> series;
    int num_test_points = 2000;
    int samples_per_rp = 100;
    std::uint64_t master_seed = 42;
    int workers = 1;

    void validate() const;
};

/// Error summary of one series: raw per-trial error distances (in trial
/// order), their mean, nearest-rank percentiles, and the empirical CDF
/// P(E <= e) on a 200-point grid from 0 to the maximum error.
struct ErrorStats {
    std::vector<double> errors;
    double mean = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p95 = 0.0;
    std::vector<double> cdf_grid;
    std::vector<double> cdf_value;

    static ErrorStats from_errors(std::vector<double> errors);
};

struct ExperimentResult {
    std::vector<std::string> labels;
    std::vector<ErrorStats> stats;  ///< one per series, same order
    std::vector<Point> test_points;
};

/// Online measurement at a test point: one noisy draw per AP (RSSI and DoA
/// from the same per-AP substream, so bands sharing a stream share noise).
Fingerprint draw_online_fingerprint(const Scenario& scenario, Point test_point,
                                    RngStream trial_stream);

/// One Monte Carlo trial: draw an online fingerprint at the test point,
/// estimate, and return the geometric error distance in meters.
double run_trial(const FingerprintDatabase& db, const Scenario& scenario, Point test_point,
                 const MatchConfig& cfg, RngStream trial_stream);

/// Full paired comparison: every series sees the same test points and the
/// same measurement noise streams, so differences are estimator-only.
/// Deterministic for a fixed master seed, independent of cfg.workers.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Empirical CDF values P(E <= e) of `errors` on an arbitrary grid.
std::vector<std::pair<double, double>> cdf(std::span<const double> errors,
                                           std::span<const double> grid);

enum class SweepAxis { kRpInterval, kApCount, kExponent, kShadowStd, kDoaStd, kK };

std::string to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view token);
std::vector<std::string> sweep_axis_names();

/// Sweep of one series over the axis values. Scenario and database are
/// rebuilt per value under the same master seed; the optional mean CRLB is
/// the numeric bound averaged over the run's test points (singular points
/// skipped), present whenever the noise parameters admit it.
struct SweepResult {
    std::string series_label;
    SweepAxis axis = SweepAxis::kRpInterval;
    std::vector<double> values;
    std::vector<ErrorStats> stats;          ///< one per value
    std::vector<double> mean_crlb_m2;       ///< NaN when undefined
};

/// Runs the sweep for every series in the config; model-parameter axes
/// (exponent, shadow_std) apply to each series' own radio model.
std::vector<SweepResult> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                               std::span<const double> values);

}  // namespace lfsim
