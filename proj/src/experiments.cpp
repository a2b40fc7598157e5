// SPDX-License-Identifier: Apache-2.0
#include "lfsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace lfsim {

namespace {

constexpr std::size_t kCdfGridPoints = 200;

bool same_model(const RadioModel& a, const RadioModel& b) {
    return a.pl_ref_db == b.pl_ref_db && a.ref_distance_m == b.ref_distance_m &&
           a.exponent == b.exponent && a.shadow_std_db == b.shadow_std_db && a.name == b.name;
}

double nearest_rank(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

Point sample_test_point(const Scenario& scenario, RngStream stream) {
    // Rejection keeps test points outside every AP's reference radius, where
    // the channel model is defined. The rejected area is vanishingly small,
    // so the distribution stays effectively uniform over A.
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double x = stream.uniform01() * scenario.area_width_m;
        const double y = stream.uniform01() * scenario.area_height_m;
        const Point p{x, y};
        bool ok = true;
        for (const Point& ap : scenario.aps) {
            if (distance(p, ap) < scenario.radio.ref_distance_m) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    throw InvalidParameter("sample_test_point: area is covered by AP reference radii");
}

void run_chunked(int num_items, int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int i = 0; i < num_items; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const int n_threads = std::min(workers, num_items);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < num_items; i += n_threads) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    if (series.empty()) {
        throw InvalidParameter("experiment: at least one series required");
    }
    for (const Series& s : series) {
        s.match.validate();
        if (s.radio) s.radio->validate();
    }
    if (num_test_points < 1) {
        throw InvalidParameter("experiment: num_test_points must be >= 1");
    }
    if (samples_per_rp < 1) {
        throw InvalidParameter("experiment: samples_per_rp must be >= 1");
    }
    if (workers < 1) {
        throw InvalidParameter("experiment: workers must be >= 1");
    }
}

ErrorStats ErrorStats::from_errors(std::vector<double> errors) {
    if (errors.empty()) {
        throw InvalidParameter("ErrorStats: empty error list");
    }
    ErrorStats st;
    st.errors = std::move(errors);
    std::vector<double> sorted = st.errors;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double e : sorted) sum += e;
    st.mean = sum / static_cast<double>(sorted.size());
    st.p50 = nearest_rank(sorted, 0.50);
    st.p90 = nearest_rank(sorted, 0.90);
    st.p95 = nearest_rank(sorted, 0.95);
    const double max_err = sorted.back();
    st.cdf_grid.resize(kCdfGridPoints);
    st.cdf_value.resize(kCdfGridPoints);
    for (std::size_t i = 0; i < kCdfGridPoints; ++i) {
        const double e = max_err * static_cast<double>(i) / (kCdfGridPoints - 1);
        st.cdf_grid[i] = e;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), e);
        st.cdf_value[i] =
            static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    }
    return st;
}

Fingerprint draw_online_fingerprint(const Scenario& scenario, Point test_point,
                                    RngStream trial_stream) {
    const std::size_t q = scenario.ap_count();
    const DoaModel doa = scenario.doa_model();
    Fingerprint fp;
    fp.rssi_dbm.resize(q);
    fp.doa.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        const Point ap = scenario.aps[j];
        const double d = distance(test_point, ap);
        RngStream s = trial_stream.substream(j);
        fp.rssi_dbm[j] = sample_rssi(scenario.radio, scenario.tx_power_dbm, d, s);
        fp.doa[j] = sample_doa(bearing(test_point, ap), doa, s);
    }
    return fp;
}

double run_trial(const FingerprintDatabase& db, const Scenario& scenario, Point test_point,
                 const MatchConfig& cfg, RngStream trial_stream) {
    if (test_point.x < 0.0 || test_point.x > scenario.area_width_m || test_point.y < 0.0 ||
        test_point.y > scenario.area_height_m) {
        throw InvalidParameter("run_trial: test point outside the area");
    }
    const Fingerprint fp = draw_online_fingerprint(scenario, test_point, trial_stream);
    return distance(estimate(db, fp, cfg), test_point);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    // Distinct radio models across series; databases are shared per model.
    std::vector<Scenario> model_scenarios;
    std::vector<std::size_t> series_model(cfg.series.size());
    for (std::size_t s = 0; s < cfg.series.size(); ++s) {
        const RadioModel& model = cfg.series[s].radio_or(cfg.scenario.radio);
        std::size_t found = model_scenarios.size();
        for (std::size_t m = 0; m < model_scenarios.size(); ++m) {
            if (same_model(model_scenarios[m].radio, model)) {
                found = m;
                break;
            }
        }
        if (found == model_scenarios.size()) {
            Scenario sc = cfg.scenario;
            sc.radio = model;
            model_scenarios.push_back(std::move(sc));
        }
        series_model[s] = found;
    }

    const RngStream master(cfg.master_seed);
    std::vector<FingerprintDatabase> dbs;
    dbs.reserve(model_scenarios.size());
    for (const Scenario& sc : model_scenarios) {
        dbs.push_back(build_database(sc, survey_grid(sc), cfg.samples_per_rp, master));
    }

    const RngStream tp_root = master.substream(stream_tags::kTestPoints);
    std::vector<Point> test_points(static_cast<std::size_t>(cfg.num_test_points));
    for (int t = 0; t < cfg.num_test_points; ++t) {
        test_points[static_cast<std::size_t>(t)] =
            sample_test_point(cfg.scenario, tp_root.substream(static_cast<std::uint64_t>(t)));
    }

    const RngStream online_root = master.substream(stream_tags::kOnline);
    std::vector<std::vector<double>> errors(
        cfg.series.size(), std::vector<double>(static_cast<std::size_t>(cfg.num_test_points)));

    run_chunked(cfg.num_test_points, cfg.workers, [&](int t) {
        const auto ti = static_cast<std::size_t>(t);
        const RngStream trial_stream = online_root.substream(static_cast<std::uint64_t>(t));
        // One measurement per radio model per trial; the identical substream
        // makes the underlying Gaussian draws shared across models.
        std::vector<Fingerprint> fps(model_scenarios.size());
        for (std::size_t m = 0; m < model_scenarios.size(); ++m) {
            fps[m] = draw_online_fingerprint(model_scenarios[m], test_points[ti], trial_stream);
        }
        for (std::size_t s = 0; s < cfg.series.size(); ++s) {
            const std::size_t m = series_model[s];
            const Point est = estimate(dbs[m], fps[m], cfg.series[s].match);
            errors[s][ti] = distance(est, test_points[ti]);
        }
    });

    ExperimentResult result;
    result.test_points = std::move(test_points);
    for (std::size_t s = 0; s < cfg.series.size(); ++s) {
        result.labels.push_back(cfg.series[s].label);
        result.stats.push_back(ErrorStats::from_errors(std::move(errors[s])));
    }
    return result;
}

std::vector<std::pair<double, double>> cdf(std::span<const double> errors,
                                           std::span<const double> grid) {
    if (errors.empty()) {
        throw InvalidParameter("cdf: empty error list");
    }
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double e : grid) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), e);
        out.emplace_back(e, static_cast<double>(it - sorted.begin()) /
                                static_cast<double>(sorted.size()));
    }
    return out;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kRpInterval: return "rp_interval";
        case SweepAxis::kApCount: return "ap_count";
        case SweepAxis::kExponent: return "exponent";
        case SweepAxis::kShadowStd: return "shadow_std";
        case SweepAxis::kDoaStd: return "doa_std";
        case SweepAxis::kK: return "k";
    }
    return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view token) {
    for (SweepAxis axis : {SweepAxis::kRpInterval, SweepAxis::kApCount, SweepAxis::kExponent,
                           SweepAxis::kShadowStd, SweepAxis::kDoaStd, SweepAxis::kK}) {
        if (token == to_string(axis)) return axis;
    }
    return std::nullopt;
}

std::vector<std::string> sweep_axis_names() {
    return {"rp_interval", "ap_count", "exponent", "shadow_std", "doa_std", "k"};
}

namespace {

int integral_axis_value(double v, const char* axis) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1.0) {
        throw InvalidParameter(std::string("sweep: axis ") + axis +
                               " requires positive integer values");
    }
    return static_cast<int>(r);
}

ExperimentConfig apply_axis(ExperimentConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::kRpInterval:
            if (!(value > 0.0)) throw InvalidParameter("sweep: rp_interval must be > 0");
            cfg.scenario.rp_interval_m = value;
            break;
        case SweepAxis::kApCount:
            cfg.scenario.aps = place_aps(cfg.scenario.area_width_m, cfg.scenario.area_height_m,
                                         integral_axis_value(value, "ap_count"));
            break;
        case SweepAxis::kExponent:
            cfg.scenario.radio.exponent = value;
            for (Series& s : cfg.series) {
                if (s.radio) s.radio->exponent = value;
            }
            break;
        case SweepAxis::kShadowStd:
            if (!(value >= 0.0)) throw InvalidParameter("sweep: shadow_std must be >= 0");
            cfg.scenario.radio.shadow_std_db = value;
            for (Series& s : cfg.series) {
                if (s.radio) s.radio->shadow_std_db = value;
            }
            break;
        case SweepAxis::kDoaStd:
            if (!(value >= 0.0)) throw InvalidParameter("sweep: doa_std must be >= 0");
            cfg.scenario.doa_std_deg = value;  // degrees at this boundary
            break;
        case SweepAxis::kK: {
            const int k = integral_axis_value(value, "k");
            for (Series& s : cfg.series) {
                if (s.match.method != Method::kNn) s.match.k = k;
            }
            break;
        }
    }
    return cfg;
}

double mean_numeric_crlb(const Scenario& sc, std::span<const Point> points) {
    if (!(sc.radio.shadow_std_db > 0.0) || !(sc.doa_std_deg > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const CrlbParams params = CrlbParams::from_scenario(sc);
    double sum = 0.0;
    std::size_t n = 0;
    for (const Point& p : points) {
        try {
            sum += crlb_numeric(p, params);
            ++n;
        } catch (const SingularFim&) {
            // degenerate bearing geometry; skip the point
        } catch (const DegenerateGeometry&) {
            // point on an AP; skip
        }
    }
    return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<SweepResult> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                               std::span<const double> values) {
    cfg.validate();
    if (values.empty()) {
        throw InvalidParameter("sweep: at least one axis value required");
    }
    std::vector<SweepResult> results(cfg.series.size());
    for (std::size_t s = 0; s < cfg.series.size(); ++s) {
        results[s].series_label = cfg.series[s].label;
        results[s].axis = axis;
        results[s].values.assign(values.begin(), values.end());
    }
    for (double value : values) {
        const ExperimentConfig run_cfg = apply_axis(cfg, axis, value);
        const ExperimentResult run = run_experiment(run_cfg);
        for (std::size_t s = 0; s < cfg.series.size(); ++s) {
            results[s].stats.push_back(run.stats[s]);
            Scenario sc = run_cfg.scenario;
            sc.radio = run_cfg.series[s].radio_or(run_cfg.scenario.radio);
            results[s].mean_crlb_m2.push_back(mean_numeric_crlb(sc, run.test_points));
        }
    }
    return results;
}

}  // namespace lfsim
