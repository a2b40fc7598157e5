// SPDX-License-Identifier: Apache-2.0
#include "lfsim/cli.hpp"

#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace lfsim::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int guarded(std::ostream& diag, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        diag << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const InvalidParameter& e) {
        diag << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DimensionError& e) {
        diag << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const SingularFim& e) {
        diag << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const SingularTerm& e) {
        diag << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const IoError& e) {
        diag << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        diag << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const Error& e) {
        diag << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kIoError;
    }
}

ConfigFile load_config(const std::string& config_path, const std::string& preset) {
    if (config_path.empty() == preset.empty()) {
        throw InvalidParameter("exactly one of --config and --preset is required");
    }
    if (!preset.empty()) {
        auto text = preset_config_text(preset);
        if (!text) {
            std::string names;
            for (const std::string& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
            throw InvalidParameter("unknown preset '" + preset + "' (known: " + names + ")");
        }
        return ConfigFile::parse_text(*text);
    }
    if (!fs::exists(config_path)) {
        throw InvalidParameter("config file not found: '" + config_path + "'");
    }
    return ConfigFile::parse_file(config_path);
}

ResolvedConfig resolve_with_overrides(const ConfigFile& file, const GlobalOptions& opts) {
    ResolvedConfig rc = resolve_config(file);
    if (opts.seed) {
        rc.experiment.master_seed = *opts.seed;
        for (auto& [k, v] : rc.flattened) {
            if (k == "experiment.seed") v = std::to_string(*opts.seed);
        }
    }
    if (opts.workers < 1) {
        throw InvalidParameter("--workers must be >= 1");
    }
    rc.experiment.workers = opts.workers;
    return rc;
}

std::string metadata_block(const ResolvedConfig& rc,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream out;
    out << "# lfsim v" << kArtifactVersion << "\n";
    for (const auto& [k, v] : rc.flattened) out << "# " << k << "=" << v << "\n";
    for (const auto& [k, v] : extra) out << "# " << k << "=" << v << "\n";
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    f << content;
    if (!f.flush()) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::string crc32_hex(const std::string& content) {
    const auto crc =
        ::crc32(0L, reinterpret_cast<const Bytef*>(content.data()),
                static_cast<uInt>(content.size()));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

/// Accumulates command outputs and writes the run manifest next to them.
class OutputSet {
  public:
    void add(const fs::path& path, const std::string& content) {
        write_file(path, content);
        entries_.emplace_back(path.filename().string(), crc32_hex(content));
    }

    /// Registers a file that was already written through other means.
    void add_existing(const fs::path& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) {
            throw IoError("cannot reopen output '" + path.string() + "'");
        }
        std::ostringstream buf;
        buf << f.rdbuf();
        entries_.emplace_back(path.filename().string(), crc32_hex(buf.str()));
    }

    void write_manifest(const fs::path& manifest_path, const ResolvedConfig& rc,
                        const std::string& command) const {
        nlohmann::ordered_json j;
        j["artifact_version"] = kArtifactVersion;
        j["command"] = command;
        j["seed"] = rc.experiment.master_seed;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto& [k, v] : rc.flattened) cfg[k] = v;
        j["config"] = cfg;
        nlohmann::ordered_json outs = nlohmann::ordered_json::array();
        for (const auto& [name, crc] : entries_) {
            outs.push_back({{"path", name}, {"crc32", crc}});
        }
        j["outputs"] = outs;
        write_file(manifest_path, j.dump(2) + "\n");
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return out;
}

std::string simulate_summary_csv(const ResolvedConfig& rc, const ExperimentResult& result) {
    std::ostringstream out;
    out << metadata_block(rc, {{"command", "simulate"}});
    out << "method,mean_error_m,p50,p90,p95\n";
    for (std::size_t s = 0; s < result.labels.size(); ++s) {
        const ErrorStats& st = result.stats[s];
        out << result.labels[s] << "," << fmt(st.mean) << "," << fmt(st.p50) << ","
            << fmt(st.p90) << "," << fmt(st.p95) << "\n";
    }
    return out.str();
}

std::string simulate_cdf_csv(const ResolvedConfig& rc, const ExperimentResult& result) {
    // Shared grid over the pooled error range so the columns are comparable.
    double pooled_max = 0.0;
    for (const ErrorStats& st : result.stats) {
        pooled_max = std::max(pooled_max, st.errors.empty() ? 0.0 : st.cdf_grid.back());
    }
    constexpr int kPoints = 200;
    std::vector<double> grid(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        grid[static_cast<std::size_t>(i)] = pooled_max * i / (kPoints - 1);
    }
    std::vector<std::vector<std::pair<double, double>>> curves;
    curves.reserve(result.stats.size());
    for (const ErrorStats& st : result.stats) curves.push_back(cdf(st.errors, grid));

    std::ostringstream out;
    out << metadata_block(rc, {{"command", "simulate"}});
    out << "error_m";
    for (const std::string& label : result.labels) out << "," << label;
    out << "\n";
    for (int i = 0; i < kPoints; ++i) {
        out << fmt(grid[static_cast<std::size_t>(i)]);
        for (const auto& curve : curves) out << "," << fmt(curve[static_cast<std::size_t>(i)].second);
        out << "\n";
    }
    return out.str();
}

std::string rssi_profile_csv(const ResolvedConfig& rc) {
    const Scenario& sc = rc.experiment.scenario;
    const std::vector<RadioModel> models = {mmwave60_preset(), wifi24_preset()};
    std::ostringstream out;
    out << metadata_block(rc, {{"command", "simulate"}, {"output", "rssi_profile"}});
    out << "d_m";
    for (const RadioModel& m : models) {
        out << "," << m.name << "_mean_dbm," << m.name << "_sample_dbm";
    }
    out << "\n";
    const RngStream profile = RngStream(rc.experiment.master_seed).substream(stream_tags::kProfile);
    int idx = 0;
    for (double d = 1.0; d <= rc.profile_max_distance_m + 1e-9; d += rc.profile_step_m, ++idx) {
        out << fmt(d);
        for (std::size_t m = 0; m < models.size(); ++m) {
            RngStream s = profile.substream(static_cast<std::uint64_t>(idx)).substream(m);
            out << "," << fmt(mean_rssi(models[m], sc.tx_power_dbm, d)) << ","
                << fmt(sample_rssi(models[m], sc.tx_power_dbm, d, s));
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

int cmd_build_db(const std::string& config_path, const std::string& preset,
                 const std::string& out_path, const GlobalOptions& opts, std::ostream& diag) {
    return guarded(diag, [&]() {
        if (out_path.empty()) throw InvalidParameter("build-db: --out is required");
        const ResolvedConfig rc = resolve_with_overrides(load_config(config_path, preset), opts);
        const Scenario& sc = rc.experiment.scenario;
        const FingerprintDatabase db =
            build_database(sc, survey_grid(sc), rc.experiment.samples_per_rp,
                           RngStream(rc.experiment.master_seed));
        save_database(db, out_path);
        OutputSet outputs;
        outputs.add_existing(out_path);
        outputs.write_manifest(out_path + ".manifest.json", rc, "build-db");
        diag << "database: " << db.size() << " reference points, " << db.ap_count()
             << " APs -> " << out_path << "\n";
        return kOk;
    });
}

int cmd_locate(const std::string& db_path, const std::string& measurement_csv,
               const std::string& method_token, std::optional<int> k, std::ostream& out,
               std::ostream& diag) {
    return guarded(diag, [&]() {
        const FingerprintDatabase db = [&]() {
            try {
                return load_database(db_path);
            } catch (const IoError& e) {
                // a missing database is a usage error at this boundary
                throw InvalidParameter(e.what());
            }
        }();
        auto method = parse_method(method_token);
        if (!method) {
            throw InvalidParameter("locate: unknown method '" + method_token +
                                   "' (known: nn, knn, wknn, doalf)");
        }
        MatchConfig cfg;
        cfg.method = *method;
        cfg.k = k.value_or(cfg.method == Method::kNn ? 1 : 4);
        cfg.validate();

        std::vector<double> values;
        std::istringstream in(measurement_csv);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                values.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw InvalidParameter("locate: bad measurement value '" + tok + "'");
            }
        }
        const std::size_t q = db.ap_count();
        if (values.size() != 2 * q) {
            throw DimensionError("locate: expected " + std::to_string(2 * q) +
                                 " measurement values (Q RSSI then Q DoA degrees), got " +
                                 std::to_string(values.size()));
        }
        Fingerprint query;
        query.rssi_dbm.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(q));
        for (std::size_t j = 0; j < q; ++j) {
            query.doa.push_back(Angle::from_degrees(values[q + j]));
        }

        const auto neighbors = k_nearest(db, query, cfg);
        const Point est = combine_neighbors(neighbors, cfg);
        out << "x_hat,y_hat\n" << fmt(est.x) << "," << fmt(est.y) << "\n";
        out << "rank,row,rp_x,rp_y,feature_distance\n";
        for (std::size_t i = 0; i < neighbors.size(); ++i) {
            const Neighbor& n = neighbors[i];
            out << (i + 1) << "," << n.index << "," << fmt(n.rp.x) << "," << fmt(n.rp.y) << ","
                << fmt(n.feature_distance) << "\n";
        }
        return kOk;
    });
}

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 const std::string& out_dir, const GlobalOptions& opts, std::ostream& diag) {
    return guarded(diag, [&]() {
        if (out_dir.empty()) throw InvalidParameter("simulate: --out is required");
        const ResolvedConfig rc = resolve_with_overrides(load_config(config_path, preset), opts);
        fs::create_directories(out_dir);
        OutputSet outputs;
        if (rc.type == "rssi_profile") {
            outputs.add(fs::path(out_dir) / "rssi_profile.csv", rssi_profile_csv(rc));
        } else {
            const ExperimentResult result = run_experiment(rc.experiment);
            outputs.add(fs::path(out_dir) / "summary.csv", simulate_summary_csv(rc, result));
            outputs.add(fs::path(out_dir) / "cdf.csv", simulate_cdf_csv(rc, result));
            for (std::size_t s = 0; s < result.labels.size(); ++s) {
                diag << result.labels[s] << ": mean " << fmt(result.stats[s].mean) << " m\n";
            }
        }
        outputs.write_manifest(fs::path(out_dir) / "manifest.json", rc, "simulate");
        return kOk;
    });
}

int cmd_sweep(const std::string& config_path, const std::string& preset,
              const std::string& axis_token, const std::string& values_csv,
              const std::string& out_dir, const GlobalOptions& opts, std::ostream& diag) {
    return guarded(diag, [&]() {
        if (out_dir.empty()) throw InvalidParameter("sweep: --out is required");
        ResolvedConfig rc = resolve_with_overrides(load_config(config_path, preset), opts);

        if (!axis_token.empty()) {
            auto axis = parse_sweep_axis(axis_token);
            if (!axis) {
                std::string names;
                for (const std::string& n : sweep_axis_names())
                    names += (names.empty() ? "" : ", ") + n;
                throw InvalidParameter("sweep: unknown axis '" + axis_token +
                                       "' (valid: " + names + ")");
            }
            rc.sweep_axis = *axis;
        }
        if (!values_csv.empty()) {
            rc.sweep_values.clear();
            std::istringstream in(values_csv);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                try {
                    rc.sweep_values.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw InvalidParameter("sweep: bad axis value '" + tok + "'");
                }
            }
        }
        if (!rc.sweep_axis) {
            throw InvalidParameter("sweep: no axis given (use --axis or a [sweep] config section)");
        }
        if (rc.sweep_values.empty()) {
            throw InvalidParameter("sweep: no axis values given");
        }

        const auto results = sweep(rc.experiment, *rc.sweep_axis, rc.sweep_values);
        fs::create_directories(out_dir);
        OutputSet outputs;
        const bool interval_axis = *rc.sweep_axis == SweepAxis::kRpInterval;
        for (const SweepResult& sr : results) {
            std::ostringstream csv;
            csv << metadata_block(rc, {{"command", "sweep"},
                                       {"sweep.series", sr.series_label},
                                       {"sweep.resolved_axis", to_string(sr.axis)}});
            csv << "axis_value,mean_error_m,mean_crlb_m2";
            if (interval_axis) csv << ",mean_error_minus_interval_m";
            csv << "\n";
            for (std::size_t i = 0; i < sr.values.size(); ++i) {
                csv << fmt(sr.values[i]) << "," << fmt(sr.stats[i].mean) << ","
                    << fmt(sr.mean_crlb_m2[i]);
                if (interval_axis) csv << "," << fmt(sr.stats[i].mean - sr.values[i]);
                csv << "\n";
            }
            const std::string name =
                "sweep_" + to_string(sr.axis) + "_" + sanitize_label(sr.series_label) + ".csv";
            outputs.add(fs::path(out_dir) / name, csv.str());
            diag << sr.series_label << ": " << sr.values.size() << " values -> " << name << "\n";
        }
        outputs.write_manifest(fs::path(out_dir) / "manifest.json", rc, "sweep");
        return kOk;
    });
}

int cmd_crlb_map(const std::string& config_path, const std::string& preset, double grid_step,
                 const std::string& out_path, const GlobalOptions& opts, std::ostream& diag) {
    return guarded(diag, [&]() {
        if (out_path.empty()) throw InvalidParameter("crlb-map: --out is required");
        if (!(grid_step > 0.0)) throw InvalidParameter("crlb-map: grid step must be > 0");
        const ResolvedConfig rc = resolve_with_overrides(load_config(config_path, preset), opts);
        const Scenario& sc = rc.experiment.scenario;
        const CrlbParams params = CrlbParams::from_scenario(sc);

        const std::vector<Point> grid =
            deploy_grid(sc.area_width_m, sc.area_height_m, grid_step);
        std::ostringstream csv;
        csv << metadata_block(rc, {{"command", "crlb-map"},
                                   {"crlb_map.grid_step_m", fmt(grid_step)}});
        csv << "x,y,crlb_numeric,crlb_closed,singular_flag\n";
        std::size_t numeric_ok = 0;
        for (const Point& p : grid) {
            double numeric = std::numeric_limits<double>::quiet_NaN();
            double closed = std::numeric_limits<double>::quiet_NaN();
            bool singular = false;
            try {
                numeric = crlb_numeric(p, params);
                ++numeric_ok;
            } catch (const SingularFim&) {
                singular = true;
            } catch (const DegenerateGeometry&) {
                singular = true;
            }
            try {
                closed = crlb_closed_form(p, params);
            } catch (const SingularTerm&) {
                singular = true;
            } catch (const DegenerateGeometry&) {
                singular = true;
            }
            csv << fmt(p.x) << "," << fmt(p.y) << "," << fmt(numeric) << "," << fmt(closed)
                << "," << (singular ? 1 : 0) << "\n";
        }
        if (numeric_ok == 0) {
            throw SingularFim("crlb-map: the numeric bound is singular at every grid point", 0, 0,
                              0.0);
        }
        OutputSet outputs;
        outputs.add(out_path, csv.str());
        outputs.write_manifest(out_path + ".manifest.json", rc, "crlb-map");
        diag << "bound map: " << grid.size() << " grid points (" << numeric_ok
             << " regular) -> " << out_path << "\n";
        return kOk;
    });
}

}  // namespace lfsim::cli
