// SPDX-License-Identifier: Apache-2.0
#include "lfsim/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lfsim {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'", line_no);
    }
}

}  // namespace

void Scenario::validate() const {
    if (!(area_width_m > 0.0) || !(area_height_m > 0.0)) {
        throw InvalidParameter("scenario: area dimensions must be > 0");
    }
    if (aps.empty()) {
        throw InvalidParameter("scenario: at least one AP required");
    }
    for (const Point& ap : aps) {
        if (ap.x < -1e-9 || ap.x > area_width_m + 1e-9 || ap.y < -1e-9 ||
            ap.y > area_height_m + 1e-9) {
            throw InvalidParameter("scenario: AP outside the area boundary");
        }
    }
    if (!(rp_interval_m > 0.0)) {
        throw InvalidParameter("scenario: rp_interval_m must be > 0");
    }
    if (!(doa_std_deg >= 0.0)) {
        throw InvalidParameter("scenario: doa_std_deg must be >= 0");
    }
    radio.validate();
}

void Fingerprint::validate() const {
    if (rssi_dbm.empty() || rssi_dbm.size() != doa.size()) {
        throw DimensionError("fingerprint: rssi and doa lists must have equal nonzero length");
    }
}

void FingerprintDatabase::validate() const {
    scenario.validate();
    if (rows.empty()) {
        throw InvalidParameter("database: at least one row required");
    }
    for (const DatabaseRow& row : rows) {
        row.fp.validate();
        if (row.fp.ap_count() != ap_count()) {
            throw DimensionError("database: row feature dimension does not match scenario");
        }
        if (row.rp.x < -1e-9 || row.rp.x > scenario.area_width_m + 1e-9 || row.rp.y < -1e-9 ||
            row.rp.y > scenario.area_height_m + 1e-9) {
            throw InvalidParameter("database: reference point outside the area");
        }
    }
}

std::vector<Point> deploy_grid(double area_width_m, double area_height_m, double interval_m) {
    if (!(interval_m > 0.0)) {
        throw InvalidParameter("deploy_grid: interval must be > 0");
    }
    if (interval_m > std::min(area_width_m, area_height_m)) {
        throw InvalidParameter("deploy_grid: interval exceeds the area");
    }
    // Small slack so e.g. width 1.0 with interval 0.1 keeps its last column.
    const auto steps = [&](double extent) {
        return static_cast<int>(std::floor(extent / interval_m + 1e-9));
    };
    const int nx = steps(area_width_m);
    const int ny = steps(area_height_m);
    if (static_cast<long long>(nx + 1) * (ny + 1) > 50'000'000LL) {
        throw InvalidParameter("deploy_grid: grid would exceed 50e6 points");
    }
    std::vector<Point> grid;
    grid.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            grid.push_back(Point{i * interval_m, j * interval_m});
        }
    }
    return grid;
}

std::vector<Point> place_aps(double area_width_m, double area_height_m, int count) {
    if (count < 1) {
        throw InvalidParameter("place_aps: count must be >= 1");
    }
    const double w = area_width_m;
    const double h = area_height_m;
    if (count == 4) {
        return {Point{0, 0}, Point{w, 0}, Point{w, h}, Point{0, h}};
    }
    const double perimeter = 2.0 * (w + h);
    std::vector<Point> aps;
    aps.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double s = perimeter * k / count;
        if (s < w) {
            aps.push_back(Point{s, 0});
        } else if (s < w + h) {
            aps.push_back(Point{w, s - w});
        } else if (s < 2 * w + h) {
            aps.push_back(Point{w - (s - w - h), h});
        } else {
            aps.push_back(Point{0, h - (s - 2 * w - h)});
        }
    }
    return aps;
}

std::vector<Point> survey_grid(const Scenario& scenario) {
    scenario.validate();
    std::vector<Point> grid =
        deploy_grid(scenario.area_width_m, scenario.area_height_m, scenario.rp_interval_m);
    std::erase_if(grid, [&](Point p) {
        for (const Point& ap : scenario.aps) {
            if (distance(p, ap) < scenario.radio.ref_distance_m) return true;
        }
        return false;
    });
    if (grid.empty()) {
        throw InvalidParameter("survey_grid: no grid point is outside the AP reference radius");
    }
    return grid;
}

FingerprintDatabase build_database(const Scenario& scenario, const std::vector<Point>& grid,
                                   int samples_per_rp, RngStream master) {
    scenario.validate();
    if (samples_per_rp < 1) {
        throw InvalidParameter("build_database: samples_per_rp must be >= 1");
    }
    if (grid.empty()) {
        throw InvalidParameter("build_database: empty grid");
    }
    const std::size_t q = scenario.ap_count();
    const DoaModel doa = scenario.doa_model();
    const RngStream offline = master.substream(stream_tags::kOffline);

    FingerprintDatabase db;
    db.scenario = scenario;
    db.seed = master.seed();
    db.samples_per_rp = samples_per_rp;
    db.rows.resize(grid.size());

    for (std::size_t m = 0; m < grid.size(); ++m) {
        const Point rp = grid[m];
        DatabaseRow& row = db.rows[m];
        row.rp = rp;
        row.fp.rssi_dbm.resize(q);
        row.fp.doa.resize(q);
        row.doa_deg.resize(q);
        const RngStream rp_stream = offline.substream(m);
        for (std::size_t j = 0; j < q; ++j) {
            const Point ap = scenario.aps[j];
            const double d = distance(rp, ap);
            if (d < kCoincidenceTolM) {
                throw DegenerateGeometry("build_database: RP coincides with an AP");
            }
            const Angle true_bearing = bearing(rp, ap);
            const RngStream ap_stream = rp_stream.substream(j);
            double rssi_sum = 0.0;
            double cos_sum = 0.0;
            double sin_sum = 0.0;
            for (int t = 0; t < samples_per_rp; ++t) {
                RngStream draw = ap_stream.substream(static_cast<std::uint64_t>(t));
                rssi_sum += sample_rssi(scenario.radio, scenario.tx_power_dbm, d, draw);
                const Angle phi = sample_doa(true_bearing, doa, draw);
                cos_sum += std::cos(phi.radians());
                sin_sum += std::sin(phi.radians());
            }
            row.fp.rssi_dbm[j] = rssi_sum / samples_per_rp;
            const double mean_doa = normalize_radians(std::atan2(sin_sum, cos_sum));
            // Snap to the degree grid once; the printed degrees stay the
            // authoritative representation from here on.
            row.doa_deg[j] = rad2deg(mean_doa);
            row.fp.doa[j] = Angle::from_degrees(row.doa_deg[j]);
        }
    }
    return db;
}

void save_database(const FingerprintDatabase& db, const std::filesystem::path& path) {
    db.validate();
    std::ostringstream out;
    const Scenario& sc = db.scenario;
    out << "# lfsim fingerprint database v1\n";
    out << "# area_width_m=" << fmt17(sc.area_width_m) << "\n";
    out << "# area_height_m=" << fmt17(sc.area_height_m) << "\n";
    out << "# ap_count=" << sc.ap_count() << "\n";
    for (std::size_t j = 0; j < sc.ap_count(); ++j) {
        out << "# ap_" << j << "=" << fmt17(sc.aps[j].x) << "," << fmt17(sc.aps[j].y) << "\n";
    }
    out << "# rp_interval_m=" << fmt17(sc.rp_interval_m) << "\n";
    out << "# tx_power_dbm=" << fmt17(sc.tx_power_dbm) << "\n";
    out << "# radio_name=" << sc.radio.name << "\n";
    out << "# radio_pl_ref_db=" << fmt17(sc.radio.pl_ref_db) << "\n";
    out << "# radio_ref_distance_m=" << fmt17(sc.radio.ref_distance_m) << "\n";
    out << "# radio_exponent=" << fmt17(sc.radio.exponent) << "\n";
    out << "# radio_shadow_std_db=" << fmt17(sc.radio.shadow_std_db) << "\n";
    out << "# doa_std_deg=" << fmt17(sc.doa_std_deg) << "\n";
    out << "# seed=" << db.seed << "\n";
    out << "# samples_per_rp=" << db.samples_per_rp << "\n";
    out << "x,y";
    for (std::size_t j = 1; j <= db.ap_count(); ++j) out << ",s_" << j;
    for (std::size_t j = 1; j <= db.ap_count(); ++j) out << ",phi_" << j;
    out << "\n";
    for (const DatabaseRow& row : db.rows) {
        out << fmt17(row.rp.x) << "," << fmt17(row.rp.y);
        for (double s : row.fp.rssi_dbm) out << "," << fmt17(s);
        for (double phi : row.doa_deg) out << "," << fmt17(phi);
        out << "\n";
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("save_database: cannot open '" + path.string() + "' for writing");
    }
    f << out.str();
    if (!f.flush()) {
        throw IoError("save_database: write failed for '" + path.string() + "'");
    }
}

FingerprintDatabase load_database(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("load_database: cannot open '" + path.string() + "'");
    }
    std::map<std::string, std::string> meta;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t q = 0;
    FingerprintDatabase db;

    const auto meta_value = [&](const std::string& key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end()) {
            throw ParseError("missing metadata key '" + key + "'", line_no);
        }
        return it->second;
    };

    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const std::size_t start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                meta[body.substr(0, eq)] = body.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen) {
            const auto cols = split(line, ',');
            if (cols.size() < 4 || cols[0] != "x" || cols[1] != "y") {
                throw ParseError("expected header 'x,y,s_1..s_Q,phi_1..phi_Q'", line_no);
            }
            if ((cols.size() - 2) % 2 != 0) {
                throw ParseError("header has an odd feature count", line_no);
            }
            q = (cols.size() - 2) / 2;
            header_seen = true;

            Scenario sc;
            sc.area_width_m = parse_double(meta_value("area_width_m"), line_no);
            sc.area_height_m = parse_double(meta_value("area_height_m"), line_no);
            const auto ap_count = static_cast<std::size_t>(parse_double(meta_value("ap_count"), line_no));
            if (ap_count != q) {
                throw ParseError("metadata ap_count disagrees with header columns", line_no);
            }
            for (std::size_t j = 0; j < ap_count; ++j) {
                const auto xy = split(meta_value("ap_" + std::to_string(j)), ',');
                if (xy.size() != 2) {
                    throw ParseError("bad AP coordinate 'ap_" + std::to_string(j) + "'", line_no);
                }
                sc.aps.push_back(Point{parse_double(xy[0], line_no), parse_double(xy[1], line_no)});
            }
            sc.rp_interval_m = parse_double(meta_value("rp_interval_m"), line_no);
            sc.tx_power_dbm = parse_double(meta_value("tx_power_dbm"), line_no);
            sc.radio.name = meta_value("radio_name");
            sc.radio.pl_ref_db = parse_double(meta_value("radio_pl_ref_db"), line_no);
            sc.radio.ref_distance_m = parse_double(meta_value("radio_ref_distance_m"), line_no);
            sc.radio.exponent = parse_double(meta_value("radio_exponent"), line_no);
            sc.radio.shadow_std_db = parse_double(meta_value("radio_shadow_std_db"), line_no);
            sc.doa_std_deg = parse_double(meta_value("doa_std_deg"), line_no);
            db.scenario = sc;
            try {
                db.seed = std::stoull(meta_value("seed"));
            } catch (const std::exception&) {
                throw ParseError("bad 'seed' metadata value", line_no);
            }
            db.samples_per_rp = static_cast<int>(parse_double(meta_value("samples_per_rp"), line_no));
            continue;
        }
        const auto cols = split(line, ',');
        const std::size_t expected = 2 + 2 * q;
        if (cols.size() != expected) {
            throw ParseError("row " + std::to_string(db.rows.size() + 1) + ": expected " +
                                 std::to_string(expected) + " columns, got " +
                                 std::to_string(cols.size()),
                             line_no);
        }
        DatabaseRow row;
        row.rp.x = parse_double(cols[0], line_no);
        row.rp.y = parse_double(cols[1], line_no);
        row.fp.rssi_dbm.resize(q);
        row.fp.doa.resize(q);
        row.doa_deg.resize(q);
        for (std::size_t j = 0; j < q; ++j) {
            row.fp.rssi_dbm[j] = parse_double(cols[2 + j], line_no);
        }
        for (std::size_t j = 0; j < q; ++j) {
            row.doa_deg[j] = parse_double(cols[2 + q + j], line_no);
            row.fp.doa[j] = Angle::from_degrees(row.doa_deg[j]);
        }
        db.rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw ParseError("no header line found", line_no);
    }
    if (db.rows.empty()) {
        throw ParseError("database has no rows", line_no);
    }
    db.validate();
    return db;
}

}  // namespace lfsim
