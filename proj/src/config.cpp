// SPDX-License-Identifier: Apache-2.0
#include "lfsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lfsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    std::erase_if(out, [](const std::string& t) { return t.empty(); });
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "scenario.area_width_m", "scenario.area_height_m", "scenario.ap_count",
        "scenario.aps", "scenario.rp_interval_m", "scenario.tx_power_mw",
        "scenario.tx_power_dbm",
        "radio.preset", "radio.name", "radio.pl_ref_db", "radio.ref_distance_m",
        "radio.exponent", "radio.shadow_std_db",
        "doa.doa_std_deg",
        "match.method", "match.k", "match.epsilon", "match.gamma",
        "match.feature_scaling", "match.angle_unit",
        "experiment.num_test_points", "experiment.samples_per_rp", "experiment.seed",
        "experiment.series", "experiment.methods", "experiment.type",
        "experiment.profile_max_distance_m", "experiment.profile_step_m",
        "sweep.axis", "sweep.values",
    };
    return keys;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidParameter("config: '" + key + "' is not a number: '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (std::abs(v - std::round(v)) > 1e-9) {
        throw InvalidParameter("config: '" + key + "' must be an integer: '" + value + "'");
    }
    return static_cast<int>(std::round(v));
}

std::string fmt_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RadioModel resolve_radio(const ConfigFile& f) {
    RadioModel model = mmwave60_preset();
    if (f.has("radio.preset")) {
        const std::string& preset = f.get("radio.preset");
        auto found = radio_preset(preset);
        if (!found) {
            throw InvalidParameter("config: unknown radio preset '" + preset +
                                   "' (known: mmwave60, wifi24)");
        }
        model = *found;
    } else if (f.has("radio.pl_ref_db") || f.has("radio.exponent") ||
               f.has("radio.shadow_std_db")) {
        model.name = "custom";
    }
    if (f.has("radio.pl_ref_db")) model.pl_ref_db = to_double("radio.pl_ref_db", f.get("radio.pl_ref_db"));
    if (f.has("radio.ref_distance_m"))
        model.ref_distance_m = to_double("radio.ref_distance_m", f.get("radio.ref_distance_m"));
    if (f.has("radio.exponent")) model.exponent = to_double("radio.exponent", f.get("radio.exponent"));
    if (f.has("radio.shadow_std_db"))
        model.shadow_std_db = to_double("radio.shadow_std_db", f.get("radio.shadow_std_db"));
    if (f.has("radio.name")) model.name = f.get("radio.name");
    model.validate();
    return model;
}

MatchConfig resolve_base_match(const ConfigFile& f) {
    MatchConfig match;
    if (f.has("match.method")) {
        auto m = parse_method(f.get("match.method"));
        if (!m) {
            throw InvalidParameter("config: unknown method '" + f.get("match.method") +
                                   "' (known: nn, knn, wknn, doalf)");
        }
        match.method = *m;
        if (match.method == Method::kNn) match.k = 1;
    }
    if (f.has("match.k")) match.k = to_int("match.k", f.get("match.k"));
    if (f.has("match.epsilon")) match.epsilon = to_double("match.epsilon", f.get("match.epsilon"));
    if (f.has("match.gamma")) match.gamma = to_double("match.gamma", f.get("match.gamma"));
    if (f.has("match.feature_scaling")) {
        const std::string& v = f.get("match.feature_scaling");
        if (v == "raw") {
            match.feature_scaling = FeatureScaling::kRaw;
        } else if (v == "per_dimension_std") {
            match.feature_scaling = FeatureScaling::kPerDimensionStd;
        } else {
            throw InvalidParameter("config: feature_scaling must be raw|per_dimension_std");
        }
    }
    if (f.has("match.angle_unit")) {
        const std::string& v = f.get("match.angle_unit");
        if (v == "degrees") {
            match.angle_unit = AngleUnit::kDegrees;
        } else if (v == "radians") {
            match.angle_unit = AngleUnit::kRadians;
        } else {
            throw InvalidParameter("config: angle_unit must be degrees|radians");
        }
    }
    return match;
}

// Series entry grammar: method[@radio_preset][:k], e.g. "doalf@mmwave60:6".
Series parse_series_entry(const std::string& raw, const MatchConfig& base) {
    std::string text = raw;
    std::erase_if(text, [](unsigned char c) { return std::isspace(c) != 0; });
    if (text.empty()) {
        throw InvalidParameter("config: empty series entry");
    }
    std::string method_tok = text;
    std::string preset_tok;
    std::string k_tok;
    const auto colon = method_tok.find(':');
    if (colon != std::string::npos) {
        k_tok = method_tok.substr(colon + 1);
        method_tok = method_tok.substr(0, colon);
    }
    const auto at = method_tok.find('@');
    if (at != std::string::npos) {
        preset_tok = method_tok.substr(at + 1);
        method_tok = method_tok.substr(0, at);
    }
    Series series;
    series.match = base;
    auto m = parse_method(method_tok);
    if (!m) {
        throw InvalidParameter("config: unknown method in series entry '" + raw + "'");
    }
    series.match.method = *m;
    if (!preset_tok.empty()) {
        auto model = radio_preset(preset_tok);
        if (!model) {
            throw InvalidParameter("config: unknown radio preset in series entry '" + raw + "'");
        }
        series.radio = *model;
    }
    if (!k_tok.empty()) {
        series.match.k = to_int("series k", k_tok);
    } else if (series.match.method == Method::kNn) {
        series.match.k = 1;
    }
    if (series.match.method == Method::kNn) {
        if (series.match.k != 1) {
            throw InvalidParameter("config: series entry '" + raw + "': nn requires k = 1");
        }
    }
    series.label = to_string(series.match.method) +
                   (preset_tok.empty() ? "" : "@" + preset_tok) + ":" +
                   std::to_string(series.match.k);
    series.match.validate();
    return series;
}

}  // namespace

const std::string& ConfigFile::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) {
        throw InvalidParameter("config: missing key '" + key + "'");
    }
    return it->second;
}

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("config: unterminated section header", line_no);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ParseError("config: empty section name", line_no);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config: expected 'key = value'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config: empty key", line_no);
        }
        if (section.empty()) {
            throw ParseError("config: key outside any [section]", line_no);
        }
        const std::string full = section + "." + key;
        if (!known_keys().count(full)) {
            throw ParseError("config: unknown key '" + full + "'", line_no);
        }
        if (cfg.values.count(full)) {
            throw ParseError("config: duplicate key '" + full + "'", line_no);
        }
        cfg.values[full] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("config: cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_text(buf.str());
}

ResolvedConfig resolve_config(const ConfigFile& f) {
    ResolvedConfig rc;
    Scenario& sc = rc.experiment.scenario;

    sc.area_width_m = to_double("scenario.area_width_m", f.get_or("scenario.area_width_m", "100"));
    sc.area_height_m =
        to_double("scenario.area_height_m", f.get_or("scenario.area_height_m", "100"));
    if (f.has("scenario.aps")) {
        for (const std::string& entry : split_list(f.get("scenario.aps"), ';')) {
            const auto xy = split_list(entry, ',');
            if (xy.size() != 2) {
                throw InvalidParameter("config: scenario.aps entries must be 'x,y; x,y; ...'");
            }
            sc.aps.push_back(Point{to_double("scenario.aps", xy[0]), to_double("scenario.aps", xy[1])});
        }
    } else {
        const int q = to_int("scenario.ap_count", f.get_or("scenario.ap_count", "4"));
        if (q < 1) throw InvalidParameter("config: scenario.ap_count must be >= 1");
        sc.aps = place_aps(sc.area_width_m, sc.area_height_m, q);
    }
    sc.rp_interval_m = to_double("scenario.rp_interval_m", f.get_or("scenario.rp_interval_m", "5"));
    if (f.has("scenario.tx_power_dbm")) {
        sc.tx_power_dbm = to_double("scenario.tx_power_dbm", f.get("scenario.tx_power_dbm"));
    } else {
        const double mw = to_double("scenario.tx_power_mw", f.get_or("scenario.tx_power_mw", "30"));
        if (!(mw > 0.0)) throw InvalidParameter("config: tx_power_mw must be > 0");
        sc.tx_power_dbm = 10.0 * std::log10(mw);
    }
    sc.radio = resolve_radio(f);
    sc.doa_std_deg = to_double("doa.doa_std_deg", f.get_or("doa.doa_std_deg", "2"));
    sc.validate();

    const MatchConfig base = resolve_base_match(f);

    if (f.has("experiment.series")) {
        for (const std::string& entry : split_list(f.get("experiment.series"), ',')) {
            rc.experiment.series.push_back(parse_series_entry(entry, base));
        }
        if (rc.experiment.series.empty()) {
            throw InvalidParameter("config: experiment.series lists no entries");
        }
    } else if (f.has("experiment.methods")) {
        for (const std::string& tok : split_list(f.get("experiment.methods"), ',')) {
            rc.experiment.series.push_back(parse_series_entry(tok, base));
        }
        if (rc.experiment.series.empty()) {
            throw InvalidParameter("config: experiment.methods lists no methods");
        }
    } else {
        Series s;
        s.match = base;
        s.label = to_string(base.method) + ":" + std::to_string(base.k);
        rc.experiment.series.push_back(std::move(s));
    }

    rc.experiment.num_test_points =
        to_int("experiment.num_test_points", f.get_or("experiment.num_test_points", "2000"));
    rc.experiment.samples_per_rp =
        to_int("experiment.samples_per_rp", f.get_or("experiment.samples_per_rp", "100"));
    if (f.has("experiment.seed")) {
        try {
            rc.experiment.master_seed = std::stoull(f.get("experiment.seed"));
        } catch (const std::exception&) {
            throw InvalidParameter("config: experiment.seed must be an unsigned integer");
        }
    } else {
        rc.experiment.master_seed = kDefaultSeed;
    }

    rc.type = f.get_or("experiment.type", "simulate");
    if (rc.type != "simulate" && rc.type != "rssi_profile") {
        throw InvalidParameter("config: experiment.type must be simulate|rssi_profile");
    }
    rc.profile_max_distance_m = to_double("experiment.profile_max_distance_m",
                                          f.get_or("experiment.profile_max_distance_m", "141"));
    rc.profile_step_m =
        to_double("experiment.profile_step_m", f.get_or("experiment.profile_step_m", "1"));

    if (f.has("sweep.axis")) {
        auto axis = parse_sweep_axis(f.get("sweep.axis"));
        if (!axis) {
            std::string names;
            for (const std::string& n : sweep_axis_names()) names += (names.empty() ? "" : ", ") + n;
            throw InvalidParameter("config: unknown sweep axis '" + f.get("sweep.axis") +
                                   "' (valid: " + names + ")");
        }
        rc.sweep_axis = *axis;
        for (const std::string& tok : split_list(f.get("sweep.values"), ',')) {
            rc.sweep_values.push_back(to_double("sweep.values", tok));
        }
        if (rc.sweep_values.empty()) {
            throw InvalidParameter("config: sweep.values lists no values");
        }
    }

    rc.experiment.validate();

    // Flattened echo of the effective configuration; this is what output
    // metadata carries.
    auto& flat = rc.flattened;
    flat.emplace_back("scenario.area_width_m", fmt_value(sc.area_width_m));
    flat.emplace_back("scenario.area_height_m", fmt_value(sc.area_height_m));
    flat.emplace_back("scenario.ap_count", std::to_string(sc.ap_count()));
    for (std::size_t j = 0; j < sc.ap_count(); ++j) {
        flat.emplace_back("scenario.ap_" + std::to_string(j),
                          fmt_value(sc.aps[j].x) + "," + fmt_value(sc.aps[j].y));
    }
    flat.emplace_back("scenario.rp_interval_m", fmt_value(sc.rp_interval_m));
    flat.emplace_back("scenario.tx_power_dbm", fmt_value(sc.tx_power_dbm));
    flat.emplace_back("radio.name", sc.radio.name);
    flat.emplace_back("radio.pl_ref_db", fmt_value(sc.radio.pl_ref_db));
    flat.emplace_back("radio.ref_distance_m", fmt_value(sc.radio.ref_distance_m));
    flat.emplace_back("radio.exponent", fmt_value(sc.radio.exponent));
    flat.emplace_back("radio.shadow_std_db", fmt_value(sc.radio.shadow_std_db));
    flat.emplace_back("doa.doa_std_deg", fmt_value(sc.doa_std_deg));
    std::string series_echo;
    for (const Series& s : rc.experiment.series) {
        series_echo += (series_echo.empty() ? "" : ",") + s.label;
    }
    flat.emplace_back("experiment.series", series_echo);
    flat.emplace_back("experiment.num_test_points",
                      std::to_string(rc.experiment.num_test_points));
    flat.emplace_back("experiment.samples_per_rp",
                      std::to_string(rc.experiment.samples_per_rp));
    flat.emplace_back("experiment.seed", std::to_string(rc.experiment.master_seed));
    flat.emplace_back("experiment.type", rc.type);
    flat.emplace_back("match.epsilon", fmt_value(base.epsilon));
    flat.emplace_back("match.gamma", fmt_value(base.gamma));
    flat.emplace_back("match.feature_scaling",
                      base.feature_scaling == FeatureScaling::kRaw ? "raw" : "per_dimension_std");
    flat.emplace_back("match.angle_unit",
                      base.angle_unit == AngleUnit::kDegrees ? "degrees" : "radians");
    if (rc.sweep_axis) {
        flat.emplace_back("sweep.axis", to_string(*rc.sweep_axis));
        std::string vals;
        for (double v : rc.sweep_values) vals += (vals.empty() ? "" : ",") + fmt_value(v);
        flat.emplace_back("sweep.values", vals);
    }
    return rc;
}

namespace {

const char* kBaseScenario = R"(
[scenario]
area_width_m = 100
area_height_m = 100
ap_count = 4
rp_interval_m = 5
tx_power_mw = 30
[radio]
preset = mmwave60
[doa]
doa_std_deg = 2
[experiment]
num_test_points = 2000
samples_per_rp = 100
)";

}  // namespace

std::optional<std::string> preset_config_text(std::string_view name) {
    const std::string base = kBaseScenario;
    // Comparison runs (same run, CDF and summary views)
    if (name == "fig5" || name == "fig6") {
        return base +
               "[experiment]\n"
               "series = nn@mmwave60:1, knn@mmwave60:6, wknn@mmwave60:6, "
               "nn@wifi24:1, knn@wifi24:6, wknn@wifi24:6\n";
    }
    if (name == "fig7") {
        return base + "[experiment]\ntype = rssi_profile\n";
    }
    if (name == "fig8" || name == "fig9") {
        return base +
               "[experiment]\n"
               "series = nn@mmwave60:1, knn@mmwave60:4, wknn@mmwave60:4, doalf@mmwave60:4\n";
    }
    if (name == "fig10" || name == "fig11") {
        return base +
               "[experiment]\n"
               "series = doalf@mmwave60:6, wknn@mmwave60:6, wknn@wifi24:6\n";
    }
    // Parameter sweeps of the hybrid estimator
    const std::string sweep_base = base + "[match]\nmethod = doalf\nk = 4\n";
    if (name == "fig12") return sweep_base + "[sweep]\naxis = rp_interval\nvalues = 5,6,7,8\n";
    if (name == "fig13") return sweep_base + "[sweep]\naxis = ap_count\nvalues = 3,4,5,6\n";
    if (name == "fig14") return sweep_base + "[sweep]\naxis = exponent\nvalues = 1.5,2,2.5,3\n";
    if (name == "fig15") return sweep_base + "[sweep]\naxis = shadow_std\nvalues = 1,2,3\n";
    if (name == "fig16") return sweep_base + "[sweep]\naxis = doa_std\nvalues = 1,2,5,10\n";
    if (name == "figk") {
        return base +
               "[experiment]\n"
               "series = doalf@mmwave60:4, wknn@wifi24:4\n"
               "[sweep]\naxis = k\nvalues = 1,2,3,4,5,6,7,8,9,10,11,12\n";
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
            "fig12", "fig13", "fig14", "fig15", "fig16", "figk"};
}

}  // namespace lfsim
