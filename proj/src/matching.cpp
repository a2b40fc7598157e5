// SPDX-License-Identifier: Apache-2.0
#include "lfsim/matching.hpp"

#include <algorithm>
#include <cmath>

namespace lfsim {

std::string to_string(Method m) {
    switch (m) {
        case Method::kNn: return "nn";
        case Method::kKnn: return "knn";
        case Method::kWknn: return "wknn";
        case Method::kDoaLf: return "doalf";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view token) {
    if (token == "nn") return Method::kNn;
    if (token == "knn") return Method::kKnn;
    if (token == "wknn") return Method::kWknn;
    if (token == "doalf") return Method::kDoaLf;
    return std::nullopt;
}

void MatchConfig::validate() const {
    if (k < 1) throw InvalidParameter("match config: k must be >= 1");
    if (!(epsilon > 0.0)) throw InvalidParameter("match config: epsilon must be > 0");
    if (!(gamma > 0.0)) throw InvalidParameter("match config: gamma must be > 0");
    if (method == Method::kNn && k != 1) {
        throw InvalidParameter("match config: nn requires k = 1");
    }
}

namespace {

double angle_delta(Angle a, Angle b, AngleUnit unit) {
    const double d = angular_diff(a, b);
    return unit == AngleUnit::kDegrees ? rad2deg(d) : d;
}

}  // namespace

double feature_distance(const Fingerprint& a, const Fingerprint& b, const MatchConfig& cfg,
                        std::span<const double> scales) {
    const std::size_t q = a.ap_count();
    if (q == 0 || q != b.ap_count() || a.doa.size() != q || b.doa.size() != q) {
        throw DimensionError("feature_distance: fingerprint dimensions disagree");
    }
    if (!scales.empty() && scales.size() != 2 * q) {
        throw DimensionError("feature_distance: scale vector must have 2Q entries");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
        double ds = a.rssi_dbm[j] - b.rssi_dbm[j];
        if (!scales.empty()) ds /= scales[j];
        sum += ds * ds;
    }
    if (cfg.use_doa()) {
        for (std::size_t j = 0; j < q; ++j) {
            double dphi = angle_delta(a.doa[j], b.doa[j], cfg.angle_unit);
            if (!scales.empty()) dphi /= scales[q + j];
            sum += dphi * dphi;
        }
    }
    return std::sqrt(sum);
}

std::vector<double> per_dimension_scales(const FingerprintDatabase& db, const MatchConfig& cfg) {
    const std::size_t q = db.ap_count();
    const std::size_t m = db.size();
    std::vector<double> scales(2 * q, 1.0);
    if (m < 2) return scales;

    for (std::size_t j = 0; j < q; ++j) {
        double mean = 0.0;
        for (const DatabaseRow& row : db.rows) mean += row.fp.rssi_dbm[j];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (const DatabaseRow& row : db.rows) {
            const double d = row.fp.rssi_dbm[j] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(m));
        if (sd > 0.0) scales[j] = sd;
    }
    for (std::size_t j = 0; j < q; ++j) {
        // circular mean first, then dispersion of wrapped deviations
        double cs = 0.0;
        double sn = 0.0;
        for (const DatabaseRow& row : db.rows) {
            cs += std::cos(row.fp.doa[j].radians());
            sn += std::sin(row.fp.doa[j].radians());
        }
        const Angle mean = Angle::from_radians(std::atan2(sn, cs));
        double var = 0.0;
        for (const DatabaseRow& row : db.rows) {
            const double d = angle_delta(row.fp.doa[j], mean, cfg.angle_unit);
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(m));
        if (sd > 0.0) scales[q + j] = sd;
    }
    return scales;
}

std::vector<Neighbor> k_nearest(const FingerprintDatabase& db, const Fingerprint& query,
                                const MatchConfig& cfg) {
    cfg.validate();
    const std::size_t kk = static_cast<std::size_t>(cfg.k);
    if (kk > db.size()) {
        throw InvalidParameter("k_nearest: k exceeds the database size");
    }
    std::vector<double> scales;
    if (cfg.feature_scaling == FeatureScaling::kPerDimensionStd) {
        scales = per_dimension_scales(db, cfg);
    }
    std::vector<std::pair<double, std::size_t>> dist(db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        dist[i] = {feature_distance(query, db.rows[i].fp, cfg, scales), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::vector<Neighbor> out;
    out.reserve(kk);
    for (std::size_t i = 0; i < kk; ++i) {
        out.push_back(Neighbor{dist[i].second, dist[i].first, db.rows[dist[i].second].rp});
    }
    return out;
}

Point combine_neighbors(const std::vector<Neighbor>& neighbors, const MatchConfig& cfg) {
    if (neighbors.empty()) {
        throw InvalidParameter("combine_neighbors: empty neighbor list");
    }
    if (neighbors.size() == 1) {
        return neighbors.front().rp;  // exact, also covers NN
    }
    if (cfg.method == Method::kKnn) {
        double sx = 0.0;
        double sy = 0.0;
        for (const Neighbor& n : neighbors) {
            sx += n.rp.x;
            sy += n.rp.y;
        }
        const double inv = 1.0 / static_cast<double>(neighbors.size());
        return Point{sx * inv, sy * inv};
    }
    double wsum = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (const Neighbor& n : neighbors) {
        const double w = cfg.gamma / (n.feature_distance + cfg.epsilon);
        wsum += w;
        sx += w * n.rp.x;
        sy += w * n.rp.y;
    }
    return Point{sx / wsum, sy / wsum};
}

Point estimate(const FingerprintDatabase& db, const Fingerprint& query, const MatchConfig& cfg) {
    return combine_neighbors(k_nearest(db, query, cfg), cfg);
}

}  // namespace lfsim
