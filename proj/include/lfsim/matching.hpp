// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfsim/fingerprint.hpp"

namespace lfsim {

/// Position estimators over the fingerprint feature space.
/// NN/KNN/WKNN use RSSI features only; DOALF is WKNN over the joint
/// RSSI+DoA features.
enum class Method { kNn, kKnn, kWknn, kDoaLf };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view token);  // nn|knn|wknn|doalf

enum class FeatureScaling {
    kRaw,              ///< concatenated dB and degree values, unscaled
    kPerDimensionStd,  ///< each dimension divided by its std across the database
};

enum class AngleUnit { kDegrees, kRadians };

struct MatchConfig {
    Method method = Method::kWknn;
    int k = 4;
    double epsilon = 1e-6;  ///< keeps inverse-distance weights finite
    double gamma = 1.0;     ///< weight numerator; cancels in the normalized mean
    FeatureScaling feature_scaling = FeatureScaling::kRaw;
    AngleUnit angle_unit = AngleUnit::kDegrees;  ///< unit of DoA deltas in the metric

    bool use_doa() const { return method == Method::kDoaLf; }
    void validate() const;
};

/// One candidate reference point from the K-nearest search.
struct Neighbor {
    std::size_t index = 0;          ///< database row index
    double feature_distance = 0.0;  ///< >= 0
    Point rp;
};

/// Euclidean distance in the feature space. DoA dimensions participate only
/// when the method uses them, each delta computed wrap-safely and expressed
/// in cfg.angle_unit. `scales`, when nonempty, holds 2Q per-dimension
/// divisors (RSSI dims first).
/// Throws DimensionError on mismatched fingerprints.
double feature_distance(const Fingerprint& a, const Fingerprint& b, const MatchConfig& cfg,
                        std::span<const double> scales = {});

/// Per-dimension standard deviations across the database rows (2Q values:
/// RSSI dims then DoA dims, the latter as circular deviations in
/// cfg.angle_unit). Dimensions with zero spread get scale 1 so they simply
/// carry no weight. Used when cfg.feature_scaling == kPerDimensionStd.
std::vector<double> per_dimension_scales(const FingerprintDatabase& db, const MatchConfig& cfg);

/// The K rows closest to `query` in feature space, ascending by distance,
/// ties broken by lower row index. Throws InvalidParameter when K exceeds
/// the database size.
std::vector<Neighbor> k_nearest(const FingerprintDatabase& db, const Fingerprint& query,
                                const MatchConfig& cfg);

/// Combines already-selected neighbors into a position: nearest RP for NN,
/// unweighted mean for KNN, inverse-distance weighted mean for WKNN/DOALF.
Point combine_neighbors(const std::vector<Neighbor>& neighbors, const MatchConfig& cfg);

/// Full online-phase estimate: k_nearest + combine_neighbors.
Point estimate(const FingerprintDatabase& db, const Fingerprint& query, const MatchConfig& cfg);

}  // namespace lfsim
