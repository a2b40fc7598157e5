// SPDX-License-Identifier: Apache-2.0
#include "lfsim/crlb.hpp"

#include <cmath>

namespace lfsim {

namespace {

constexpr double kLn10 = 2.30258509299404568402;

struct ApGeometry {
    double d;     // distance theta -> AP
    double cosp;  // cos of bearing theta -> AP
    double sinp;
};

ApGeometry ap_geometry(Point theta, Point ap) {
    const double d = distance(theta, ap);
    if (d < kCoincidenceTolM) {
        throw DegenerateGeometry("crlb: evaluation point coincides with an AP");
    }
    return ApGeometry{d, (ap.x - theta.x) / d, (ap.y - theta.y) / d};
}

}  // namespace

CrlbParams CrlbParams::from_scenario(const Scenario& sc) {
    CrlbParams p;
    p.exponent = sc.radio.exponent;
    p.shadow_std_db = sc.radio.shadow_std_db;
    p.doa_std_rad = sc.doa_model().doa_std_rad;
    p.aps = sc.aps;
    p.area_m2 = sc.area_width_m * sc.area_height_m;
    return p;
}

void CrlbParams::validate() const {
    if (!(shadow_std_db > 0.0)) {
        throw InvalidParameter("crlb params: shadow_std_db must be > 0");
    }
    if (!(doa_std_rad > 0.0)) {
        throw InvalidParameter("crlb params: doa_std_rad must be > 0");
    }
    if (!std::isfinite(exponent)) {
        throw InvalidParameter("crlb params: exponent must be finite");
    }
    if (aps.empty()) {
        throw InvalidParameter("crlb params: at least one AP required");
    }
    if (!(area_m2 > 0.0)) {
        throw InvalidParameter("crlb params: area must be > 0");
    }
}

double eta(double exponent, double shadow_std_db) {
    if (!(shadow_std_db > 0.0)) {
        throw InvalidParameter("eta: shadow_std_db must be > 0");
    }
    const double r = 10.0 * exponent / (std::sqrt(2.0) * shadow_std_db * kLn10);
    return r * r;
}

double log_likelihood(Point r, Point theta, const CrlbParams& params) {
    params.validate();
    const double e = eta(params.exponent, params.shadow_std_db);
    const double log_kappa =
        -std::log(2.0 * kPi * params.area_m2 * params.shadow_std_db * params.doa_std_rad);
    const double inv_2sp2 = 1.0 / (2.0 * params.doa_std_rad * params.doa_std_rad);
    double sum = 0.0;
    for (const Point& ap : params.aps) {
        const double d_t = ap_geometry(theta, ap).d;
        const double d_r = ap_geometry(r, ap).d;
        const double lratio = std::log(d_r / d_t);
        const double dphi = angular_diff(bearing(r, ap), bearing(theta, ap));
        sum += log_kappa - e * lratio * lratio - dphi * dphi * inv_2sp2;
    }
    return sum;
}

Gradient2 score(Point theta, Point r, const CrlbParams& params) {
    params.validate();
    const double e = eta(params.exponent, params.shadow_std_db);
    const double inv_sp2 = 1.0 / (params.doa_std_rad * params.doa_std_rad);
    Gradient2 g;
    for (const Point& ap : params.aps) {
        const ApGeometry gt = ap_geometry(theta, ap);
        const double d_r = ap_geometry(r, ap).d;
        const double lratio = std::log(d_r / gt.d);
        const double dphi = angular_diff(bearing(r, ap), bearing(theta, ap));
        const double d2 = gt.d * gt.d;
        // distance term: 2*eta*ln(d_r/d_t) * (theta - ap)/d^2
        g.dx += 2.0 * e * lratio * (theta.x - ap.x) / d2;
        g.dy += 2.0 * e * lratio * (theta.y - ap.y) / d2;
        // bearing term: the bearing's gradient in theta is (sin, -cos)/d
        g.dx += dphi * gt.sinp * inv_sp2 / gt.d;
        g.dy += -dphi * gt.cosp * inv_sp2 / gt.d;
    }
    return g;
}

FisherInfo fisher_information(Point theta, const CrlbParams& params) {
    params.validate();
    const double e = eta(params.exponent, params.shadow_std_db);
    const double inv_sp2 = 1.0 / (params.doa_std_rad * params.doa_std_rad);
    FisherInfo info;
    for (const Point& ap : params.aps) {
        const ApGeometry gt = ap_geometry(theta, ap);
        const double inv_d2 = 1.0 / (gt.d * gt.d);
        const double c2 = gt.cosp * gt.cosp;
        const double s2 = gt.sinp * gt.sinp;
        const double sin2p = 2.0 * gt.sinp * gt.cosp;
        info.j_xx += (2.0 * e * c2 + s2 * inv_sp2) * inv_d2;
        info.j_yy += (2.0 * e * s2 + c2 * inv_sp2) * inv_d2;
        info.j_xy += (e * sin2p + 0.5 * sin2p * inv_sp2) * inv_d2;
    }
    return info;
}

double crlb_numeric(const FisherInfo& info) {
    const double det = info.det();
    if (!(det > kFimDetTol)) {
        throw SingularFim("crlb_numeric: information matrix is singular", 0.0, 0.0, det);
    }
    return info.trace() / det;
}

double crlb_numeric(Point theta, const CrlbParams& params) {
    const FisherInfo info = fisher_information(theta, params);
    const double det = info.det();
    if (!(det > kFimDetTol)) {
        throw SingularFim("crlb_numeric: information matrix is singular at the given point",
                          theta.x, theta.y, det);
    }
    return info.trace() / det;
}

double crlb_closed_form(Point theta, const CrlbParams& params) {
    params.validate();
    const double e = eta(params.exponent, params.shadow_std_db);
    const double sp2 = params.doa_std_rad * params.doa_std_rad;
    double sum = 0.0;
    for (std::size_t i = 0; i < params.aps.size(); ++i) {
        const ApGeometry gt = ap_geometry(theta, params.aps[i]);
        const double cos2p = gt.cosp * gt.cosp - gt.sinp * gt.sinp;
        if (cos2p * cos2p < kFimDetTol) {
            throw SingularTerm("crlb_closed_form: AP at a degenerate pi/4-type bearing", i,
                               std::atan2(gt.sinp, gt.cosp));
        }
        sum += gt.d * gt.d * (1.0 + 2.0 * e * sp2) / (2.0 * e * cos2p * cos2p);
    }
    return sum;
}

Curvature2 log_density_curvature(Point theta, const CrlbParams& params,
                                 const ObservationDeltas& obs) {
    params.validate();
    if (obs.log_dist_ratio.size() != params.aps.size() ||
        obs.doa_error_rad.size() != params.aps.size()) {
        throw DimensionError("log_density_curvature: one observation delta pair per AP required");
    }
    const double e = eta(params.exponent, params.shadow_std_db);
    const double inv_sp2 = 1.0 / (params.doa_std_rad * params.doa_std_rad);
    Curvature2 h;
    for (std::size_t i = 0; i < params.aps.size(); ++i) {
        const ApGeometry gt = ap_geometry(theta, params.aps[i]);
        const double inv_d2 = 1.0 / (gt.d * gt.d);
        const double c2 = gt.cosp * gt.cosp;
        const double s2 = gt.sinp * gt.sinp;
        const double sin2p = 2.0 * gt.sinp * gt.cosp;
        const double cos2p = c2 - s2;
        const double lr2 = 2.0 * obs.log_dist_ratio[i];  // ln(d_r^2/d_t^2)
        const double dphi = obs.doa_error_rad[i];
        h.xx += (-2.0 * e * c2 + e * lr2 * (1.0 - 2.0 * c2) - s2 * inv_sp2) * inv_d2;
        h.yy += (-2.0 * e * s2 + e * lr2 * (1.0 - 2.0 * s2) - c2 * inv_sp2) * inv_d2;
        h.xy += (-e * sin2p - e * lr2 * sin2p +
                 (dphi * cos2p - gt.cosp * gt.sinp) * inv_sp2) * inv_d2;
    }
    return h;
}

}  // namespace lfsim
