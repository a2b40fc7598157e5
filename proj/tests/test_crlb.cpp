// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "lfsim/crlb.hpp"
#include "lfsim/rng.hpp"

using namespace lfsim;

namespace {

CrlbParams corner_params() {
    CrlbParams p;
    p.exponent = 1.68;
    p.shadow_std_db = std::sqrt(2.45);
    p.doa_std_rad = deg2rad(2.0);
    p.aps = {Point{0, 0}, Point{100, 0}, Point{100, 100}, Point{0, 100}};
    p.area_m2 = 100.0 * 100.0;
    return p;
}

CrlbParams single_ap_params(Point ap, double n = 2.0, double sigma_s = 2.0,
                            double sigma_phi = deg2rad(2.0)) {
    CrlbParams p;
    p.exponent = n;
    p.shadow_std_db = sigma_s;
    p.doa_std_rad = sigma_phi;
    p.aps = {ap};
    p.area_m2 = 1.0;
    return p;
}

}  // namespace

TEST_CASE("eta: fixed value and scaling") {
    // 50 / ln(10)^2
    CHECK(eta(2.0, 2.0) == doctest::Approx(9.430584).epsilon(1e-6));
    CHECK(eta(4.0, 2.0) == doctest::Approx(4.0 * eta(2.0, 2.0)).epsilon(1e-14));
    CHECK(eta(2.0, 1e9) < 1e-15);  // vanishes as the shadowing grows
    CHECK(eta(3.0, 2.0) > eta(2.0, 2.0));
    CHECK(eta(2.0, 3.0) < eta(2.0, 2.0));
    CHECK_THROWS_AS(eta(2.0, 0.0), InvalidParameter);
}

TEST_CASE("log_likelihood: value at the true point") {
    const CrlbParams p = corner_params();
    const Point theta{37.0, 54.0};
    const double log_kappa =
        -std::log(2.0 * kPi * p.area_m2 * p.shadow_std_db * p.doa_std_rad);
    CHECK(log_likelihood(theta, theta, p) == doctest::Approx(4.0 * log_kappa).epsilon(1e-12));
    // any displacement only lowers it
    CHECK(log_likelihood(Point{38.0, 54.0}, theta, p) < 4.0 * log_kappa);
    CHECK_THROWS_AS(log_likelihood(Point{0, 0}, theta, p), DegenerateGeometry);
}

TEST_CASE("score: stationary at the true point") {
    const CrlbParams p = corner_params();
    const Point theta{61.0, 23.5};
    const Gradient2 g = score(theta, theta, p);
    CHECK(g.dx == 0.0);
    CHECK(g.dy == 0.0);
}

TEST_CASE("score: radial displacement from a single AP has no angular term") {
    const CrlbParams p = single_ap_params(Point{50, 0});
    const Point theta{10, 0};
    const Point r{5, 0};  // same bearing to the AP, larger distance
    const Gradient2 g = score(theta, r, p);
    CHECK(g.dy == 0.0);
    const double e = eta(p.exponent, p.shadow_std_db);
    const double d_t = 40.0;
    const double d_r = 45.0;
    const double expected = 2.0 * e * std::log(d_r / d_t) * (10.0 - 50.0) / (d_t * d_t);
    CHECK(g.dx == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("score: matches central finite differences of log_likelihood") {
    const CrlbParams p = corner_params();
    RngStream rng(51);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
        const Point theta{1.0 + 98.0 * rng.uniform01(), 1.0 + 98.0 * rng.uniform01()};
        const Point r{1.0 + 98.0 * rng.uniform01(), 1.0 + 98.0 * rng.uniform01()};
        const Gradient2 g = score(theta, r, p);
        const double fdx = (log_likelihood(r, Point{theta.x + h, theta.y}, p) -
                            log_likelihood(r, Point{theta.x - h, theta.y}, p)) /
                           (2 * h);
        const double fdy = (log_likelihood(r, Point{theta.x, theta.y + h}, p) -
                            log_likelihood(r, Point{theta.x, theta.y - h}, p)) /
                           (2 * h);
        const double err = std::hypot(g.dx - fdx, g.dy - fdy);
        const double scale = std::hypot(g.dx, g.dy);
        if (scale > 1e-8) {
            CHECK(err / scale <= 1e-6);
        } else {
            CHECK(err <= 1e-8);
        }
    }
}

TEST_CASE("fisher_information: single-AP diagonal cases") {
    const double d = 30.0;
    const double sigma_phi = deg2rad(2.0);
    const CrlbParams east = single_ap_params(Point{d, 0}, 2.0, 2.0, sigma_phi);
    const double e = eta(2.0, 2.0);
    const FisherInfo j0 = fisher_information(Point{0, 0}, east);
    CHECK(j0.j_xx == doctest::Approx(2 * e / (d * d)).epsilon(1e-12));
    CHECK(j0.j_yy == doctest::Approx(1.0 / (sigma_phi * sigma_phi * d * d)).epsilon(1e-12));
    CHECK(j0.j_xy == doctest::Approx(0.0));

    // bearing pi/2 swaps the diagonal
    const CrlbParams north = single_ap_params(Point{0, d}, 2.0, 2.0, sigma_phi);
    const FisherInfo j1 = fisher_information(Point{0, 0}, north);
    CHECK(j1.j_xx == doctest::Approx(j0.j_yy).epsilon(1e-12));
    CHECK(j1.j_yy == doctest::Approx(j0.j_xx).epsilon(1e-12));
}

TEST_CASE("fisher_information: positive semidefinite over the area") {
    const CrlbParams p = corner_params();
    RngStream rng(52);
    for (int t = 0; t < 500; ++t) {
        const Point theta{0.5 + 99.0 * rng.uniform01(), 0.5 + 99.0 * rng.uniform01()};
        const FisherInfo j = fisher_information(theta, p);
        CHECK(j.j_xx >= 0.0);
        CHECK(j.j_yy >= 0.0);
        CHECK(j.det() >= 0.0);
    }
}

TEST_CASE("fisher_information: entries scale as 1/d^2 and bound as d^2") {
    const CrlbParams p = corner_params();
    CrlbParams dilated = p;
    const double lambda = 3.0;
    for (Point& ap : dilated.aps) {
        ap.x *= lambda;
        ap.y *= lambda;
    }
    const Point theta{31.0, 47.0};
    const Point theta2{31.0 * lambda, 47.0 * lambda};
    const FisherInfo j = fisher_information(theta, p);
    const FisherInfo jd = fisher_information(theta2, dilated);
    CHECK(jd.j_xx == doctest::Approx(j.j_xx / (lambda * lambda)).epsilon(1e-12));
    CHECK(jd.j_yy == doctest::Approx(j.j_yy / (lambda * lambda)).epsilon(1e-12));
    CHECK(jd.j_xy == doctest::Approx(j.j_xy / (lambda * lambda)).epsilon(1e-12));
    CHECK(crlb_numeric(theta2, dilated) ==
          doctest::Approx(lambda * lambda * crlb_numeric(theta, p)).epsilon(1e-10));
}

TEST_CASE("sampled-curvature oracle reproduces the information matrix") {
    const CrlbParams p = corner_params();
    const double e = eta(p.exponent, p.shadow_std_db);
    RngStream rng(53);
    const int n_samples = 100000;
    for (int t = 0; t < 3; ++t) {
        const Point theta{5.0 + 90.0 * rng.uniform01(), 5.0 + 90.0 * rng.uniform01()};
        double sxx = 0, sxy = 0, syy = 0;
        RngStream draw = rng.substream(static_cast<std::uint64_t>(t));
        for (int i = 0; i < n_samples; ++i) {
            ObservationDeltas obs;
            for (std::size_t a = 0; a < p.aps.size(); ++a) {
                obs.log_dist_ratio.push_back(draw.normal() / std::sqrt(2.0 * e));
                obs.doa_error_rad.push_back(draw.normal() * p.doa_std_rad);
            }
            const Curvature2 h = log_density_curvature(theta, p, obs);
            sxx -= h.xx;
            sxy -= h.xy;
            syy -= h.yy;
        }
        const FisherInfo j = fisher_information(theta, p);
        CHECK(sxx / n_samples == doctest::Approx(j.j_xx).epsilon(0.02));
        CHECK(syy / n_samples == doctest::Approx(j.j_yy).epsilon(0.02));
        CHECK(sxy / n_samples == doctest::Approx(j.j_xy).epsilon(0.02));
    }
}

TEST_CASE("crlb_numeric: diagonal inverse and singular geometry") {
    FisherInfo diag{2.0, 0.0, 5.0};
    CHECK(crlb_numeric(diag) == doctest::Approx(0.5 + 0.2).epsilon(1e-14));

    // single AP due east: d^2/(2 eta) + sigma_phi^2 d^2
    const double d = 25.0;
    const double sigma_phi = deg2rad(3.0);
    const CrlbParams p = single_ap_params(Point{d, 0}, 2.0, 2.0, sigma_phi);
    const double e = eta(2.0, 2.0);
    CHECK(crlb_numeric(Point{0, 0}, p) ==
          doctest::Approx(d * d / (2 * e) + sigma_phi * sigma_phi * d * d).epsilon(1e-12));

    // every AP at a pi/4 bearing annihilates the determinant
    CrlbParams diag_aps = corner_params();
    diag_aps.aps = {Point{10, 10}, Point{20, 20}, Point{-5, -5}};
    CHECK_THROWS_AS(crlb_numeric(Point{0, 0}, diag_aps), SingularFim);
    try {
        crlb_numeric(Point{0, 0}, diag_aps);
    } catch (const SingularFim& e2) {
        CHECK(e2.x == 0.0);
        CHECK(e2.det <= kFimDetTol);
    }
}

TEST_CASE("crlb_closed_form: exact match with the numeric bound for one AP") {
    RngStream rng(54);
    int tested = 0;
    while (tested < 500) {
        const Point theta{200.0 * rng.uniform01() - 50.0, 200.0 * rng.uniform01() - 50.0};
        const Point ap{200.0 * rng.uniform01() - 50.0, 200.0 * rng.uniform01() - 50.0};
        const double d = distance(theta, ap);
        if (d < 0.5) continue;
        const Angle b = bearing(theta, ap);
        const double cos2p = std::cos(2.0 * b.radians());
        if (std::abs(cos2p) < 0.05) continue;  // exclude the degenerate wedge
        const CrlbParams p =
            single_ap_params(ap, 1.5 + 1.5 * rng.uniform01(), 1.0 + 2.0 * rng.uniform01(),
                             deg2rad(1.0 + 9.0 * rng.uniform01()));
        const double closed = crlb_closed_form(theta, p);
        const double numeric = crlb_numeric(theta, p);
        CHECK(std::abs(closed - numeric) <= 1e-10 * std::abs(numeric));
        ++tested;
    }
}

TEST_CASE("crlb_closed_form: fixed single-AP value and singular term") {
    const double d = 40.0;
    const double sigma_phi = deg2rad(2.0);
    const CrlbParams p = single_ap_params(Point{d, 0}, 2.0, 2.0, sigma_phi);
    const double e = eta(2.0, 2.0);
    // bearing 0: collapses to the diagonal case
    CHECK(crlb_closed_form(Point{0, 0}, p) ==
          doctest::Approx(d * d * (1 + 2 * e * sigma_phi * sigma_phi) / (2 * e)).epsilon(1e-12));

    const CrlbParams diag = single_ap_params(Point{30, 30});
    try {
        crlb_closed_form(Point{0, 0}, diag);
        FAIL("expected SingularTerm");
    } catch (const SingularTerm& st) {
        CHECK(st.ap_index == 0);
    }
}

TEST_CASE("crlb routes: multi-AP values disagree and are reported side by side") {
    const CrlbParams p = corner_params();
    const Point theta{40.0, 20.0};
    const double numeric = crlb_numeric(theta, p);
    const double closed = crlb_closed_form(theta, p);
    CHECK(numeric > 0.0);
    CHECK(closed > 0.0);
    // the per-AP sum drops cross-AP terms; equality is not expected
    CHECK(std::abs(numeric - closed) / numeric > 1e-6);
    MESSAGE("4-AP bound at (40,20): numeric=", numeric, " closed=", closed);
}

TEST_CASE("crlb monotonicity in the noise parameters") {
    RngStream rng(55);
    for (int t = 0; t < 50; ++t) {
        const Point theta{2.0 + 96.0 * rng.uniform01(), 2.0 + 96.0 * rng.uniform01()};
        CrlbParams p = corner_params();

        // increasing sigma_phi raises the bound
        double prev = -1.0;
        for (double deg : {1.0, 2.0, 5.0, 10.0}) {
            p.doa_std_rad = deg2rad(deg);
            const double v = crlb_numeric(theta, p);
            CHECK(v > prev);
            prev = v;
        }
        // increasing sigma_s (lower eta) raises the bound
        p = corner_params();
        prev = -1.0;
        for (double sig : {1.0, 2.0, 3.0}) {
            p.shadow_std_db = sig;
            const double v = crlb_numeric(theta, p);
            CHECK(v > prev);
            prev = v;
        }
        // increasing the exponent (higher eta) lowers the bound
        p = corner_params();
        prev = 1e300;
        for (double n : {1.5, 2.0, 2.5, 3.0}) {
            p.exponent = n;
            const double v = crlb_numeric(theta, p);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("area and normalization constant cancel everywhere except the likelihood") {
    CrlbParams small = corner_params();
    CrlbParams big = corner_params();
    big.area_m2 = 1e6;
    const Point theta{33.0, 71.0};
    const Point r{35.0, 69.0};
    CHECK(log_likelihood(r, theta, small) != log_likelihood(r, theta, big));
    const Gradient2 gs = score(theta, r, small);
    const Gradient2 gb = score(theta, r, big);
    CHECK(gs.dx == gb.dx);
    CHECK(gs.dy == gb.dy);
    const FisherInfo js = fisher_information(theta, small);
    const FisherInfo jb = fisher_information(theta, big);
    CHECK(js.j_xx == jb.j_xx);
    CHECK(js.j_xy == jb.j_xy);
    CHECK(js.j_yy == jb.j_yy);
    CHECK(crlb_numeric(theta, small) == crlb_numeric(theta, big));
    CHECK(crlb_closed_form(theta, small) == crlb_closed_form(theta, big));
}

TEST_CASE("crlb params validation") {
    CrlbParams p = corner_params();
    p.shadow_std_db = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = corner_params();
    p.doa_std_rad = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = corner_params();
    p.aps.clear();
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
