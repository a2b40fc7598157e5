// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "lfsim/fingerprint.hpp"
#include "lfsim/geometry.hpp"

namespace lfsim {

/// Parameters of the measurement likelihood used for the error bound.
/// The area enters only the additive normalization constant of the
/// log-likelihood; it cancels from the score, the information matrix and
/// every exported bound (asserted by test).
struct CrlbParams {
    double exponent = 2.0;        ///< path-loss exponent n
    double shadow_std_db = 1.0;   ///< sigma_s > 0
    double doa_std_rad = 0.01;    ///< sigma_phi > 0
    std::vector<Point> aps;
    double area_m2 = 1.0;

    static CrlbParams from_scenario(const Scenario& sc);
    void validate() const;
};

/// Symmetric 2x2 information matrix in 1/m^2 units.
struct FisherInfo {
    double j_xx = 0.0;
    double j_xy = 0.0;
    double j_yy = 0.0;

    double det() const { return j_xx * j_yy - j_xy * j_xy; }
    double trace() const { return j_xx + j_yy; }
};

/// Determinant tolerance below which the information matrix is treated as
/// singular. The 2x2 inversion itself is exact arithmetic; this guards only
/// the genuinely degenerate bearing geometry.
inline constexpr double kFimDetTol = 1e-12;

/// RSSI information density eta = (10 n / (sqrt(2) sigma_s ln 10))^2.
/// Strictly increasing in n, strictly decreasing in sigma_s.
double eta(double exponent, double shadow_std_db);

/// Log density of observing the feature vector of point `r` when the true
/// location is `theta`, expressed through per-AP distance ratios and bearing
/// differences. Throws DegenerateGeometry when either point touches an AP.
double log_likelihood(Point r, Point theta, const CrlbParams& params);

struct Gradient2 {
    double dx = 0.0;
    double dy = 0.0;
};

/// Exact gradient of log_likelihood with respect to theta; matches central
/// finite differences of log_likelihood. Note the angular contribution to
/// the y-component carries -cos(bearing): this is the geometric bearing
/// derivative, and it differs in sign from the convention baked into
/// fisher_information() below (see that note).
Gradient2 score(Point theta, Point r, const CrlbParams& params);

/// Analytic information matrix at theta.
///
/// Convention note: the DoA part of the off-diagonal entry enters with a
/// positive sign, which is the convention under which the determinant
/// factorizes into per-AP terms and crlb_closed_form() is exact for a
/// single AP (their common origin). Under this convention the matrix of a
/// single AP at a bearing of an odd multiple of pi/4 is singular, and the
/// sampled-curvature oracle (log_density_curvature) reproduces every entry
/// in expectation. The alternative (geometric) sign used by score() would
/// make a single AP always informative; both routes are exposed and the
/// numeric bound below is the reference.
FisherInfo fisher_information(Point theta, const CrlbParams& params);

/// Reference bound: trace of the explicit 2x2 inverse, (J_xx+J_yy)/det(J),
/// in m^2. Throws SingularFim when det(J) <= kFimDetTol. The overload with
/// theta attaches the evaluation point to the error.
double crlb_numeric(const FisherInfo& info);
double crlb_numeric(Point theta, const CrlbParams& params);

/// Closed-form per-AP bound:
///   sum_i d_i^2 (1 + 2 eta sigma_phi^2) / (2 eta (cos^2 phi_i - sin^2 phi_i)^2).
/// Exactly equals crlb_numeric for a single AP; for several APs the two
/// generally disagree (the per-AP sum drops the cross-AP determinant terms)
/// and the numeric route is preferred. Throws SingularTerm when an AP sits
/// at a degenerate pi/4-type bearing.
double crlb_closed_form(Point theta, const CrlbParams& params);

/// One synthetic observation expressed in the likelihood's own coordinates:
/// per-AP log distance ratios ln(d_ir/d_itheta) and bearing errors in
/// radians. Under the generative model the former are N(0, 1/(2 eta)) and
/// the latter N(0, sigma_phi^2).
struct ObservationDeltas {
    std::vector<double> log_dist_ratio;
    std::vector<double> doa_error_rad;
};

struct Curvature2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// Analytic second derivatives of the log density at theta for a given
/// observation, used by the sampled-curvature oracle: the mean of the
/// negated result over observations drawn from the generative model equals
/// fisher_information(theta) (the observation-dependent terms have zero
/// mean). Shares the off-diagonal sign convention of fisher_information().
Curvature2 log_density_curvature(Point theta, const CrlbParams& params,
                                 const ObservationDeltas& obs);

}  // namespace lfsim
