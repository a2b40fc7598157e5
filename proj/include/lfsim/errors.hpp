// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lfsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (nonpositive interval,
/// K out of range, bad config value, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

/// Geometry that leaves a quantity undefined, e.g. bearing between
/// coincident points or a reference point on top of an access point.
struct DegenerateGeometry : Error {
    using Error::Error;
};

/// Distance below the path-loss model's reference distance.
struct OutOfModelRange : Error {
    using Error::Error;
};

/// Fingerprint dimensions do not agree.
struct DimensionError : Error {
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line_number)
        : Error(msg + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
    std::size_t line;
};

/// File system / stream failure.
struct IoError : Error {
    using Error::Error;
};

/// Fisher information matrix with determinant below the singularity
/// tolerance. Carries the evaluation point and the offending determinant.
struct SingularFim : Error {
    SingularFim(const std::string& msg, double theta_x, double theta_y, double determinant)
        : Error(msg), x(theta_x), y(theta_y), det(determinant) {}
    double x;
    double y;
    double det;
};

/// A per-AP term of the closed-form bound is singular (bearing at an odd
/// multiple of pi/4 relative to the evaluation point).
struct SingularTerm : Error {
    SingularTerm(const std::string& msg, std::size_t ap, double bearing_rad)
        : Error(msg), ap_index(ap), bearing(bearing_rad) {}
    std::size_t ap_index;
    double bearing;
};

}  // namespace lfsim
