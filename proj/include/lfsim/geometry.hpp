// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "lfsim/errors.hpp"

namespace lfsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Observer-target distances below this are treated as coincident:
/// bearings (and everything dividing by the distance) are undefined there.
inline constexpr double kCoincidenceTolM = 1e-12;

/// Planar position in meters. Used for APs, RPs, test points and estimates.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps any finite value into the canonical range [0, 2*pi). Idempotent.
inline double normalize_radians(double r) {
    double v = std::fmod(r, kTwoPi);
    if (v < 0.0) v += kTwoPi;
    if (v >= kTwoPi) v = 0.0;  // fmod rounding can land exactly on 2*pi
    return v;
}

/// Plane angle held in the canonical range [0, 2*pi).
class Angle {
  public:
    Angle() = default;
    static Angle from_radians(double r) { return Angle(normalize_radians(r)); }
    static Angle from_degrees(double d) { return Angle(normalize_radians(deg2rad(d))); }

    double radians() const { return value_; }
    double degrees() const { return rad2deg(value_); }

  private:
    explicit Angle(double canonical) : value_(canonical) {}
    double value_ = 0.0;
};

/// Euclidean distance in meters.
inline double distance(Point p, Point q) { return std::hypot(q.x - p.x, q.y - p.y); }

/// Bearing from `observer` to `target`, in [0, 2*pi), measured
/// counterclockwise from the +x axis. Satisfies
///   cos(b) = (target.x - observer.x)/d,  sin(b) = (target.y - observer.y)/d.
/// Throws DegenerateGeometry for (near-)coincident points.
inline Angle bearing(Point observer, Point target) {
    const double dx = target.x - observer.x;
    const double dy = target.y - observer.y;
    if (std::hypot(dx, dy) < kCoincidenceTolM) {
        throw DegenerateGeometry("bearing undefined: observer and target coincide");
    }
    return Angle::from_radians(std::atan2(dy, dx));
}

/// Minimal signed difference a - b wrapped into (-pi, pi].
/// The tie at exactly pi resolves to +pi.
inline double angular_diff(Angle a, Angle b) {
    double d = std::remainder(a.radians() - b.radians(), kTwoPi);  // in [-pi, pi]
    if (d <= -kPi) d += kTwoPi;
    return d;
}

}  // namespace lfsim
