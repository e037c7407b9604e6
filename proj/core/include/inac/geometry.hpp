#pragma once

#include <array>
#include <cmath>

namespace inac {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Position in the Earth-centered Earth-fixed frame, meters.
struct EcefPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr EcefPoint operator+(const EcefPoint& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr EcefPoint operator-(const EcefPoint& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr EcefPoint operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const EcefPoint&) const = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr double dot(const EcefPoint& o) const { return x * o.x + y * o.y + z * o.z; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// One row of a pseudo-range design matrix: three line-of-sight components
/// followed by the clock column.
using DesignRow = std::array<double, 4>;

double distance(const EcefPoint& a, const EcefPoint& b);

/// Unit vector from `estimate` toward `anchor` with `clock_column` appended.
/// `clock_column` is 1 when the clock unknown is carried in meters and c when
/// it is carried in seconds. Throws DegenerateGeometry if the points coincide.
DesignRow los_unit_row(const EcefPoint& anchor, const EcefPoint& estimate, double clock_column = 1.0);

/// Elevation of `sat` above the local horizontal plane at `user`, radians in
/// [-pi/2, pi/2]. Local up is the geocentric radial through the user.
double elevation_angle(const EcefPoint& user, const EcefPoint& sat);

/// Geocentric unit up vector at `p`. Throws DegenerateGeometry at the origin.
EcefPoint geocentric_up(const EcefPoint& p);

}  // namespace inac
