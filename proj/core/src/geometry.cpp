#include "inac/geometry.hpp"

#include <algorithm>

#include "inac/errors.hpp"

namespace inac {

double distance(const EcefPoint& a, const EcefPoint& b) { return (a - b).norm(); }

DesignRow los_unit_row(const EcefPoint& anchor, const EcefPoint& estimate, double clock_column) {
  const EcefPoint d = anchor - estimate;
  const double r = d.norm();
  if (!(r > 0.0)) throw DegenerateGeometry("line of sight undefined: anchor coincides with estimate");
  return {d.x / r, d.y / r, d.z / r, clock_column};
}

EcefPoint geocentric_up(const EcefPoint& p) {
  const double r = p.norm();
  if (!(r > 0.0)) throw DegenerateGeometry("local up undefined at the Earth's center");
  return p * (1.0 / r);
}

double elevation_angle(const EcefPoint& user, const EcefPoint& sat) {
  const EcefPoint up = geocentric_up(user);
  const EcefPoint d = sat - user;
  const double r = d.norm();
  if (!(r > 0.0)) throw DegenerateGeometry("elevation undefined: satellite coincides with user");
  return std::asin(std::clamp(up.dot(d) / r, -1.0, 1.0));
}

}  // namespace inac
