#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/geodesic.hpp"

namespace hypflow {

// Largest embedded collar half-width around a closed geodesic of length len:
// R = log coth(len/4), strictly decreasing in len.
inline double max_collar_width(double length) {
  if (!(length > 0.0)) throw NonPositiveLength("max_collar_width: length must be positive");
  return std::log(1.0 / std::tanh(0.25 * length));
}

// Closed-form data of an embedded collar of half-width r about a closed
// geodesic of length `length`, in the normalization where the geodesic lifts
// to the imaginary axis. The boundary rays through +/-(a + i b) make angle
// phi with the axis; a = sin phi, b = cos phi, cosh r = 1/b, sinh r = tan phi,
// area = 2 * length * sinh r.
struct CollarSpec {
  double length;
  double r;
  double phi;
  double a;
  double b;
  double zeta;  // exp(length), deck translation multiplier
  double area;

  double cosh_r() const { return 1.0 / b; }

  // Boundary ray points tau * (a + i b) (right side) and tau * (-a + i b).
  PointH ray_point(double tau, bool right_side = true) const {
    return PointH(right_side ? tau * a : -tau * a, tau * b);
  }
};

inline CollarSpec collar_from_width(double length, double r) {
  if (!(length > 0.0)) throw NonPositiveLength("collar_from_width: length must be positive");
  if (!(r > 0.0)) throw DomainError("collar_from_width: width must be positive");
  if (r >= max_collar_width(length))
    throw WidthExceedsEmbedding("collar_from_width: r >= log coth(length/4)");
  CollarSpec c;
  c.length = length;
  c.r = r;
  c.a = std::tanh(r);
  c.b = 1.0 / std::cosh(r);
  c.phi = std::atan(std::sinh(r));
  c.zeta = std::exp(length);
  c.area = 2.0 * length * std::sinh(r);
  return c;
}

inline CollarSpec collar_from_area(double length, double area) {
  if (!(length > 0.0)) throw NonPositiveLength("collar_from_area: length must be positive");
  if (!(area > 0.0)) throw DomainError("collar_from_area: area must be positive");
  const double r = std::asinh(area / (2.0 * length));
  if (r >= max_collar_width(length))
    throw WidthExceedsEmbedding("collar_from_area: implied width exceeds embedding bound");
  return collar_from_width(length, r);
}

// Forward endpoint of the geodesic from x > 0 through the boundary-ray point
// tau * (a + i b):  y = (a x tau - tau^2) / (x - a tau).
inline double crossing_y(double x, double tau, const CollarSpec& c) {
  const double den = x - c.a * tau;
  if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(x)))
    throw VerticalLine("crossing_y: lift is the vertical line through x");
  return (c.a * x * tau - tau * tau) / den;
}

// Endpoints of the geodesic tangent to the right boundary ray at tau*(a+ib):
// x = tau (1+b)/a, y = tau (1-b)/a; note x*y = tau^2.
inline std::pair<double, double> tangent_endpoints(double tau, const CollarSpec& c) {
  return {tau * (1.0 + c.b) / c.a, tau * (1.0 - c.b) / c.a};
}

// Ray-parameters tau > 0 at which the geodesic with finite endpoints (x, y)
// meets the full ray {tau (a + i b), tau > 0}; roots of
// tau^2 - a (x+y) tau + x y = 0. Result sorted ascending, may be empty.
inline std::array<double, 2> ray_crossings(double x, double y, double a, int* count) {
  const double half_sum = 0.5 * a * (x + y);
  const double disc = half_sum * half_sum - x * y;
  *count = 0;
  std::array<double, 2> out{0.0, 0.0};
  if (!(disc >= 0.0)) return out;
  const double sq = std::sqrt(disc);
  for (double tau : {half_sum - sq, half_sum + sq}) {
    if (tau > 0.0) out[(*count)++] = tau;
  }
  if (*count == 2 && out[0] > out[1]) std::swap(out[0], out[1]);
  if (*count == 2 && out[0] == out[1]) *count = 1;
  return out;
}

// Orientation classes of a collar entry in normalized coordinates, entry from
// the right half-plane side (backward endpoint x > 0).
enum class EntrySide {
  ReturnsNear,  // 0 < y < x: re-exits through the same boundary, moving down the ray
  ReturnsFar,   // 0 < x < y: re-exits through the same boundary, moving up the ray
  CrossesCore,  // y < 0 < x: continues across the core and leaves on the far side
};

inline const char* to_string(EntrySide s) {
  switch (s) {
    case EntrySide::ReturnsNear: return "returns-near";
    case EntrySide::ReturnsFar: return "returns-far";
    case EntrySide::CrossesCore: return "crosses-core";
  }
  return "?";
}

inline EntrySide classify_entry(double x, double y) {
  if (!(x > 0.0)) throw DomainError("classify_entry: requires x > 0");
  const double eps = 1e-12 * std::max(1.0, std::abs(x));
  if (std::abs(y) <= eps || std::abs(y - x) <= eps)
    throw DegenerateEndpoint("classify_entry: y coincides with 0 or x");
  if (y < 0.0) return EntrySide::CrossesCore;
  return y < x ? EntrySide::ReturnsNear : EntrySide::ReturnsFar;
}

}  // namespace hypflow
