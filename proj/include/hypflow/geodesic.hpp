#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/mobius.hpp"

namespace hypflow {

// Complete geodesic, oriented from boundary endpoint x (backward) to y
// (forward). At most one endpoint is the point at infinity; a geodesic with
// an infinite endpoint is a Euclidean vertical line, otherwise a semicircle
// centered on the real axis.
struct BoundaryGeodesic {
  BoundaryPoint x;
  BoundaryPoint y;

  BoundaryGeodesic(BoundaryPoint x_, BoundaryPoint y_) : x(x_), y(y_) {
    if (x.is_infinity() && y.is_infinity())
      throw DomainError("BoundaryGeodesic: both endpoints at infinity");
    if (!x.is_infinity() && !y.is_infinity() && x.value() == y.value())
      throw DomainError("BoundaryGeodesic: coincident endpoints");
  }
  BoundaryGeodesic(double x_, double y_)
      : BoundaryGeodesic(BoundaryPoint(x_), BoundaryPoint(y_)) {}

  bool is_vertical() const { return x.is_infinity() || y.is_infinity(); }
  bool upward() const { return y.is_infinity(); }
  double finite_end() const { return x.is_infinity() ? y.value() : x.value(); }

  double center() const { return 0.5 * (x.value() + y.value()); }
  double radius() const { return 0.5 * std::abs(y.value() - x.value()); }
  double orient() const { return y.value() > x.value() ? 1.0 : -1.0; }
};

// Unit-speed parameterization. For a semicircle t = 0 is the Euclidean top;
// for a vertical line t = 0 is one Euclidean unit above the finite endpoint.
inline PointH point_at(const BoundaryGeodesic& g, double t) {
  if (g.is_vertical()) {
    const double h = g.upward() ? std::exp(t) : std::exp(-t);
    return PointH(g.finite_end(), h);
  }
  const double c = g.center(), rho = g.radius(), s = g.orient();
  const double sech = 1.0 / std::cosh(t);
  return PointH(c + rho * s * std::tanh(t), rho * sech);
}

// Euclidean unit tangent of the parameterization at parameter t.
inline std::pair<double, double> direction_at(const BoundaryGeodesic& g, double t) {
  if (g.is_vertical()) return {0.0, g.upward() ? 1.0 : -1.0};
  const double s = g.orient();
  const double sech = 1.0 / std::cosh(t);
  return {s * sech, -std::tanh(t)};
}

namespace detail {
// Parameter of a point assumed to lie on the geodesic. Stable near both
// endpoints: uses rho^2 - (re-c)^2 = im^2 for on-circle points.
inline double param_on(const BoundaryGeodesic& g, const PointH& p) {
  if (g.is_vertical()) {
    const double t = std::log(p.im);
    return g.upward() ? t : -t;
  }
  const double c = g.center(), rho = g.radius(), s = g.orient();
  const double u = s * (p.re - c);
  if (u >= 0.0) return std::log((rho + u) / p.im);
  return -std::log((rho - u) / p.im);
}
}  // namespace detail

inline double param_at_point(const BoundaryGeodesic& g, const PointH& p,
                             double tolerance = tol::kGeom) {
  if (g.is_vertical()) {
    if (std::abs(p.re - g.finite_end()) > tolerance)
      throw OffGeodesic("param_at_point: point not on vertical geodesic");
  } else {
    const double dx = p.re - g.center();
    const double dev = std::abs(std::hypot(dx, p.im) - g.radius());
    if (dev > tolerance * std::max(1.0, g.radius()))
      throw OffGeodesic("param_at_point: point not on geodesic");
  }
  return detail::param_on(g, p);
}

// Hyperbolic distance, d = 2 asinh(|p-q| / (2 sqrt(im_p im_q))).
inline double hyp_dist(const PointH& p, const PointH& q) {
  const double dr = p.re - q.re, di = p.im - q.im;
  return 2.0 * std::asinh(0.5 * std::hypot(dr, di) / std::sqrt(p.im * q.im));
}

// Distance to the imaginary axis: sinh(d) = |re|/im  (equivalently
// d = log(sec phi + tan phi) with sin phi = |re|/|p|).
inline double dist_to_imaginary_axis(const PointH& p) {
  return std::asinh(std::abs(p.re) / p.im);
}

// Signed variant, positive in the right half-plane.
inline double signed_dist_to_axis(const PointH& p) {
  return std::asinh(p.re / p.im);
}

// Distance from the whole geodesic to the imaginary axis. Zero when the
// geodesic meets or is asymptotic to the axis; otherwise cosh d = |x+y|/|x-y|.
inline double depth_to_axis(const BoundaryGeodesic& g) {
  if (g.is_vertical()) return 0.0;
  const double x = g.x.value(), y = g.y.value();
  if (x * y <= 0.0) return 0.0;
  return std::acosh(std::abs(x + y) / std::abs(x - y));
}

// Distance from a point to a geodesic: send the endpoints to {0, inf} and
// measure against the axis.
inline double dist_to_geodesic(const PointH& p, const BoundaryGeodesic& g) {
  std::complex<double> w;
  const std::complex<double> z = p.cplx();
  if (g.x.is_infinity()) w = 1.0 / (z - g.y.value());
  else if (g.y.is_infinity()) w = z - g.x.value();
  else w = (z - g.x.value()) / (z - g.y.value());
  return std::asinh(std::abs(w.real()) / std::abs(w.imag()));
}

// Transversal intersection of two complete geodesics. Tangency at the
// boundary and coincident geodesics yield nothing.
inline std::optional<PointH> intersect(const BoundaryGeodesic& g1,
                                       const BoundaryGeodesic& g2) {
  if (g1.is_vertical() && g2.is_vertical()) return std::nullopt;
  if (g1.is_vertical() || g2.is_vertical()) {
    const BoundaryGeodesic& vert = g1.is_vertical() ? g1 : g2;
    const BoundaryGeodesic& circ = g1.is_vertical() ? g2 : g1;
    const double v = vert.finite_end();
    const double c = circ.center(), rho = circ.radius();
    const double im2 = (rho - (v - c)) * (rho + (v - c));
    if (!(im2 > 0.0)) return std::nullopt;
    return PointH(v, std::sqrt(im2));
  }
  const double c1 = g1.center(), r1 = g1.radius();
  const double c2 = g2.center(), r2 = g2.radius();
  if (c1 == c2) return std::nullopt;
  const double re = 0.5 * (c1 + c2) + 0.5 * (r2 * r2 - r1 * r1) / (c1 - c2);
  const double im2 = (r1 - (re - c1)) * (r1 + (re - c1));
  if (!(im2 > 0.0)) return std::nullopt;
  return PointH(re, std::sqrt(im2));
}

// Flow line: a geodesic together with the current arc-length parameter.
struct TangentLine {
  BoundaryGeodesic line;
  double t;
};

// Base point plus direction angle in [0, 2pi), measured from the positive
// real axis.
struct TangentVector {
  PointH base;
  double angle;
};

inline double normalize_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

inline PointH point_at(const TangentLine& l) { return point_at(l.line, l.t); }

inline TangentVector vector_from_line(const TangentLine& l) {
  const auto [dx, dy] = direction_at(l.line, l.t);
  return TangentVector{point_at(l.line, l.t), normalize_angle(std::atan2(dy, dx))};
}

inline TangentLine line_from_vector(const TangentVector& v) {
  const double c = std::cos(v.angle), s = std::sin(v.angle);
  if (std::abs(c) < 1e-12) {
    if (s > 0.0) {
      BoundaryGeodesic g(BoundaryPoint(v.base.re), BoundaryPoint::infinity());
      return TangentLine{g, std::log(v.base.im)};
    }
    BoundaryGeodesic g(BoundaryPoint::infinity(), BoundaryPoint(v.base.re));
    return TangentLine{g, -std::log(v.base.im)};
  }
  const double center = v.base.re + v.base.im * (s / c);
  const double rho = v.base.im / std::abs(c);
  const double fwd = c > 0.0 ? 1.0 : -1.0;
  BoundaryGeodesic g(BoundaryPoint(center - fwd * rho), BoundaryPoint(center + fwd * rho));
  return TangentLine{g, detail::param_on(g, v.base)};
}

inline BoundaryGeodesic apply(const MobiusMap& m, const BoundaryGeodesic& g) {
  return BoundaryGeodesic(m(g.x), m(g.y));
}

inline TangentLine apply(const MobiusMap& m, const TangentLine& l) {
  const BoundaryGeodesic image = apply(m, l.line);
  return TangentLine{image, detail::param_on(image, m(point_at(l)))};
}

inline TangentVector apply(const MobiusMap& m, const TangentVector& v) {
  const std::complex<double> d = m.derivative(v.base.cplx());
  return TangentVector{m(v.base), normalize_angle(v.angle + std::arg(d))};
}

}  // namespace hypflow
