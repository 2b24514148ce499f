#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <variant>

#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"

namespace hypflow {

// Point of the upper half-plane, im > 0 strictly.
struct PointH {
  double re;
  double im;

  PointH(double re_, double im_) : re(re_), im(im_) {
    if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im))
      throw DomainError("PointH requires finite coordinates with im > 0");
  }

  std::complex<double> cplx() const { return {re, im}; }
};

inline PointH point_from(std::complex<double> z) { return PointH(z.real(), z.imag()); }

// Point of the boundary circle R u {inf}. The two real infinities are the
// same boundary point; only one flag is stored.
class BoundaryPoint {
 public:
  BoundaryPoint() : v_(0.0), inf_(false) {}
  explicit BoundaryPoint(double v) : v_(v), inf_(false) {
    if (std::isnan(v)) throw DomainError("BoundaryPoint: NaN");
    if (std::isinf(v)) { inf_ = true; v_ = 0.0; }
  }
  static BoundaryPoint infinity() {
    BoundaryPoint p;
    p.inf_ = true;
    return p;
  }

  bool is_infinity() const { return inf_; }
  double value() const {
    if (inf_) throw DomainError("BoundaryPoint: value() on the point at infinity");
    return v_;
  }

  bool approx_eq(const BoundaryPoint& o, double tolerance = tol::kGeom) const {
    if (inf_ || o.inf_) return inf_ == o.inf_;
    return std::abs(v_ - o.v_) <= tolerance;
  }

 private:
  double v_;
  bool inf_;
};

// Real 2x2 matrix of determinant one acting on the upper half-plane, stored
// up to projective sign (first entry of largest magnitude made positive).
class MobiusMap {
 public:
  MobiusMap(double m00, double m01, double m10, double m11)
      : a_(m00), b_(m01), c_(m10), d_(m11) {
    const double det = a_ * d_ - b_ * c_;
    if (!(det > 0.0) || !std::isfinite(det))
      throw InvalidMatrix("MobiusMap: determinant must be positive, got " + std::to_string(det));
    if (std::abs(det - 1.0) > tol::kDet) {
      const double s = 1.0 / std::sqrt(det);
      a_ *= s; b_ *= s; c_ *= s; d_ *= s;
    }
    canonicalize();
  }

  static MobiusMap identity() { return MobiusMap(1, 0, 0, 1); }

  // z -> zeta * z, zeta > 1: translation by log(zeta) along the imaginary axis.
  static MobiusMap axis_translation(double zeta) {
    if (!(zeta > 0)) throw DomainError("axis_translation: zeta must be positive");
    const double s = std::sqrt(zeta);
    return MobiusMap(s, 0, 0, 1.0 / s);
  }

  // z -> -1/z, half-turn about i; swaps the two sides of the imaginary axis.
  static MobiusMap half_turn() { return MobiusMap(0, -1, 1, 0); }

  double m00() const { return a_; }
  double m01() const { return b_; }
  double m10() const { return c_; }
  double m11() const { return d_; }
  double trace() const { return a_ + d_; }

  MobiusMap inverse() const { return MobiusMap(d_, -b_, -c_, a_); }

  MobiusMap operator*(const MobiusMap& o) const {
    return MobiusMap(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                     c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
  }

  PointH operator()(const PointH& z) const {
    const std::complex<double> w = (std::complex<double>(a_) * z.cplx() + b_) /
                                   (std::complex<double>(c_) * z.cplx() + d_);
    return point_from(w);
  }

  BoundaryPoint operator()(const BoundaryPoint& p) const {
    if (p.is_infinity()) {
      if (c_ == 0.0) return BoundaryPoint::infinity();
      return BoundaryPoint(a_ / c_);
    }
    const double v = p.value();
    const double den = c_ * v + d_;
    if (den == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint((a_ * v + b_) / den);
  }

  // Derivative d(mz)/dz at z (complex); |.| < 1 near attracting fixed points.
  std::complex<double> derivative(std::complex<double> z) const {
    const std::complex<double> den = std::complex<double>(c_) * z + d_;
    return 1.0 / (den * den);
  }

  bool approx_eq(const MobiusMap& o, double tolerance = tol::kGeom) const {
    const double dp = std::max(std::max(std::abs(a_ - o.a_), std::abs(b_ - o.b_)),
                               std::max(std::abs(c_ - o.c_), std::abs(d_ - o.d_)));
    const double dm = std::max(std::max(std::abs(a_ + o.a_), std::abs(b_ + o.b_)),
                               std::max(std::abs(c_ + o.c_), std::abs(d_ + o.d_)));
    return std::min(dp, dm) <= tolerance;
  }

  bool is_identity(double tolerance = tol::kGeom) const {
    return approx_eq(identity(), tolerance);
  }

 private:
  void canonicalize() {
    const double scale = std::max(std::max(std::abs(a_), std::abs(b_)),
                                  std::max(std::abs(c_), std::abs(d_)));
    const double eps = 1e-14 * scale;
    double lead = 0.0;
    for (double e : {a_, b_, c_, d_}) {
      if (std::abs(e) > eps) { lead = e; break; }
    }
    if (lead < 0.0) { a_ = -a_; b_ = -b_; c_ = -c_; d_ = -d_; }
  }

  double a_, b_, c_, d_;
};

// Conjugacy classification of a non-identity map.
struct Hyperbolic {
  BoundaryPoint repelling;
  BoundaryPoint attracting;
  double length;  // translation length, 2*acosh(|tr|/2)
};
struct Parabolic {
  BoundaryPoint fixed;
};
struct Elliptic {};

using MapClass = std::variant<Hyperbolic, Parabolic, Elliptic>;

inline MapClass classify(const MobiusMap& m) {
  if (m.is_identity(1e-12)) throw IdentityMap("classify: map is the identity");
  const double tr = std::abs(m.trace());
  const double a = m.m00(), b = m.m01(), c = m.m10(), d = m.m11();
  if (tr < 2.0 - tol::kDet) return Elliptic{};
  if (tr <= 2.0 + tol::kDet) {
    if (c == 0.0) return Parabolic{BoundaryPoint::infinity()};
    return Parabolic{BoundaryPoint((a - d) / (2.0 * c))};
  }
  const double length = 2.0 * std::acosh(tr / 2.0);
  if (c == 0.0) {
    // Fixed points inf and b/(d-a); inf attracts iff |a| > |d|.
    const BoundaryPoint inf = BoundaryPoint::infinity();
    const BoundaryPoint fin = BoundaryPoint(b / (d - a));
    if (std::abs(a) > std::abs(d)) return Hyperbolic{fin, inf, length};
    return Hyperbolic{inf, fin, length};
  }
  const double disc = std::sqrt(tr * tr - 4.0);
  const double p1 = ((a - d) + disc) / (2.0 * c);
  const double p2 = ((a - d) - disc) / (2.0 * c);
  // Attracting fixed point has |derivative| < 1, i.e. (c z + d)^2 > 1.
  const double q1 = c * p1 + d;
  const bool p1_attracts = q1 * q1 > 1.0;
  if (p1_attracts) return Hyperbolic{BoundaryPoint(p2), BoundaryPoint(p1), length};
  return Hyperbolic{BoundaryPoint(p1), BoundaryPoint(p2), length};
}

}  // namespace hypflow
