#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "hypflow/collar.hpp"
#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/geodesic.hpp"
#include "hypflow/quadrature.hpp"
#include "hypflow/rng.hpp"

namespace hypflow {

// Normalization data for the invariant measure
// (1/(pi * area_s)) (x - y)^{-2} dx dy dt and the section thickness epsilon.
struct MeasureConstants {
  double area_s;
  double epsilon;

  double normalization() const { return 1.0 / (M_PI * area_s); }
};

struct PieceReport {
  double numeric = 0.0;
  double closed_form = 0.0;
  double rel_error = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
};

enum class ZetaBranch { ZetaASmall, ZetaALarge };

struct SectionMeasureReport {
  double numeric = 0.0;
  double closed_form = 0.0;
  double rel_error = 0.0;
  std::optional<std::array<PieceReport, 3>> pieces;  // indexed m1, m2, m3
  ZetaBranch branch = ZetaBranch::ZetaASmall;
};

namespace detail {

inline double rel_err(double numeric, double closed) {
  return std::abs(numeric - closed) / std::abs(closed);
}

// After integrating out y analytically, the core-section measure reduces to
// integral over x in (0, inf) of x (zeta^2 - 1) / ((x^2 + 1)(x^2 + zeta^2)),
// which equals log zeta. Integrated in u = log x.
inline double core_section_integral(double zeta) {
  const double ell = std::log(zeta);
  const double u_max = 20.0 + ell;
  auto f = [zeta](double u) {
    const double x = std::exp(u);
    const double x2 = x * x;
    return x2 * (zeta * zeta - 1.0) / ((x2 + 1.0) * (x2 + zeta * zeta));
  };
  return integrate_adaptive(f, -u_max, u_max);
}

}  // namespace detail

// Measure of the epsilon-thickened section over the core geodesic:
// closed form epsilon * length / (pi * area_s).
inline SectionMeasureReport thick_section_measure(double length,
                                                  const MeasureConstants& consts) {
  if (!(length > 0.0)) throw NonPositiveLength("thick_section_measure: length must be positive");
  if (!(consts.epsilon > 0.0) || consts.epsilon >= max_collar_width(length))
    throw DomainError("thick_section_measure: need 0 < epsilon < log coth(length/4)");
  SectionMeasureReport rep;
  const double zeta = std::exp(length);
  const double scale = consts.epsilon * consts.normalization();
  rep.numeric = scale * detail::core_section_integral(zeta);
  rep.closed_form = scale * length;
  rep.rel_error = detail::rel_err(rep.numeric, rep.closed_form);
  return rep;
}

namespace detail {

// y-integrated densities for the boundary-ray section. For a fixed x the
// inner integral of (x - y)^{-2} over the admissible y-interval telescopes to
// differences of the three terms below.
struct CollarIntegrands {
  double a, b, zeta;

  // 1/(x - y) at the tangency endpoint y = (1-b)/(1+b) x.
  double g_tan(double x) const { return (1.0 + b) / (2.0 * b * x); }
  // 1/(x - y) at the y through the lower ray endpoint (tau = 1).
  double f_one(double x) const { return (x - a) / (x * x - 2.0 * a * x + 1.0); }
  // 1/(x - y) at the y through the upper ray endpoint (tau = zeta).
  double f_zeta(double x) const {
    return (x - a * zeta) / (x * x - 2.0 * a * zeta * x + zeta * zeta);
  }

  double anti_tan(double x) const { return (1.0 + b) / (2.0 * b) * std::log(x); }
  double anti_one(double x) const { return 0.5 * std::log(x * x - 2.0 * a * x + 1.0); }
  double anti_zeta(double x) const {
    return 0.5 * std::log(x * x - 2.0 * a * zeta * x + zeta * zeta);
  }
};

template <class F>
double integrate_logx(const F& f, double x_lo, double x_hi) {
  auto g = [&f](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  return integrate_adaptive(g, std::log(x_lo), std::log(x_hi));
}

}  // namespace detail

// Measure of the boundary-ray section split into the three x-ranges;
// the sum has closed form epsilon (1 + cosh r) length / (2 pi area_s).
// Both orderings of zeta*a against (1+b)/a are supported; pieces are indexed
// with m3 the lowest x-range (starting at a) and m1 the highest (ending at
// zeta (1+b)/a).
inline SectionMeasureReport collar_section_measures(const CollarSpec& spec,
                                                    const MeasureConstants& consts) {
  const double r_max = max_collar_width(spec.length);
  if (!(consts.epsilon > 0.0) || consts.epsilon >= r_max - spec.r)
    throw DomainError("collar_section_measures: need 0 < epsilon < R - r");
  const double a = spec.a, b = spec.b, zeta = spec.zeta;
  const double za = zeta * a;
  const double q = (1.0 + b) / a;
  if (std::abs(za - q) <= 1e-12 * std::max(za, q))
    throw BranchBoundaryDegenerate("collar_section_measures: zeta*a == (1+b)/a; perturb r");

  const detail::CollarIntegrands I{a, b, zeta};
  const double scale = consts.epsilon * consts.normalization();

  SectionMeasureReport rep;
  rep.pieces.emplace();
  auto& m = *rep.pieces;

  auto fill = [&](PieceReport& p, double lo, double hi, auto integrand, double closed) {
    p.x_lo = lo;
    p.x_hi = hi;
    p.numeric = scale * detail::integrate_logx(integrand, lo, hi);
    p.closed_form = scale * closed;
    p.rel_error = detail::rel_err(p.numeric, p.closed_form);
  };

  if (za < q) {
    rep.branch = ZetaBranch::ZetaASmall;
    fill(m[0], q, zeta * q, [&I](double x) { return I.g_tan(x) - I.f_zeta(x); },
         (I.anti_tan(zeta * q) - I.anti_zeta(zeta * q)) - (I.anti_tan(q) - I.anti_zeta(q)));
    fill(m[1], za, q, [&I](double x) { return I.f_one(x) - I.f_zeta(x); },
         (I.anti_one(q) - I.anti_zeta(q)) - (I.anti_one(za) - I.anti_zeta(za)));
    fill(m[2], a, za, [&I](double x) { return I.f_one(x); },
         I.anti_one(za) - I.anti_one(a));
  } else {
    rep.branch = ZetaBranch::ZetaALarge;
    fill(m[0], za, zeta * q, [&I](double x) { return I.g_tan(x) - I.f_zeta(x); },
         (I.anti_tan(zeta * q) - I.anti_zeta(zeta * q)) - (I.anti_tan(za) - I.anti_zeta(za)));
    fill(m[1], q, za, [&I](double x) { return I.g_tan(x); },
         I.anti_tan(za) - I.anti_tan(q));
    fill(m[2], a, q, [&I](double x) { return I.f_one(x); },
         I.anti_one(q) - I.anti_one(a));
  }

  rep.numeric = m[0].numeric + m[1].numeric + m[2].numeric;
  rep.closed_form = scale * (1.0 + b) / (2.0 * b) * spec.length;
  rep.rel_error = detail::rel_err(rep.numeric, rep.closed_form);
  return rep;
}

// Section measures over the boundary ray derived from the sum identity:
// j3 (core-crossing entries) equals the core-section measure, j1 (same-side
// returns, one orientation class) is the remainder, and the full inward
// section is j0 = 2 j1 + j3.
struct DerivedSections {
  double j0_closed, j1_closed, j3_closed;
  double j0_numeric, j1_numeric, j3_numeric;
};

inline DerivedSections derived_section_measures(const CollarSpec& spec,
                                                const MeasureConstants& consts) {
  DerivedSections d;
  const double scale = consts.epsilon * consts.normalization();
  const double cr = spec.cosh_r();
  d.j3_closed = scale * spec.length;
  d.j1_closed = 0.5 * scale * (cr - 1.0) * spec.length;
  d.j0_closed = 2.0 * d.j1_closed + d.j3_closed;

  const SectionMeasureReport thick = thick_section_measure(spec.length, consts);
  const SectionMeasureReport pieces = collar_section_measures(spec, consts);
  d.j3_numeric = thick.numeric;
  d.j1_numeric = pieces.numeric - thick.numeric;
  d.j0_numeric = 2.0 * d.j1_numeric + d.j3_numeric;
  return d;
}

// --- First-intersection helpers --------------------------------------------

// First crossing of the directed geodesic (x, y) with the full right boundary
// ray, as (ray parameter tau, trajectory parameter t). Finite endpoints only.
inline std::optional<std::pair<double, double>> first_ray_hit(double x, double y,
                                                              const CollarSpec& spec) {
  int n = 0;
  const auto taus = ray_crossings(x, y, spec.a, &n);
  if (n == 0) return std::nullopt;
  const BoundaryGeodesic g(x, y);
  double best_t = 0.0, best_tau = 0.0;
  bool have = false;
  for (int i = 0; i < n; ++i) {
    const double t = detail::param_on(g, spec.ray_point(taus[i]));
    if (!have || t < best_t) {
      best_t = t;
      best_tau = taus[i];
      have = true;
    }
  }
  return std::make_pair(best_tau, best_t);
}

// Membership of (x, y) in the inward section over the fundamental ray segment
// tau in [1, zeta]: the first ray crossing must land inside the segment.
inline bool in_ray_section(double x, double y, const CollarSpec& spec) {
  const auto hit = first_ray_hit(x, y, spec);
  return hit && hit->first >= 1.0 && hit->first <= spec.zeta;
}

struct SymmetryCheckResult {
  int samples = 0;
  int failures = 0;
  bool passed() const { return samples > 0 && failures == 0; }
};

// The anti-conformal isometry z -> zeta / conj(z) maps the boundary ray to
// itself (tau -> zeta/tau) and exchanges the two same-side orientation
// classes over the segment. Samples class-near triples and checks their
// images land in the class-far section, and that the map is an involution.
inline SymmetryCheckResult symmetry_check(const CollarSpec& spec, int n_samples = 10000,
                                          std::uint64_t seed = 0x5eedULL) {
  Rng rng(seed);
  SymmetryCheckResult res;
  const double x_hi = spec.zeta * (1.0 + spec.b) / spec.a;
  while (res.samples < n_samples) {
    const double x = rng.uniform(1e-3, x_hi);
    const double y = rng.uniform(0.0, x);
    if (std::abs(y) < 1e-12 || std::abs(x - y) < 1e-12) continue;
    const auto hit = first_ray_hit(x, y, spec);
    if (!hit || hit->first < 1.0 || hit->first > spec.zeta) continue;
    ++res.samples;

    const double xi = spec.zeta / x;
    const double yi = spec.zeta / y;
    bool ok = yi > xi && xi > 0.0;  // image lies in the far-returning class
    const auto ihit = first_ray_hit(xi, yi, spec);
    ok = ok && ihit.has_value();
    if (ok) {
      // Image first hit is the reflected point zeta / tau.
      const double expect_tau = spec.zeta / hit->first;
      ok = std::abs(ihit->first - expect_tau) <= tol::kGeom * std::max(1.0, expect_tau) &&
           ihit->first >= 1.0 - tol::kGeom && ihit->first <= spec.zeta + tol::kGeom;
    }
    // Involution on endpoints.
    ok = ok && std::abs(spec.zeta / xi - x) <= tol::kGeom * std::max(1.0, x) &&
         std::abs(spec.zeta / yi - y) <= tol::kGeom * std::max(1.0, std::abs(y));
    if (!ok) ++res.failures;
  }
  return res;
}

}  // namespace hypflow
