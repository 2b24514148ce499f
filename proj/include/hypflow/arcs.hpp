#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypflow/collar.hpp"
#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/geodesic.hpp"
#include "hypflow/surface.hpp"

namespace hypflow {

// Euclidean circle or straight line; hypercycle lifts are circles through the
// axis endpoints with center off the real axis (or slanted lines when one
// endpoint is at infinity).
struct GeneralizedCircle {
  bool is_line = false;
  double cx = 0, cy = 0, radius = 0;  // circle
  double px = 0, py = 0, dx = 0, dy = 0;  // line through (px,py), unit direction

  static GeneralizedCircle through(double x1, double y1, double x2, double y2,
                                   double x3, double y3) {
    const double a11 = 2.0 * (x2 - x1), a12 = 2.0 * (y2 - y1);
    const double a21 = 2.0 * (x3 - x1), a22 = 2.0 * (y3 - y1);
    const double b1 = (x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1);
    const double b2 = (x3 * x3 + y3 * y3) - (x1 * x1 + y1 * y1);
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
    GeneralizedCircle g;
    if (std::abs(det) <= 1e-13 * scale * scale) {
      g.is_line = true;
      g.px = x1;
      g.py = y1;
      const double n = std::hypot(x2 - x1, y2 - y1);
      g.dx = (x2 - x1) / n;
      g.dy = (y2 - y1) / n;
      return g;
    }
    g.cx = (b1 * a22 - b2 * a12) / det;
    g.cy = (a11 * b2 - a21 * b1) / det;
    g.radius = std::hypot(x1 - g.cx, y1 - g.cy);
    return g;
  }

  static GeneralizedCircle line_through(double x1, double y1, double x2, double y2) {
    GeneralizedCircle g;
    g.is_line = true;
    g.px = x1;
    g.py = y1;
    const double n = std::hypot(x2 - x1, y2 - y1);
    g.dx = (x2 - x1) / n;
    g.dy = (y2 - y1) / n;
    return g;
  }

  static GeneralizedCircle of_geodesic(const BoundaryGeodesic& g) {
    GeneralizedCircle c;
    if (g.is_vertical()) {
      c.is_line = true;
      c.px = g.finite_end();
      c.py = 0.0;
      c.dx = 0.0;
      c.dy = 1.0;
    } else {
      c.cx = g.center();
      c.cy = 0.0;
      c.radius = g.radius();
    }
    return c;
  }
};

namespace detail {

inline int circle_line_points(const GeneralizedCircle& circ, const GeneralizedCircle& line,
                              double out_x[2], double out_y[2]) {
  // Project center onto the line.
  const double wx = circ.cx - line.px, wy = circ.cy - line.py;
  const double along = wx * line.dx + wy * line.dy;
  const double fx = line.px + along * line.dx, fy = line.py + along * line.dy;
  const double d2 = (circ.cx - fx) * (circ.cx - fx) + (circ.cy - fy) * (circ.cy - fy);
  const double h2 = circ.radius * circ.radius - d2;
  if (!(h2 > 0.0)) return 0;
  const double h = std::sqrt(h2);
  out_x[0] = fx + h * line.dx;
  out_y[0] = fy + h * line.dy;
  out_x[1] = fx - h * line.dx;
  out_y[1] = fy - h * line.dy;
  return 2;
}

inline int line_line_point(const GeneralizedCircle& a, const GeneralizedCircle& b,
                           double out_x[2], double out_y[2]) {
  const double det = a.dx * b.dy - a.dy * b.dx;
  if (std::abs(det) < 1e-15) return 0;
  const double rx = b.px - a.px, ry = b.py - a.py;
  const double s = (rx * b.dy - ry * b.dx) / det;
  out_x[0] = a.px + s * a.dx;
  out_y[0] = a.py + s * a.dy;
  return 1;
}

inline int circle_circle_points(const GeneralizedCircle& a, const GeneralizedCircle& b,
                                double out_x[2], double out_y[2]) {
  const double ex = b.cx - a.cx, ey = b.cy - a.cy;
  const double d2 = ex * ex + ey * ey;
  if (d2 <= 0.0) return 0;
  // Radical line: points at distance ra from a-center whose power difference
  // vanishes; param along the center line.
  const double t = 0.5 * (d2 + a.radius * a.radius - b.radius * b.radius) / d2;
  const double h2 = a.radius * a.radius - t * t * d2;
  if (!(h2 > 0.0)) return 0;
  const double h = std::sqrt(h2 / d2);
  const double mx = a.cx + t * ex, my = a.cy + t * ey;
  out_x[0] = mx + h * -ey;
  out_y[0] = my + h * ex;
  out_x[1] = mx - h * -ey;
  out_y[1] = my - h * ex;
  return 2;
}

// Upper half-plane intersections (0..2).
inline int intersect_generalized(const GeneralizedCircle& a, const GeneralizedCircle& b,
                                 PointH out[2]) {
  double xs[2], ys[2];
  int n;
  if (a.is_line && b.is_line) n = line_line_point(a, b, xs, ys);
  else if (a.is_line) n = circle_line_points(b, a, xs, ys);
  else if (b.is_line) n = circle_line_points(a, b, xs, ys);
  else n = circle_circle_points(a, b, xs, ys);
  int kept = 0;
  for (int i = 0; i < n; ++i)
    if (ys[i] > 1e-300) out[kept++] = PointH(xs[i], ys[i]);
  return kept;
}

}  // namespace detail

enum class ArcKind { Core, BoundaryA, BoundaryB };

// A connected piece of the target's core geodesic or collar boundary inside
// the fundamental polygon, carrying the conjugator back to the normalized
// frame (axis vertical, designated half-collar on the right).
struct Arc {
  ArcKind kind;
  std::optional<BoundaryGeodesic> line;  // core arcs: the lift geodesic
  GeneralizedCircle circle;              // geometry used for intersection tests
  double lo = 0.0;                       // core: own-line parameter; boundary: ray tau
  double hi = 0.0;
  MobiusMap to_normal = MobiusMap::identity();  // polygon coords -> normalized coords
  MobiusMap group_elt = MobiusMap::identity();  // lift = group_elt(normalized lift)
  double length = 0.0;
};

struct ArcTable {
  GeodesicTarget target;
  std::optional<CollarSpec> collar;  // engaged when built with r > 0
  std::vector<Arc> core;
  std::vector<Arc> boundary;

  double core_length_sum() const {
    double s = 0;
    for (const auto& a : core) s += a.length;
    return s;
  }
  double boundary_length_sum(ArcKind kind) const {
    double s = 0;
    for (const auto& a : boundary)
      if (a.kind == kind) s += a.length;
    return s;
  }
};

namespace detail {

struct CurveTracer {
  const SurfaceSpec& spec;
  const GeodesicTarget& target;
  const std::optional<CollarSpec>& collar;

  // Normalized-frame position of a polygon point p under conjugator c.
  // For the core curve the coordinate is log(im), for boundary rays log|z|.
  static double core_coord(const PointH& p) { return std::log(p.im); }
  static double ray_coord(const PointH& p) { return 0.5 * std::log(p.re * p.re + p.im * p.im); }

  // Trace one closed curve (core geodesic or a boundary ray) through the
  // tiling. `right_side`: which boundary ray; ignored for the core.
  std::vector<Arc> trace_curve(ArcKind kind) {
    const bool is_core = kind == ArcKind::Core;
    const bool right = kind != ArcKind::BoundaryB;
    const double period = target.length;  // normalized coordinate advance of one loop

    // Start at a reduced representative of a point of the curve. The seam
    // logic needs a strictly interior start, and a fixed seed can reduce onto
    // the polygon boundary, so low-discrepancy offsets along the curve are
    // tried until the representative clears every side.
    const MobiusMap n_inv = target.normalizer.inverse();
    PointH start(0.0, 1.0);
    MobiusMap conj = MobiusMap::identity();  // current coords -> normalized
    bool seeded = false;
    for (int k = 0; k < 64 && !seeded; ++k) {
      const double off = period * std::fmod(0.381966011250105 * k, 1.0);
      const PointH seed = is_core ? n_inv(PointH(0.0, std::exp(off)))
                                  : n_inv(collar->ray_point(std::exp(off), right));
      const auto [cand, g0] = spec.reduce(seed);
      bool interior = true;
      for (const auto& s : spec.sides()) interior = interior && spec.inside_side(cand, s, -1e-6);
      if (!interior) continue;
      start = cand;
      conj = target.normalizer * g0.inverse();
      seeded = true;
    }
    if (!seeded) throw ArcBuildError("arc table: no interior seed representative found");

    std::vector<Arc> arcs;
    PointH cur = start;
    double advanced = 0.0;
    const int max_steps = 100000;
    for (int step = 0; step < max_steps; ++step) {
      // Current lift of the curve in polygon coordinates.
      const MobiusMap c_inv = conj.inverse();
      const BoundaryPoint u = c_inv(BoundaryPoint(0.0));
      const BoundaryPoint v = c_inv(BoundaryPoint::infinity());
      std::optional<BoundaryGeodesic> lift_line;
      GeneralizedCircle lift;
      if (is_core) {
        lift_line.emplace(u, v);
        lift = GeneralizedCircle::of_geodesic(*lift_line);
      } else {
        const double tau_ref = std::exp(ray_coord(conj(cur)));
        const PointH w = c_inv(collar->ray_point(tau_ref, right));
        if (u.is_infinity())
          lift = GeneralizedCircle::line_through(v.value(), 0.0, w.re, w.im);
        else if (v.is_infinity())
          lift = GeneralizedCircle::line_through(u.value(), 0.0, w.re, w.im);
        else
          lift = GeneralizedCircle::through(u.value(), 0.0, v.value(), 0.0, w.re, w.im);
      }

      const double s_cur = is_core ? core_coord(conj(cur)) : ray_coord(conj(cur));

      // Earliest exit through a polygon side, in normalized coordinates.
      int exit_side = -1;
      double s_exit = 0.0;
      PointH exit_point(0, 1);
      for (int i = 0; i < static_cast<int>(spec.sides().size()); ++i) {
        const GeneralizedCircle side = GeneralizedCircle::of_geodesic(spec.sides()[i].geo);
        PointH pts[2] = {PointH(0, 1), PointH(0, 1)};
        const int n = intersect_generalized(lift, side, pts);
        for (int j = 0; j < n; ++j) {
          const PointH mapped = conj(pts[j]);
          const double s = is_core ? core_coord(mapped) : ray_coord(mapped);
          if (s <= s_cur + 1e-12) continue;
          if (exit_side < 0 || s < s_exit) {
            exit_side = i;
            s_exit = s;
            exit_point = pts[j];
          }
        }
      }
      if (exit_side < 0)
        throw ArcBuildError("arc table: curve failed to exit the polygon");

      const bool final_piece = advanced + (s_exit - s_cur) >= period - 1e-12;
      double s_end = s_exit;
      PointH end_point = exit_point;
      if (final_piece) {
        s_end = s_cur + (period - advanced);
        const double t_norm = s_end;  // normalized coordinate of the closure point
        const PointH normal_pt = is_core
                                     ? PointH(0.0, std::exp(t_norm))
                                     : collar->ray_point(std::exp(t_norm), right);
        end_point = conj.inverse()(normal_pt);
      }

      Arc arc;
      arc.kind = kind;
      arc.line = lift_line;
      arc.circle = lift;
      arc.to_normal = conj;
      arc.group_elt = conj.inverse() * target.normalizer;
      if (is_core) {
        arc.lo = param_at_point(*lift_line, cur, 1e-6);
        arc.hi = param_at_point(*lift_line, end_point, 1e-6);
        if (arc.lo > arc.hi) std::swap(arc.lo, arc.hi);
        arc.length = s_end - s_cur;
      } else {
        arc.lo = std::exp(s_cur);  // ray tau range
        arc.hi = std::exp(s_end);
        arc.length = collar->cosh_r() * (s_end - s_cur);
      }
      arcs.push_back(arc);
      advanced += s_end - s_cur;

      if (final_piece) {
        if (hyp_dist(end_point, start) > 1e-6)
          throw ArcBuildError("arc table: traced curve failed to close up");
        merge_seam(arcs, is_core);
        return arcs;
      }

      // Cross into the neighboring cell.
      const MobiusMap& g = spec.sides()[exit_side].pairing;
      cur = g(exit_point);
      conj = conj * g.inverse();
    }
    throw ArcBuildError("arc table: step limit exceeded");
  }

  // The first and last traced pieces are halves of one quotient arc whenever
  // the seam (the seed point) is interior; glue them.
  static void merge_seam(std::vector<Arc>& arcs, bool is_core) {
    if (arcs.size() < 2) return;
    Arc& first = arcs.front();
    Arc& last = arcs.back();
    if (is_core) {
      if (!first.line || !last.line) return;
      if (!(first.line->x.approx_eq(last.line->x) && first.line->y.approx_eq(last.line->y)))
        return;
      first.lo = first.lo - (last.hi - last.lo);
      first.length += last.length;
    } else {
      // Same geometric lift iff the circles agree.
      const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(a)); };
      if (first.circle.is_line != last.circle.is_line) return;
      if (!first.circle.is_line &&
          !(close(first.circle.cx, last.circle.cx) && close(first.circle.cy, last.circle.cy) &&
            close(first.circle.radius, last.circle.radius)))
        return;
      first.lo = first.lo / (last.hi / last.lo);
      first.length += last.length;
    }
    arcs.pop_back();
  }
};

}  // namespace detail

// Precompute the arcs of the target's core geodesic (and, when r > 0, of both
// collar boundary curves) inside the fundamental polygon by tracing each
// closed curve through the tiling until it closes up. The closure check makes
// the construction exhaustive by itself.
inline ArcTable build_arc_table(const SurfaceSpec& spec, const GeodesicTarget& target,
                                double r = 0.0) {
  ArcTable table;
  table.target = target;
  if (r > 0.0) {
    if (r >= max_collar_width(target.length))
      throw WidthExceedsEmbedding("build_arc_table: r >= embedding bound");
    table.collar = collar_from_width(target.length, r);
  }
  detail::CurveTracer tracer{spec, target, table.collar};
  table.core = tracer.trace_curve(ArcKind::Core);
  if (table.collar) {
    auto a = tracer.trace_curve(ArcKind::BoundaryA);
    auto b = tracer.trace_curve(ArcKind::BoundaryB);
    table.boundary = std::move(a);
    table.boundary.insert(table.boundary.end(), b.begin(), b.end());
  }
  return table;
}

}  // namespace hypflow
