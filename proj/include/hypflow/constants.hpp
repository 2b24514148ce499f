#pragma once

#include <cstddef>

// Central tolerance table. Every numeric tolerance used by the library is
// defined here; nothing else hard-codes an epsilon.
namespace hypflow::tol {

// Unit-determinant slack for Mobius maps; larger deviations are renormalized,
// non-positive determinants rejected.
inline constexpr double kDet = 1e-12;

// Geometric predicates in boundary coordinates (point-on-geodesic checks,
// endpoint matching, polygon membership).
inline constexpr double kGeom = 1e-9;

// Round-trip conversions (tangent vector <-> tangent line).
inline constexpr double kRoundTrip = 1e-9;

// Closed-form collar identities (cosh r * cos phi = 1 and friends).
inline constexpr double kCollarIdentity = 1e-12;

// Arc-table tiling sums (total core arc length vs. geodesic length).
inline constexpr double kArcTiling = 1e-6;

// Adaptive quadrature: absolute tolerance on the transformed integrand and
// the evaluation budget per integral.
inline constexpr double kQuadAbs = 1e-13;
inline constexpr double kQuadRel = 1e-11;
inline constexpr std::size_t kQuadBudget = 1'000'000;

// Relative agreement demanded between quadrature and closed forms.
inline constexpr double kMeasureRel = 1e-8;

// Minimum parameter advance between consecutive flow events; hits closer than
// this to the current position are treated as already processed.
inline constexpr double kEventGuard = 1e-9;

// Margin around arc endpoints / polygon vertices inside which a hit is
// declared degenerate and the trajectory abandoned.
inline constexpr double kVertex = 1e-9;

// Point-reduction iteration cap.
inline constexpr std::size_t kReduceMax = 1'000'000;

}  // namespace hypflow::tol
