#include <cmath>

#include "doctest.h"
#include "hypflow/measure.hpp"
#include "hypflow/rng.hpp"

using namespace hypflow;

TEST_CASE("adaptive quadrature sanity") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Smooth but sharply peaked; still converges.
  CHECK(integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0) ==
        doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::cos(1e6 * x); }, 0.0, 1.0,
                                     1e-16, 1e-16, 300),
                  QuadratureFailure);
}

TEST_CASE("core section integral equals the geodesic length") {
  for (double len : {0.5, 1.0, 2.0}) {
    const double got = detail::core_section_integral(std::exp(len));
    CHECK(std::abs(got - len) < 1e-10);
  }
}

TEST_CASE("thick section measure matches closed form") {
  const MeasureConstants consts{2.0 * M_PI, 0.05};
  for (double len : {0.5, 1.0, 2.0, 2.0 * std::acosh(1.5)}) {
    const SectionMeasureReport rep = thick_section_measure(len, consts);
    CHECK(rep.closed_form ==
          doctest::Approx(consts.epsilon * len / (M_PI * consts.area_s)).epsilon(1e-15));
    CHECK(rep.rel_error < 1e-8);
  }
  // Shrinking geodesic: measure goes to zero.
  const MeasureConstants small{2.0 * M_PI, 1e-4};
  CHECK(thick_section_measure(1e-3, small).numeric < 1e-7);
  CHECK_THROWS_AS(thick_section_measure(-1.0, consts), NonPositiveLength);
  // epsilon must stay below the embedding width.
  CHECK_THROWS_AS(thick_section_measure(6.0, MeasureConstants{2.0 * M_PI, 0.5}), DomainError);
}

TEST_CASE("collar section pieces and sum, both branch orderings") {
  const MeasureConstants consts{2.0 * M_PI, 0.01};

  auto check_spec = [&](double len, double r, ZetaBranch expected) {
    const CollarSpec c = collar_from_width(len, r);
    const SectionMeasureReport rep = collar_section_measures(c, consts);
    CHECK(rep.branch == expected);
    REQUIRE(rep.pieces.has_value());
    double sum = 0.0;
    for (const auto& p : *rep.pieces) {
      CHECK(p.numeric > 0.0);
      CHECK(p.rel_error < 1e-8);
      sum += p.numeric;
    }
    CHECK(sum == doctest::Approx(rep.numeric));
    const double closed =
        consts.epsilon * (1.0 + c.cosh_r()) * len / (2.0 * M_PI * consts.area_s);
    CHECK(rep.closed_form == doctest::Approx(closed).epsilon(1e-12));
    CHECK(rep.rel_error < 1e-8);
  };

  check_spec(1.0, 0.3, ZetaBranch::ZetaASmall);
  check_spec(2.5, 0.55, ZetaBranch::ZetaALarge);
}

TEST_CASE("collar section: collapsing collar recovers the core measure") {
  const MeasureConstants consts{2.0 * M_PI, 0.001};
  const double len = 1.0;
  const SectionMeasureReport rep =
      collar_section_measures(collar_from_width(len, 1e-6), consts);
  const double core = consts.epsilon * len / (M_PI * consts.area_s);
  CHECK(rep.numeric == doctest::Approx(core).epsilon(1e-5));
}

TEST_CASE("collar section: branch boundary rejected") {
  // Solve zeta * a == (1+b)/a by bisection in r, then hit it exactly.
  const double len = 2.0;
  double lo = 0.01, hi = 0.99 * max_collar_width(len);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const CollarSpec c = collar_from_width(len, mid);
    (c.zeta * c.a < (1.0 + c.b) / c.a ? lo : hi) = mid;
  }
  const CollarSpec c = collar_from_width(len, 0.5 * (lo + hi));
  const MeasureConstants consts{2.0 * M_PI, 0.001};
  CHECK_THROWS_AS(collar_section_measures(c, consts), BranchBoundaryDegenerate);
}

TEST_CASE("derived sections: decomposition identity") {
  const MeasureConstants consts{2.0 * M_PI, 0.01};
  const double len = 2.0 * std::acosh(1.5);
  const CollarSpec c = collar_from_width(len, 0.4 * max_collar_width(len));
  const DerivedSections d = derived_section_measures(c, consts);

  CHECK(d.j0_closed == doctest::Approx(2.0 * d.j1_closed + d.j3_closed).epsilon(1e-15));
  CHECK(d.j3_closed ==
        doctest::Approx(consts.epsilon * len / (M_PI * consts.area_s)).epsilon(1e-15));
  CHECK(d.j1_closed ==
        doctest::Approx(consts.epsilon * (c.cosh_r() - 1.0) * len / (2.0 * M_PI * consts.area_s))
            .epsilon(1e-15));
  CHECK(std::abs(d.j0_numeric - d.j0_closed) / d.j0_closed < 1e-8);
  CHECK(std::abs(d.j1_numeric - d.j1_closed) / d.j1_closed < 1e-8);
  CHECK(std::abs(d.j3_numeric - d.j3_closed) / d.j3_closed < 1e-8);
}

TEST_CASE("derived sections: j1 vanishes with the collar, j3 flat in r") {
  const MeasureConstants consts{2.0 * M_PI, 0.001};
  const double len = 1.3;
  const DerivedSections thin =
      derived_section_measures(collar_from_width(len, 1e-5), consts);
  CHECK(thin.j1_closed < 1e-8);
  CHECK(std::abs(thin.j1_numeric) < 1e-8);

  double prev_j0 = 0.0;
  for (double f : {0.2, 0.4, 0.6, 0.8}) {
    const DerivedSections d =
        derived_section_measures(collar_from_width(len, f * max_collar_width(len)), consts);
    CHECK(std::abs(d.j3_numeric - thin.j3_numeric) / thin.j3_numeric < 1e-8);
    CHECK(d.j0_numeric > prev_j0);  // strictly increasing in r
    prev_j0 = d.j0_numeric;
  }
}

TEST_CASE("measures scale as 1/area_s") {
  const double len = 1.7;
  const CollarSpec c = collar_from_width(len, 0.3);
  const MeasureConstants c1{2.0 * M_PI, 0.01};
  const MeasureConstants c2{4.0 * M_PI, 0.01};
  CHECK(thick_section_measure(len, c1).numeric ==
        doctest::Approx(2.0 * thick_section_measure(len, c2).numeric).epsilon(1e-12));
  CHECK(collar_section_measures(c, c1).numeric ==
        doctest::Approx(2.0 * collar_section_measures(c, c2).numeric).epsilon(1e-12));
}

TEST_CASE("first-intersection semantics") {
  // Sampled section members have their reported hit at the smallest
  // trajectory parameter among all ray crossings.
  Rng rng(53);
  const CollarSpec c = collar_from_width(1.0, 0.35);
  int accepted = 0;
  while (accepted < 2000) {
    const double x = rng.uniform(1e-2, c.zeta * (1.0 + c.b) / c.a);
    const double y = rng.uniform(-8.0, x - 1e-6);
    if (std::abs(y) < 1e-9) continue;
    const auto hit = first_ray_hit(x, y, c);
    if (!hit || hit->first < 1.0 || hit->first > c.zeta) continue;
    ++accepted;
    int n = 0;
    const auto taus = ray_crossings(x, y, c.a, &n);
    const BoundaryGeodesic g(x, y);
    for (int i = 0; i < n; ++i) {
      const double t = param_at_point(g, c.ray_point(taus[i]), 1e-6);
      CHECK(t >= hit->second - 1e-12);
    }
  }
}

TEST_CASE("symmetry check passes") {
  const CollarSpec c = collar_from_width(1.0, 0.35);
  const SymmetryCheckResult res = symmetry_check(c, 2000, 99);
  CHECK(res.samples == 2000);
  CHECK(res.failures == 0);

  // Images of tangency points stay on the tangency family: the reflected
  // endpoints of a tangent pair are again a tangent pair.
  for (double t : {1.2, 1.9}) {
    const auto [x, y] = tangent_endpoints(t, c);
    const double xi = c.zeta / x, yi = c.zeta / y;
    CHECK(xi * yi == doctest::Approx((c.zeta / t) * (c.zeta / t)).epsilon(1e-10));
    CHECK(xi / yi == doctest::Approx((1.0 - c.b) / (1.0 + c.b)).epsilon(1e-10));
  }
}
