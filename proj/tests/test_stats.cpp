#include <cmath>

#include "doctest.h"
#include "hypflow/report.hpp"
#include "hypflow/rng.hpp"
#include "hypflow/stats.hpp"
#include <sstream>

using namespace hypflow;

TEST_CASE("initial sampler: support and truncation") {
  const SurfaceSpec spec = preset("punctured-torus");
  const InitialSampler sampler(spec, 10.0);
  Rng rng(8);
  for (int k = 0; k < 100000; ++k) {
    const TangentVector v = sampler.sample(rng);
    if (k % 100 == 0) CHECK(spec.contains(v.base, 1e-12));
    CHECK(v.base.im <= 10.0);
    CHECK(v.base.im >= sampler.floor_height(v.base.re) - 1e-12);
    CHECK(v.angle >= 0.0);
    CHECK(v.angle < 2.0 * M_PI);
  }
}

TEST_CASE("initial sampler: two-cell chi-square against quadrature areas") {
  const SurfaceSpec spec = preset("punctured-torus");
  const double Y = 10.0;
  const InitialSampler sampler(spec, Y);

  // Hyperbolic area of the polygon slab {im > h} for h above the floor arcs
  // is width * (1/h - 1/Y); total truncated area is 2 pi - width/Y.
  const double h = 1.0;
  const double width = 2.0;
  const double area_above = width * (1.0 / h - 1.0 / Y);
  const double area_total = 2.0 * M_PI - width / Y;
  const double p = area_above / area_total;

  Rng rng(19);
  const int n = 200000;
  long above = 0;
  for (int k = 0; k < n; ++k)
    if (sampler.sample(rng).base.im > h) ++above;
  const double expect = n * p;
  const double chi2 = (above - expect) * (above - expect) / expect +
                      (above - expect) * (above - expect) / (n - expect);
  CHECK(chi2 < 6.635);  // 1 dof at p = 0.01
}

TEST_CASE("initial sampler: identical seeds give identical streams") {
  const SurfaceSpec spec = preset("punctured-torus");
  const InitialSampler sampler(spec, 10.0);
  Rng r1(123), r2(123);
  for (int k = 0; k < 1000; ++k) {
    const TangentVector a = sampler.sample(r1);
    const TangentVector b = sampler.sample(r2);
    CHECK(a.base.re == b.base.re);
    CHECK(a.base.im == b.base.im);
    CHECK(a.angle == b.angle);
  }
}

TEST_CASE("depth distribution table") {
  std::vector<double> depths{0.0, 0.0, 0.1, 0.2, 0.35, 0.5};
  const DepthTable t = depth_distribution(depths, 0.5, 5);
  CHECK(t.empirical.back() == 1.0);
  for (std::size_t i = 1; i < t.empirical.size(); ++i)
    CHECK(t.empirical[i] >= t.empirical[i - 1]);
  CHECK(t.theory.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(depth_distribution({}, 0.5, 5), EmptySample);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig bad;
  bad.r_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ExperimentConfig{};
  bad.side = "C";
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ExperimentConfig{};
  bad.n_traj = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.time_horizon = 400.0;
  cfg.n_traj = 12;
  cfg.seed = 31415;
  return cfg;
}

}  // namespace

TEST_CASE("run_experiment: deterministic byte-identical reports") {
  const ExperimentConfig cfg = small_config();
  const StatsReport a = run_experiment(cfg);
  const StatsReport b = run_experiment(cfg);
  CHECK(to_json(a).dump(2) == to_json(b).dump(2));
  CHECK(a.structural_violations == 0);
  CHECK(a.class_mismatches == 0);
}

TEST_CASE("run_experiment: small-budget rates land near theory") {
  ExperimentConfig cfg = small_config();
  cfg.time_horizon = 1500.0;
  cfg.n_traj = 16;
  const StatsReport rep = run_experiment(cfg);
  // Generous bands: this is a smoke test, the acceptance suite runs the
  // full-budget comparisons.
  CHECK(rep.crossing_total.rel_error < 0.10);
  CHECK(rep.n0[0].rel_error < 0.10);
  CHECK(rep.occupation_fraction ==
        doctest::Approx(rep.occupation_theory).epsilon(0.15));
  CHECK(rep.depth.samples > 100);
  CHECK(rep.events_total > 10000);
  CHECK(rep.resampled <= 1);

  // Side symmetry within 3 combined standard errors.
  const double diff = std::abs(rep.n0[0].value - rep.n0[1].value);
  CHECK(diff <= 3.0 * (rep.n0[0].std_err + rep.n0[1].std_err) + 1e-12);

  // Crossing bookkeeping: every crossing comes from exactly one side.
  CHECK(rep.crossing_total.value ==
        doctest::Approx(rep.crossing_into[0].value + rep.crossing_into[1].value));

  // Entry decomposition: entries either return through their boundary or
  // cross the core (pointing into the far side); only horizon truncation can
  // break the count, by at most a couple of events per trajectory.
  const double slack = 4.0 / cfg.time_horizon;
  CHECK(std::abs(rep.n0[0].value - (rep.n1[0].value + rep.crossing_into[1].value)) <= slack);
  CHECK(std::abs(rep.n0[1].value - (rep.n1[1].value + rep.crossing_into[0].value)) <= slack);
}

TEST_CASE("run_experiment: separate depth width") {
  ExperimentConfig cfg = small_config();
  cfg.time_horizon = 600.0;
  cfg.r_fraction = 0.4;
  cfg.r0_fraction = 0.8;
  const StatsReport rep = run_experiment(cfg);
  CHECK(rep.r0 == doctest::Approx(0.8 * rep.r_embed));
  CHECK(rep.r == doctest::Approx(0.4 * rep.r_embed));
  CHECK(rep.depth.samples > 50);
  CHECK(rep.depth.empirical.back() == 1.0);
  // Depths never exceed the instrumented width.
  CHECK(rep.depth.grid.back() == doctest::Approx(rep.r0));
}

TEST_CASE("crossing rate on a second surface (level-2 congruence quotient)") {
  // Thrice-punctured sphere: same ideal quadrilateral, different pairings,
  // parabolic generators. Its closed geodesics are non-simple, so only the
  // core crossings are instrumented (no collar).
  const std::string text =
      "surface three-punctures\n"
      "generator A 1 2 0 1\n"
      "generator B 1 0 2 1\n"
      "vertices -1 0 1 inf\n"
      "pairing 0 1 B\n"
      "pairing 1 0 b\n"
      "pairing 2 3 a\n"
      "pairing 3 2 A\n"
      "area 6.283185307179586\n";
  std::istringstream in(text);
  const SurfaceSpec spec = load_surface(in, "<gamma2>");
  const GeodesicTarget t = target_from_word(spec, "AB", HalfSide::A);
  CHECK(t.length == doctest::Approx(2.0 * std::acosh(3.0)).epsilon(1e-12));

  const ArcTable table = build_arc_table(spec, t, 0.0);  // core only
  CHECK(std::abs(table.core_length_sum() - t.length) < 1e-9);

  const InitialSampler sampler(spec, 10.0);
  const double T = 1000.0;
  const int n = 24;
  long crossings = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(mix_seed(777, i));
    trace(spec, {&table}, sampler.sample(rng), T, [&](const Event& e) {
      if (e.kind == EventKind::CoreCross) ++crossings;
    });
  }
  const double rate = static_cast<double>(crossings) / (T * n);
  const double theory = 2.0 * t.length / (M_PI * spec.area());
  CHECK(rate == doctest::Approx(theory).epsilon(0.05));
}

TEST_CASE("trace survives starts deep in a bottom cusp horn") {
  const SurfaceSpec spec = preset("punctured-torus");
  const GeodesicTarget t = target_from_word(spec, "A", HalfSide::A);
  const ArcTable table = build_arc_table(spec, t, 0.3);
  for (double re : {1e-4, -1e-4, 0.99995}) {
    const double im = 1.5 * std::sqrt(0.25 - (std::abs(re) - 0.5) * (std::abs(re) - 0.5));
    REQUIRE(spec.contains(PointH(re, im)));
    long events = 0;
    double prev = -1.0;
    bool ordered = true;
    trace(spec, {&table}, TangentVector{PointH(re, im), 0.7}, 100.0, [&](const Event& e) {
      ++events;
      ordered = ordered && e.time > prev;
      prev = e.time;
    });
    CHECK(events > 100);
    CHECK(ordered);
  }
}

TEST_CASE("run_experiment: doubling the horizon shrinks standard errors") {
  ExperimentConfig cfg = small_config();
  cfg.n_traj = 24;
  cfg.time_horizon = 700.0;
  const StatsReport short_run = run_experiment(cfg);
  cfg.time_horizon = 1400.0;
  const StatsReport long_run = run_experiment(cfg);
  const double ratio = short_run.crossing_total.std_err / long_run.crossing_total.std_err;
  CHECK(ratio > 1.2);
  CHECK(ratio < 1.7);
}
