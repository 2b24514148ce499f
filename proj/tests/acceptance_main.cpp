// Acceptance suite: runs every top-level requirement at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "hypflow/hypflow.hpp"

using namespace hypflow;

namespace {

int failures = 0;

double now_seconds() {
  static const auto t0 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& what) {
  std::printf("CRITERION %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// --- criterion 1: core-section measure by quadrature ------------------------

void criterion_1() {
  const double lens[4] = {0.5, 1.0, 2.0, 2.0 * std::acosh(1.5)};
  bool pass = true;
  std::string detail;
  for (double len : lens) {
    const double t0 = now_seconds();
    bool ok = false;
    const ordered_json j = verify_measure_report(len, 0.0, 2.0 * M_PI, 0.1, 1e-8, &ok);
    const double dt = now_seconds() - t0;
    const double rel = j["core_section"]["rel_error"].get<double>();
    pass = pass && ok && rel <= 1e-8 && dt < 1.0;
    detail += fmt("len=%.4f rel=%.2e %.2fs; ", len, rel, dt);
  }
  report(1, pass, "core-section quadrature vs closed form (tol 1e-8, <1s each): " + detail);
}

// --- criterion 2: boundary-section pieces on both branch orderings ----------

void criterion_2() {
  const double t0 = now_seconds();
  Rng rng(0xACCE5501ULL);
  int small_branch = 0, large_branch = 0, n_pairs = 0;
  double worst_piece = 0.0, worst_sum = 0.0;
  bool pass = true;
  while (n_pairs < 10) {
    const double len = rng.uniform(0.5, 2.6);
    const double rmax = max_collar_width(len);
    const double r = rng.uniform(0.2, 0.9) * rmax;
    const CollarSpec c = collar_from_width(len, r);
    // keep both orderings represented
    const bool small = c.zeta * c.a < (1.0 + c.b) / c.a;
    if (small && small_branch >= 7) continue;
    if (!small && large_branch >= 7) continue;
    const MeasureConstants consts{2.0 * M_PI, 0.25 * (rmax - r)};
    SectionMeasureReport rep;
    try {
      rep = collar_section_measures(c, consts);
    } catch (const BranchBoundaryDegenerate&) {
      continue;
    }
    ++n_pairs;
    (small ? small_branch : large_branch)++;
    for (const auto& p : *rep.pieces) worst_piece = std::max(worst_piece, p.rel_error);
    worst_sum = std::max(worst_sum, rep.rel_error);
  }
  const double dt = now_seconds() - t0;
  pass = worst_piece <= 1e-8 && worst_sum <= 1e-8 && small_branch >= 3 && large_branch >= 3 &&
         dt < 10.0;
  report(2, pass,
         fmt("piecewise quadrature on 10 (len,r) pairs (%d/%d per branch): worst piece "
             "rel=%.2e, worst sum rel=%.2e, %.1fs",
             small_branch, large_branch, worst_piece, worst_sum, dt));
}

// --- criterion 3: derived identities and the reflection symmetry ------------

void criterion_3() {
  const double len = 2.0 * std::acosh(1.5);
  const double rmax = max_collar_width(len);
  const CollarSpec c = collar_from_width(len, 0.4 * rmax);
  const MeasureConstants consts{2.0 * M_PI, 0.1 * rmax};
  const DerivedSections d = derived_section_measures(c, consts);

  const double direct_j0 =
      consts.epsilon * len * c.cosh_r() / (M_PI * consts.area_s);
  const bool closed_ok =
      d.j0_closed == 2.0 * d.j1_closed + d.j3_closed &&
      std::abs(d.j0_closed - direct_j0) <= 1e-14 * direct_j0;
  const double rel0 = std::abs(d.j0_numeric - d.j0_closed) / d.j0_closed;
  const double rel1 = std::abs(d.j1_numeric - d.j1_closed) / d.j1_closed;
  const double rel3 = std::abs(d.j3_numeric - d.j3_closed) / d.j3_closed;

  const SymmetryCheckResult sym = symmetry_check(c, 10000, 0xACCE5503ULL);
  const bool pass = closed_ok && rel0 <= 1e-8 && rel1 <= 1e-8 && rel3 <= 1e-8 &&
                    sym.samples == 10000 && sym.failures == 0;
  report(3, pass,
         fmt("section decomposition: closed identity %s, numeric rel=(%.1e, %.1e, %.1e), "
             "reflection symmetry %d/%d",
             closed_ok ? "exact" : "VIOLATED", rel0, rel1, rel3,
             sym.samples - sym.failures, sym.samples));
}

// --- criteria 4/5/7 share one full-budget run --------------------------------

StatsReport main_run;

void criteria_4_5_7() {
  ExperimentConfig cfg;
  cfg.target_word = "A";
  cfg.side = "both";
  cfg.r_fraction = 0.4;
  cfg.time_horizon = 20000.0;
  cfg.n_traj = 64;
  cfg.seed = 20260808;
  const double t0 = now_seconds();
  main_run = run_experiment(cfg);
  const double dt = now_seconds() - t0;

  const StatsReport& r = main_run;
  report(4, r.crossing_total.rel_error <= 0.03 && dt < 300.0,
         fmt("closed-geodesic crossing rate %.6f vs %.6f (rel %.4f), %.0fs",
             r.crossing_total.value, r.crossing_total.theory, r.crossing_total.rel_error, dt));

  const bool pass5 = r.n0[0].rel_error <= 0.03 && r.n1[0].rel_error <= 0.05;
  report(5, pass5,
         fmt("boundary entry rates: n0_A %.6f vs %.6f (rel %.4f), n1_A %.6f vs %.6f (rel %.4f)",
             r.n0[0].value, r.n0[0].theory, r.n0[0].rel_error, r.n1[0].value, r.n1[0].theory,
             r.n1[0].rel_error));

  report(7, r.gap_all.rel_error <= 0.03,
         fmt("mean gap between crossings %.4f vs %.4f (rel %.4f)", r.gap_all.value,
             r.gap_all.theory, r.gap_all.rel_error));
}

// --- criterion 6: mean excursion length at three widths ----------------------

void criterion_6() {
  bool pass = true;
  std::string detail;
  for (double frac : {0.2, 0.4, 0.6}) {
    StatsReport rep;
    if (frac == 0.4) {
      rep = main_run;
    } else {
      ExperimentConfig cfg;
      cfg.side = "both";
      cfg.r_fraction = frac;
      cfg.time_horizon = 10000.0;
      cfg.n_traj = 64;
      cfg.seed = 20260808 + static_cast<std::uint64_t>(frac * 100);
      rep = run_experiment(cfg);
    }
    const bool ok = rep.mean_len[0].rel_error <= 0.03;
    pass = pass && ok;
    detail += fmt("r=%.2fR: mean %.4f vs 2*pi*tanh(r)=%.4f (rel %.3f, occupation/entry %.4f); ",
                  frac, rep.mean_len[0].value, rep.mean_len[0].theory,
                  rep.mean_len[0].rel_error, rep.occupation_per_entry[0]);
  }
  report(6, pass, "mean collar excursion length at three widths: " + detail);
}

// --- criterion 8: depth distribution -----------------------------------------

void criterion_8() {
  ExperimentConfig cfg;
  cfg.side = "both";
  cfg.r_fraction = 0.8;
  cfg.r0_fraction = 0.8;
  cfg.time_horizon = 4000.0;
  cfg.n_traj = 64;
  cfg.seed = 20260888;
  cfg.depth_grid = 20;
  const StatsReport rep = run_experiment(cfg);
  const bool pass = rep.depth.samples >= 10000 && rep.depth.sup_distance <= 0.02;
  report(8, pass,
         fmt("depth CDF on 20 grid points: sup distance %.4f (tol 0.02), %ld samples",
             rep.depth.sup_distance, rep.depth.samples));
}

// --- criterion 9: property battery -------------------------------------------

double axis_dist_minimized(const PointH& p) {
  double lo = std::log(p.im) - 6.0, hi = std::log(p.im) + 6.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    if (hyp_dist(p, PointH(0, std::exp(m1))) < hyp_dist(p, PointH(0, std::exp(m2)))) hi = m2;
    else lo = m1;
  }
  return hyp_dist(p, PointH(0, std::exp(0.5 * (lo + hi))));
}

struct StructuralChecker {
  const SurfaceSpec* spec;
  double prev_time = -1.0;
  int inside = -1;
  long events = 0;
  long violations = 0;
  double max_endpoint = 0.0;

  void operator()(const Event& e, const FlowState& st) {
    ++events;
    if (!(e.time > prev_time)) ++violations;
    prev_time = e.time;
    if (e.kind == EventKind::CollarEnter) {
      if (inside == 1) ++violations;
      inside = 1;
    } else if (e.kind == EventKind::CollarExit) {
      if (inside == 0) ++violations;
      inside = 0;
    } else if (e.kind == EventKind::CoreCross) {
      if (inside == 0) ++violations;
    }
    if (events % 64 == 0 && !spec->contains(point_at(st.line), 1e-6)) ++violations;
    for (const BoundaryPoint* bp : {&st.line.line.x, &st.line.line.y})
      if (!bp->is_infinity() && std::isfinite(bp->value()))
        max_endpoint = std::max(max_endpoint, std::abs(bp->value()));
  }
};

void criterion_9() {
  bool pass = true;
  std::string detail;
  Rng rng(0xACCE5509ULL);

  // Isometry invariance of the metric under random group words.
  {
    const SurfaceSpec spec = preset("punctured-torus");
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const PointH p(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
      const PointH q(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
      const std::string words[4] = {"A", "BA", "aB", "AbA"};
      const MobiusMap m = spec.word_map(words[rng.bits() % 4]);
      worst = std::max(worst, std::abs(hyp_dist(m(p), m(q)) - hyp_dist(p, q)));
    }
    pass = pass && worst <= 1e-9;
    detail += fmt("isometry dev %.1e; ", worst);
  }

  // Tangency identity x*y = t^2 and depth against independent minimization.
  {
    double worst_alg = 0.0, worst_depth = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double len = rng.uniform(0.4, 3.0);
      const CollarSpec c = collar_from_width(len, rng.uniform(0.1, 0.9) * max_collar_width(len));
      const double t = rng.uniform(0.3, 3.0);
      const auto [x, y] = tangent_endpoints(t, c);
      worst_alg = std::max(worst_alg, std::abs(x * y - t * t) / (t * t));
      const BoundaryGeodesic g(x, y);
      double lo = -20, hi = 20;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 260; ++it) {
        const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        if (dist_to_imaginary_axis(point_at(g, m1)) < dist_to_imaginary_axis(point_at(g, m2)))
          hi = m2;
        else lo = m1;
      }
      const double mind = dist_to_imaginary_axis(point_at(g, 0.5 * (lo + hi)));
      worst_depth = std::max(worst_depth, std::abs(depth_to_axis(g) - mind));
    }
    const PointH probe(1.3, 0.7);
    const double oracle_dev =
        std::abs(dist_to_imaginary_axis(probe) - axis_dist_minimized(probe));
    pass = pass && worst_alg <= 1e-12 && worst_depth <= 1e-9 && oracle_dev <= 1e-9;
    detail += fmt("tangency %.1e, depth-vs-min %.1e; ", worst_alg, worst_depth);
  }

  // Arc tiling sums.
  {
    const SurfaceSpec spec = preset("punctured-torus");
    const GeodesicTarget t = target_from_word(spec, "A", HalfSide::A);
    const double r = 0.4 * max_collar_width(t.length);
    const ArcTable table = build_arc_table(spec, t, r);
    const double dev_core = std::abs(table.core_length_sum() - t.length);
    const double expect = t.length * table.collar->cosh_r();
    const double dev_a = std::abs(table.boundary_length_sum(ArcKind::BoundaryA) - expect);
    const double dev_b = std::abs(table.boundary_length_sum(ArcKind::BoundaryB) - expect);
    pass = pass && dev_core <= 1e-6 && dev_a <= 1e-6 && dev_b <= 1e-6;
    detail += fmt("arc tiling dev (%.1e, %.1e, %.1e); ", dev_core, dev_a, dev_b);
  }

  // Structural checks over at least 1e6 events.
  {
    const SurfaceSpec spec = preset("punctured-torus");
    const GeodesicTarget t = target_from_word(spec, "A", HalfSide::A);
    const ArcTable table = build_arc_table(spec, t, 0.4 * max_collar_width(t.length));
    const InitialSampler sampler(spec, 10.0);
    long events = 0, violations = 0;
    double max_endpoint = 0.0;
    std::uint64_t seed = 0xACCE55AAULL;
    while (events < 1000000) {
      Rng lrng(seed++);
      StructuralChecker checker{&spec};
      try {
        trace(spec, {&table}, sampler.sample(lrng), 100000.0, checker);
      } catch (const DegenerateHit&) {
        continue;
      }
      events += checker.events;
      violations += checker.violations;
      max_endpoint = std::max(max_endpoint, checker.max_endpoint);
    }
    pass = pass && violations == 0 && max_endpoint < 1e9;
    detail += fmt("structural: %ld events, %ld violations, max endpoint %.1e; ", events,
                  violations, max_endpoint);
  }

  // Entry-class/crossing consistency and excursion alternation across the
  // full-budget run of criteria 4/5/7 (millions of events).
  {
    pass = pass && main_run.class_mismatches == 0 && main_run.structural_violations == 0;
    detail += fmt("class consistency: %ld mismatches, %ld alternation violations over %ld events; ",
                  main_run.class_mismatches, main_run.structural_violations,
                  main_run.events_total);
  }

  // Determinism: byte-identical reports.
  {
    ExperimentConfig cfg;
    cfg.time_horizon = 300.0;
    cfg.n_traj = 8;
    cfg.seed = 555;
    const std::string a = to_json(run_experiment(cfg)).dump(2);
    const std::string b = to_json(run_experiment(cfg)).dump(2);
    pass = pass && a == b;
    detail += fmt("determinism %s", a == b ? "byte-identical" : "MISMATCH");
  }

  report(9, pass, "property battery: " + detail);
}

}  // namespace

int main() {
  now_seconds();
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_5_7();
  criterion_6();
  criterion_8();
  criterion_9();
  std::printf("ACCEPTANCE: %d criterion(s) failed, total runtime %.0fs\n", failures,
              now_seconds());
  return failures;
}
