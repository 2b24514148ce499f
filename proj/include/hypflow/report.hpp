#pragma once

#include <string>

#include "json.hpp"
#include "hypflow/measure.hpp"
#include "hypflow/stats.hpp"

namespace hypflow {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const RateStat& s) {
  return ordered_json{{"value", s.value},
                      {"std_err", s.std_err},
                      {"theory", s.theory},
                      {"rel_error", s.rel_error}};
}

inline ordered_json to_json(const DepthTable& t) {
  return ordered_json{{"r0", t.r0},          {"samples", t.samples},
                      {"grid", t.grid},      {"empirical", t.empirical},
                      {"theory", t.theory},  {"sup_distance", t.sup_distance}};
}

inline ordered_json to_json(const StatsReport& r) {
  ordered_json j;
  j["config"] = ordered_json{{"preset", r.config.preset_name},
                             {"surface_file", r.config.surface_file},
                             {"target", r.config.target_word},
                             {"side", r.config.side},
                             {"r_fraction", r.config.r_fraction},
                             {"r0_fraction", r.config.r0_fraction},
                             {"time", r.config.time_horizon},
                             {"trajectories", r.config.n_traj},
                             {"seed", r.config.seed},
                             {"depth_grid", r.config.depth_grid},
                             {"truncation_height", r.config.truncation_height}};
  j["surface"] = ordered_json{{"name", r.surface_name}, {"area", r.area_s}};
  j["target"] = ordered_json{{"word", r.config.target_word},
                             {"length", r.length},
                             {"max_width", r.r_embed},
                             {"r", r.r},
                             {"r0", r.r0}};
  j["crossings"] = ordered_json{{"total", to_json(r.crossing_total)},
                                {"into_A", to_json(r.crossing_into[0])},
                                {"into_B", to_json(r.crossing_into[1])}};
  j["entries"] = ordered_json{{"A", ordered_json{{"n0", to_json(r.n0[0])},
                                                 {"n1", to_json(r.n1[0])},
                                                 {"mean_length", to_json(r.mean_len[0])}}},
                              {"B", ordered_json{{"n0", to_json(r.n0[1])},
                                                 {"n1", to_json(r.n1[1])},
                                                 {"mean_length", to_json(r.mean_len[1])}}}};
  j["occupation"] = ordered_json{{"fraction", r.occupation_fraction},
                                 {"theory", r.occupation_theory},
                                 {"per_entry_A", r.occupation_per_entry[0]},
                                 {"per_entry_B", r.occupation_per_entry[1]}};
  j["gaps"] = ordered_json{{"all", to_json(r.gap_all)},
                           {"into_A", to_json(r.gap_into[0])},
                           {"into_B", to_json(r.gap_into[1])}};
  j["depth_cdf"] = to_json(r.depth);
  j["counts"] = ordered_json{{"events", r.events_total},
                             {"side_crossings", r.side_crossings},
                             {"resampled_trajectories", r.resampled},
                             {"structural_violations", r.structural_violations},
                             {"class_mismatches", r.class_mismatches}};
  return j;
}

inline const char* to_string(ZetaBranch b) {
  return b == ZetaBranch::ZetaASmall ? "zeta-a-small" : "zeta-a-large";
}

inline ordered_json to_json(const SectionMeasureReport& r) {
  ordered_json j{{"numeric", r.numeric},
                 {"closed_form", r.closed_form},
                 {"rel_error", r.rel_error}};
  if (r.pieces) {
    j["branch"] = to_string(r.branch);
    ordered_json pieces = ordered_json::array();
    int idx = 1;
    for (const auto& p : *r.pieces) {
      pieces.push_back(ordered_json{{"piece", "m" + std::to_string(idx++)},
                                    {"x_lo", p.x_lo},
                                    {"x_hi", p.x_hi},
                                    {"numeric", p.numeric},
                                    {"closed_form", p.closed_form},
                                    {"rel_error", p.rel_error}});
    }
    j["pieces"] = pieces;
  }
  return j;
}

// Full verification bundle used by the `verify-measure` subcommand: the core
// section always, plus the collar pieces, derived identities and the
// reflection check when a width is given. `ok` reflects the tolerance.
inline ordered_json verify_measure_report(double length, double r, double area_s,
                                          double epsilon, double tolerance, bool* ok) {
  const MeasureConstants consts{area_s, epsilon};
  ordered_json j;
  *ok = true;
  const SectionMeasureReport core = thick_section_measure(length, consts);
  j["core_section"] = to_json(core);
  *ok = *ok && core.rel_error <= tolerance;
  if (r > 0.0) {
    const CollarSpec spec = collar_from_width(length, r);
    const SectionMeasureReport col = collar_section_measures(spec, consts);
    j["boundary_section"] = to_json(col);
    *ok = *ok && col.rel_error <= tolerance;
    if (col.pieces)
      for (const auto& p : *col.pieces) *ok = *ok && p.rel_error <= tolerance;

    const DerivedSections d = derived_section_measures(spec, consts);
    const double exact_residual = std::abs(d.j0_closed - 2.0 * d.j1_closed - d.j3_closed);
    j["derived"] = ordered_json{
        {"j0_closed", d.j0_closed},       {"j1_closed", d.j1_closed},
        {"j3_closed", d.j3_closed},       {"j0_numeric", d.j0_numeric},
        {"j1_numeric", d.j1_numeric},     {"j3_numeric", d.j3_numeric},
        {"identity_residual", exact_residual},
        {"j0_rel_error", std::abs(d.j0_numeric - d.j0_closed) / d.j0_closed},
        {"j1_rel_error", std::abs(d.j1_numeric - d.j1_closed) / d.j1_closed},
        {"j3_rel_error", std::abs(d.j3_numeric - d.j3_closed) / d.j3_closed}};
    *ok = *ok && exact_residual == 0.0 &&
          std::abs(d.j0_numeric - d.j0_closed) / d.j0_closed <= tolerance &&
          std::abs(d.j1_numeric - d.j1_closed) / d.j1_closed <= tolerance &&
          std::abs(d.j3_numeric - d.j3_closed) / d.j3_closed <= tolerance;

    const SymmetryCheckResult sym = symmetry_check(spec);
    j["reflection_symmetry"] =
        ordered_json{{"samples", sym.samples}, {"failures", sym.failures}};
    *ok = *ok && sym.passed();
  }
  j["tolerance"] = tolerance;
  j["ok"] = *ok;
  return j;
}

}  // namespace hypflow
