// Command-line front end: geodesic-flow experiments on hyperbolic surfaces
// and quadrature verification of the section measures.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypflow/hypflow.hpp"

namespace {

using namespace hypflow;

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_path,
                 const std::string& dump_path, const std::string& depth_csv_path,
                 bool check, double tol_rate, double tol_n1) {
  const auto t0 = std::chrono::steady_clock::now();
  StatsReport rep = run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!dump_path.empty()) {
    // Re-run one representative trajectory with full event capture.
    const SurfaceSpec spec = cfg.surface_file.empty() ? preset(cfg.preset_name)
                                                      : load_surface_file(cfg.surface_file);
    const GeodesicTarget target = target_from_word(spec, cfg.target_word, HalfSide::A);
    const double r = cfg.r_fraction * max_collar_width(target.length);
    const ArcTable table = build_arc_table(spec, target, r);
    const InitialSampler sampler(spec, cfg.truncation_height);
    Rng rng(mix_seed(cfg.seed, 0));
    const EventLog log = collect_trace(spec, {&table}, sampler.sample(rng),
                                       std::min(cfg.time_horizon, 2000.0));
    std::ofstream dump(dump_path);
    dump_events(log, {&table}, dump);
  }

  if (!depth_csv_path.empty()) {
    std::ofstream csv(depth_csv_path);
    csv << "r,empirical,theory\n";
    csv.precision(17);
    for (std::size_t i = 0; i < rep.depth.grid.size(); ++i)
      csv << rep.depth.grid[i] << ',' << rep.depth.empirical[i] << ','
          << rep.depth.theory[i] << "\n";
  }

  const ordered_json j = to_json(rep);
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
  std::cerr << "simulate: " << rep.events_total << " events in " << secs << " s\n";

  if (!check) return 0;
  bool ok = true;
  auto probe = [&ok](const char* name, const RateStat& s, double tolerance) {
    const bool pass = s.rel_error <= tolerance;
    std::cerr << "  check " << name << ": rel_error " << s.rel_error << " vs " << tolerance
              << (pass ? " ok" : " FAIL") << "\n";
    ok = ok && pass;
  };
  if (cfg.side == "both") probe("crossing-rate", rep.crossing_total, tol_rate);
  if (cfg.side == "A" || cfg.side == "both") {
    probe("crossing-rate-into-A", rep.crossing_into[0], tol_rate);
    probe("entry-rate-A", rep.n0[0], tol_rate);
    probe("same-side-return-rate-A", rep.n1[0], tol_n1);
    probe("gap-into-A", rep.gap_into[0], tol_rate);
  }
  if (cfg.side == "B" || cfg.side == "both") {
    probe("entry-rate-B", rep.n0[1], tol_rate);
    probe("same-side-return-rate-B", rep.n1[1], tol_n1);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic flow and collar excursion statistics on hyperbolic surfaces"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo flow experiment");
  ExperimentConfig cfg;
  std::string out_path, dump_path, depth_csv_path;
  bool check = false;
  double tol_rate = 0.03, tol_n1 = 0.05;
  sim->add_option("--preset", cfg.preset_name, "surface preset name");
  sim->add_option("--surface", cfg.surface_file, "surface description file");
  sim->add_option("--target", cfg.target_word, "generator word of the closed geodesic");
  sim->add_option("--side", cfg.side, "half-collar selection: A, B or both");
  sim->add_option("--r-frac", cfg.r_fraction, "collar width fraction of the embedding bound");
  sim->add_option("--r0-frac", cfg.r0_fraction, "depth-statistics width fraction");
  sim->add_option("--time", cfg.time_horizon, "flow time per trajectory");
  sim->add_option("--trajectories", cfg.n_traj, "number of trajectories");
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_option("--depth-grid", cfg.depth_grid, "depth CDF grid size");
  sim->add_option("--truncation-height", cfg.truncation_height, "sampler cap height");
  sim->add_option("--out", out_path, "report file (default stdout)");
  sim->add_option("--dump-events", dump_path, "write an event log for one trajectory");
  sim->add_option("--depth-csv", depth_csv_path, "write the depth CDF as CSV");
  sim->add_flag("--check", check, "compare rates against theory; nonzero exit on failure");
  sim->add_option("--tol-rate", tol_rate, "relative tolerance for rate checks");
  sim->add_option("--tol-n1", tol_n1, "relative tolerance for the same-side return rate");

  // --- verify-measure ---
  auto* ver = app.add_subcommand("verify-measure", "quadrature check of section measures");
  double v_len = 1.0, v_r = 0.0, v_area = 2.0 * M_PI, v_eps = 0.01, v_tol = 1e-8;
  ver->add_option("--length", v_len, "closed geodesic length")->required();
  ver->add_option("--r", v_r, "collar width (omit for the core section only)");
  ver->add_option("--area-s", v_area, "surface area");
  ver->add_option("--epsilon", v_eps, "section thickness");
  ver->add_option("--tol", v_tol, "relative tolerance");

  // --- geometry ---
  auto* geo = app.add_subcommand("geometry", "closed-form collar geometry for a length");
  double g_len = 1.0, g_r = -1.0, g_area = -1.0;
  geo->add_option("--length", g_len, "closed geodesic length")->required();
  geo->add_option("--r", g_r, "collar width");
  geo->add_option("--area", g_area, "collar area (alternative to --r)");

  // --- preset-info ---
  auto* pre = app.add_subcommand("preset-info", "describe a preset or surface file");
  std::string p_name = "punctured-torus", p_file;
  pre->add_option("--preset", p_name, "preset name");
  pre->add_option("--surface", p_file, "surface description file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(cfg, out_path, dump_path, depth_csv_path, check, tol_rate, tol_n1);

    if (ver->parsed()) {
      bool ok = false;
      const ordered_json j = verify_measure_report(v_len, v_r, v_area, v_eps, v_tol, &ok);
      std::cout << j.dump(2) << "\n";
      return ok ? 0 : 1;
    }

    if (geo->parsed()) {
      ordered_json j;
      j["length"] = g_len;
      j["max_width"] = max_collar_width(g_len);
      if (g_r > 0.0 || g_area > 0.0) {
        const CollarSpec c = g_r > 0.0 ? collar_from_width(g_len, g_r)
                                       : collar_from_area(g_len, g_area);
        j["r"] = c.r;
        j["phi"] = c.phi;
        j["area"] = c.area;
        j["cosh_r"] = c.cosh_r();
        j["len_cosh_r"] = g_len * c.cosh_r();
        j["radical_form"] = std::sqrt(g_len * g_len + 0.25 * c.area * c.area);
        j["len_cosh_r_minus_len"] = g_len * (c.cosh_r() - 1.0);
        j["radical_form_minus_len"] =
            std::sqrt(g_len * g_len + 0.25 * c.area * c.area) - g_len;
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (pre->parsed()) {
      const SurfaceSpec spec =
          p_file.empty() ? preset(p_name) : load_surface_file(p_file);
      ordered_json j;
      j["name"] = spec.name();
      j["area"] = spec.area();
      ordered_json gens = ordered_json::array();
      for (const auto& g : spec.generators())
        gens.push_back(ordered_json{{"label", g.label},
                                    {"matrix", {g.map.m00(), g.map.m01(), g.map.m10(),
                                                g.map.m11()}}});
      j["generators"] = gens;
      ordered_json verts = ordered_json::array();
      for (const auto& v : spec.vertices())
        verts.push_back(v.is_infinity() ? ordered_json("inf") : ordered_json(v.value()));
      j["vertices"] = verts;
      ordered_json sides = ordered_json::array();
      for (int i = 0; i < static_cast<int>(spec.sides().size()); ++i)
        sides.push_back(ordered_json{{"side", i},
                                     {"partner", spec.sides()[i].partner},
                                     {"pairing", spec.sides()[i].pairing_word}});
      j["pairings"] = sides;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const hypflow::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
