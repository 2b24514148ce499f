#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hypflow/arcs.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/rng.hpp"
#include "hypflow/surface.hpp"

namespace hypflow {

// Exact sampler for the invariant measure restricted to the polygon truncated
// at a cap height: pick a floor arc uniformly (each carries equal mass pi),
// invert the arcsine marginal in re, then the 1/im^2 conditional; reject
// points above the cap. Directions are uniform on the circle.
class InitialSampler {
 public:
  InitialSampler(const SurfaceSpec& spec, double cap_height) : y_cap_(cap_height) {
    bool has_infinite_vertex = false;
    for (const auto& v : spec.vertices()) has_infinite_vertex |= v.is_infinity();
    if (!has_infinite_vertex)
      throw DomainError("InitialSampler: polygon must have a vertex at infinity");
    for (const auto& s : spec.sides()) {
      if (s.geo.is_vertical()) continue;
      if (!s.interior_flag)
        throw DomainError("InitialSampler: ceiling-type circle sides unsupported");
      floors_.push_back({s.geo.center(), s.geo.radius()});
    }
    if (floors_.empty()) throw DomainError("InitialSampler: no floor arcs");
  }

  TangentVector sample(Rng& rng) const {
    for (;;) {
      const int k = std::min<int>(static_cast<int>(rng.uniform() * floors_.size()),
                                  static_cast<int>(floors_.size()) - 1);
      const double theta = M_PI * (rng.uniform() - 0.5);
      const double re = floors_[k].c + floors_[k].rho * std::sin(theta);
      const double floor_h = floors_[k].rho * std::cos(theta);
      const double im = floor_h / (1.0 - rng.uniform());
      const double angle = 2.0 * M_PI * rng.uniform();
      if (im > y_cap_ || !(im > 0.0)) continue;
      return TangentVector{PointH(re, im), angle};
    }
  }

  double cap_height() const { return y_cap_; }

  // Height of the polygon floor over re (0 outside all floor spans).
  double floor_height(double re) const {
    double h = 0.0;
    for (const auto& f : floors_) {
      const double d = f.rho * f.rho - (re - f.c) * (re - f.c);
      if (d > 0.0) h = std::max(h, std::sqrt(d));
    }
    return h;
  }

 private:
  struct FloorArc {
    double c, rho;
  };
  std::vector<FloorArc> floors_;
  double y_cap_;
};

struct ExperimentConfig {
  std::string preset_name = "punctured-torus";
  std::string surface_file;  // when set, overrides the preset
  std::string target_word = "A";
  std::string side = "both";  // "A", "B", or "both"
  double r_fraction = 0.4;    // collar width as a fraction of the embedding bound
  double r0_fraction = 0.0;   // depth-statistics width; 0 means same as r_fraction
  double time_horizon = 20000.0;
  int n_traj = 64;
  std::uint64_t seed = 1;
  int depth_grid = 20;
  double truncation_height = 10.0;

  void validate() const {
    if (!(r_fraction > 0.0 && r_fraction < 1.0))
      throw DomainError("config: r_fraction must be in (0,1)");
    if (r0_fraction != 0.0 && !(r0_fraction > 0.0 && r0_fraction < 1.0))
      throw DomainError("config: r0_fraction must be in (0,1)");
    if (!(time_horizon > 0.0)) throw DomainError("config: time_horizon must be positive");
    if (n_traj < 1) throw DomainError("config: need at least one trajectory");
    if (depth_grid < 1) throw DomainError("config: depth_grid must be positive");
    if (side != "A" && side != "B" && side != "both")
      throw DomainError("config: side must be A, B or both");
  }
};

namespace detail {

struct TrajectoryResult {
  long events = 0;
  long side_crossings = 0;
  long core_from[2] = {0, 0};  // crossings by the side they come from (A=0)
  long n_enter[2] = {0, 0};
  long n_same_exit[2] = {0, 0};
  double len_sum[2] = {0, 0};
  long len_cnt[2] = {0, 0};
  double occupation = 0.0;
  double gap_sum_all = 0.0;
  long gap_cnt_all = 0;
  double gap_sum_into[2] = {0, 0};
  long gap_cnt_into[2] = {0, 0};
  long class_mismatch = 0;  // entries whose crossing flag disagrees with the class
  long violations = 0;
  std::vector<double> depths;  // enter-A record depths from the depth table
};

struct StatsSink {
  ExcursionBuilder rate_builder{0};
  TrajectoryResult* out = nullptr;
  double prev_all = -1.0;
  double prev_into[2] = {-1.0, -1.0};

  void operator()(const Event& e) {
    ++out->events;
    if (e.kind == EventKind::SideCross) {
      ++out->side_crossings;
      return;
    }
    rate_builder.on_event(e);
    if (e.table == 0 && e.kind == EventKind::CoreCross) {
      const int from = e.boundary == 'A' ? 0 : 1;
      const int into = 1 - from;
      ++out->core_from[from];
      if (prev_all >= 0.0) {
        out->gap_sum_all += e.time - prev_all;
        ++out->gap_cnt_all;
      }
      prev_all = e.time;
      if (prev_into[into] >= 0.0) {
        out->gap_sum_into[into] += e.time - prev_into[into];
        ++out->gap_cnt_into[into];
      }
      prev_into[into] = e.time;
    }
  }

  void finalize(double total_time) {
    rate_builder.finalize(total_time);
    out->n_enter[0] = rate_builder.enters('A');
    out->n_enter[1] = rate_builder.enters('B');
    out->occupation = rate_builder.occupation();
    out->violations = rate_builder.violations();
    for (const auto& rec : rate_builder.records) {
      const int side = rec.enter_side == 'A' ? 0 : 1;
      out->len_sum[side] += rec.length();
      ++out->len_cnt[side];
      if (rec.exit_side == rec.enter_side) ++out->n_same_exit[side];
      if (rec.crossed_core != (rec.entry_class == EntrySide::CrossesCore))
        ++out->class_mismatch;
    }
  }
};

// Collects enter-A excursion depths from a dedicated trace of the depth table.
struct DepthSink {
  ExcursionBuilder builder{0};
  void operator()(const Event& e) { builder.on_event(e); }
};

}  // namespace detail

struct RateStat {
  double value = 0.0;
  double std_err = 0.0;
  double theory = 0.0;
  double rel_error = 0.0;
};

struct DepthTable {
  double r0 = 0.0;
  std::vector<double> grid;
  std::vector<double> empirical;
  std::vector<double> theory;
  double sup_distance = 0.0;
  long samples = 0;
};

struct StatsReport {
  ExperimentConfig config;
  std::string surface_name;
  double area_s = 0.0;
  double length = 0.0;
  double r_embed = 0.0;
  double r = 0.0;
  double r0 = 0.0;
  long events_total = 0;
  long side_crossings = 0;
  int resampled = 0;
  long structural_violations = 0;
  long class_mismatches = 0;

  RateStat crossing_total;  // all core crossings against 2 len/(pi area)
  RateStat crossing_into[2];
  RateStat n0[2];
  RateStat n1[2];
  RateStat mean_len[2];  // reference value 2 pi tanh r
  RateStat gap_all;      // reference pi area / (2 len)
  RateStat gap_into[2];  // reference pi area / len
  double occupation_fraction = 0.0;
  double occupation_theory = 0.0;
  double occupation_per_entry[2] = {0.0, 0.0};
  DepthTable depth;
};

// Depth-distribution table: fraction of excursion depths <= r_j on an even
// grid r_j = j/K * r0, against cosh(r_j)/cosh(r0).
inline DepthTable depth_distribution(const std::vector<double>& depths, double r0, int grid) {
  if (depths.empty()) throw EmptySample("depth_distribution: no excursions recorded");
  DepthTable t;
  t.r0 = r0;
  t.samples = static_cast<long>(depths.size());
  std::vector<double> sorted = depths;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 1; j <= grid; ++j) {
    const double rj = r0 * j / grid;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), rj);
    const double cdf = static_cast<double>(it - sorted.begin()) / sorted.size();
    const double th = std::cosh(rj) / std::cosh(r0);
    t.grid.push_back(rj);
    t.empirical.push_back(cdf);
    t.theory.push_back(th);
    t.sup_distance = std::max(t.sup_distance, std::abs(cdf - th));
  }
  return t;
}

inline StatsReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SurfaceSpec spec = cfg.surface_file.empty() ? preset(cfg.preset_name)
                                                    : load_surface_file(cfg.surface_file);
  const GeodesicTarget target = target_from_word(spec, cfg.target_word, HalfSide::A);
  const double r_embed = max_collar_width(target.length);
  const double r = cfg.r_fraction * r_embed;
  const double r0 = (cfg.r0_fraction > 0.0 ? cfg.r0_fraction : cfg.r_fraction) * r_embed;
  const bool separate_depth = std::abs(r0 - r) > 1e-15;

  const ArcTable table_r = build_arc_table(spec, target, r);
  ArcTable table_r0;
  if (separate_depth) table_r0 = build_arc_table(spec, target, r0);
  const InitialSampler sampler(spec, cfg.truncation_height);

  const int n = cfg.n_traj;
  std::vector<detail::TrajectoryResult> results(n);
  std::atomic<int> next{0};
  std::atomic<int> resampled{0};
  std::atomic<bool> aborted{false};
  const int max_resamples = std::max(1, n / 100);

  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || aborted.load()) return;
      for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i) + (attempt << 32)));
        const TangentVector v0 = sampler.sample(rng);
        detail::TrajectoryResult res;
        detail::StatsSink sink;
        sink.out = &res;
        try {
          trace(spec, {&table_r}, v0, cfg.time_horizon, sink);
          sink.finalize(cfg.time_horizon);
          // Depth statistics come from their own table; the tables share the
          // core geodesic, so they are traced separately.
          detail::DepthSink depth_sink;
          if (separate_depth) {
            trace(spec, {&table_r0}, v0, cfg.time_horizon, depth_sink);
            depth_sink.builder.finalize(cfg.time_horizon);
          }
          const ExcursionBuilder& db =
              separate_depth ? depth_sink.builder : sink.rate_builder;
          for (const auto& rec : db.records)
            if (rec.enter_side == 'A') res.depths.push_back(rec.depth);
          res.violations += separate_depth ? depth_sink.builder.violations() : 0;
          results[i] = std::move(res);
          break;
        } catch (const DegenerateHit&) {
          if (resampled.fetch_add(1) + 1 > max_resamples) {
            aborted.store(true);
            return;
          }
        }
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (aborted.load())
    throw ExperimentAborted("run_experiment: degenerate-hit resample budget exceeded");

  // Order-independent reduction: everything below walks results in index order.
  StatsReport rep;
  rep.config = cfg;
  rep.surface_name = spec.name();
  rep.area_s = spec.area();
  rep.length = target.length;
  rep.r_embed = r_embed;
  rep.r = r;
  rep.r0 = r0;
  rep.resampled = resampled.load();
  const double T = cfg.time_horizon;
  const double len = target.length;
  const double area = spec.area();

  auto rate_stat = [&](auto&& count_of, double theory) {
    RateStat s;
    s.theory = theory;
    std::vector<double> rates(n);
    for (int i = 0; i < n; ++i) rates[i] = count_of(results[i]) / T;
    double mean = 0;
    for (double v : rates) mean += v;
    mean /= n;
    double var = 0;
    for (double v : rates) var += (v - mean) * (v - mean);
    s.value = mean;
    s.std_err = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    s.rel_error = theory != 0.0 ? std::abs(mean - theory) / theory : 0.0;
    return s;
  };

  rep.crossing_total = rate_stat(
      [](const detail::TrajectoryResult& r_) { return double(r_.core_from[0] + r_.core_from[1]); },
      2.0 * len / (M_PI * area));
  for (int s = 0; s < 2; ++s) {
    const int from = 1 - s;  // crossings pointing into side s come from the other side
    rep.crossing_into[s] = rate_stat(
        [&](const detail::TrajectoryResult& r_) { return double(r_.core_from[from]); },
        len / (M_PI * area));
    rep.n0[s] = rate_stat(
        [&](const detail::TrajectoryResult& r_) { return double(r_.n_enter[s]); },
        len * std::cosh(r) / (M_PI * area));
    rep.n1[s] = rate_stat(
        [&](const detail::TrajectoryResult& r_) { return double(r_.n_same_exit[s]); },
        len * (std::cosh(r) - 1.0) / (M_PI * area));
  }

  // Pooled means with between-trajectory standard errors.
  auto pooled_mean = [&](auto&& sum_of, auto&& cnt_of, double theory) {
    RateStat s;
    s.theory = theory;
    double sum = 0;
    long cnt = 0;
    std::vector<double> per;
    for (int i = 0; i < n; ++i) {
      sum += sum_of(results[i]);
      cnt += cnt_of(results[i]);
      if (cnt_of(results[i]) > 0) per.push_back(sum_of(results[i]) / cnt_of(results[i]));
    }
    s.value = cnt > 0 ? sum / cnt : 0.0;
    if (per.size() > 1) {
      double m = 0;
      for (double v : per) m += v;
      m /= per.size();
      double var = 0;
      for (double v : per) var += (v - m) * (v - m);
      s.std_err = std::sqrt(var / (per.size() - 1.0) / per.size());
    }
    s.rel_error = theory != 0.0 ? std::abs(s.value - theory) / theory : 0.0;
    return s;
  };

  const double mean_len_reference = 2.0 * M_PI * std::tanh(r);
  for (int s = 0; s < 2; ++s) {
    rep.mean_len[s] = pooled_mean(
        [&](const detail::TrajectoryResult& r_) { return r_.len_sum[s]; },
        [&](const detail::TrajectoryResult& r_) { return r_.len_cnt[s]; }, mean_len_reference);
    rep.gap_into[s] = pooled_mean(
        [&](const detail::TrajectoryResult& r_) { return r_.gap_sum_into[s]; },
        [&](const detail::TrajectoryResult& r_) { return r_.gap_cnt_into[s]; },
        M_PI * area / len);
  }
  rep.gap_all = pooled_mean(
      [](const detail::TrajectoryResult& r_) { return r_.gap_sum_all; },
      [](const detail::TrajectoryResult& r_) { return r_.gap_cnt_all; },
      M_PI * area / (2.0 * len));

  double occ = 0;
  long enters[2] = {0, 0};
  std::vector<double> depths;
  for (int i = 0; i < n; ++i) {
    occ += results[i].occupation;
    enters[0] += results[i].n_enter[0];
    enters[1] += results[i].n_enter[1];
    rep.events_total += results[i].events;
    rep.side_crossings += results[i].side_crossings;
    rep.structural_violations += results[i].violations;
    rep.class_mismatches += results[i].class_mismatch;
    depths.insert(depths.end(), results[i].depths.begin(), results[i].depths.end());
  }
  rep.occupation_fraction = occ / (T * n);
  rep.occupation_theory = 2.0 * len * std::sinh(r) / area;
  for (int s = 0; s < 2; ++s)
    rep.occupation_per_entry[s] = enters[s] > 0 ? occ / enters[s] : 0.0;

  if (!depths.empty()) rep.depth = depth_distribution(depths, r0, cfg.depth_grid);
  else rep.depth.r0 = r0;
  return rep;
}

}  // namespace hypflow
