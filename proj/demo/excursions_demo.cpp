// Minimal library walkthrough: build a surface, pick a closed geodesic,
// trace one flow line, and print its first few collar excursions next to the
// closed-form rates.

#include <cstdio>
#include <cmath>

#include "hypflow/hypflow.hpp"

using namespace hypflow;

int main() {
  const SurfaceSpec surface = preset("punctured-torus");
  const GeodesicTarget target = target_from_word(surface, "A", HalfSide::A);
  const double r = 0.4 * max_collar_width(target.length);
  const ArcTable table = build_arc_table(surface, target, r);

  std::printf("surface %s, area %.6f\n", surface.name().c_str(), surface.area());
  std::printf("target '%s': length %.6f, collar width %.4f (max %.4f)\n",
              target.word.c_str(), target.length, r, max_collar_width(target.length));
  std::printf("core arcs %zu, boundary arcs %zu\n\n", table.core.size(),
              table.boundary.size());

  Rng rng(42);
  const TangentVector v0 = InitialSampler(surface, 10.0).sample(rng);
  const double horizon = 5000.0;
  const EventLog log = collect_trace(surface, {&table}, v0, horizon);

  const auto records = excursions(log, 0);
  std::printf("%zu events, %zu completed excursions; first five:\n", log.events.size(),
              records.size());
  for (std::size_t i = 0; i < records.size() && i < 5; ++i) {
    const auto& rec = records[i];
    std::printf("  [%5.1f, %5.1f] in %c out %c  depth %.4f  %s\n", rec.t_in, rec.t_out,
                rec.enter_side, rec.exit_side, rec.depth, to_string(rec.entry_class));
  }

  long crossings = 0, enters_a = 0;
  for (const auto& e : log.events) {
    crossings += e.kind == EventKind::CoreCross;
    enters_a += e.kind == EventKind::CollarEnter && e.boundary == 'A';
  }
  std::printf("\ncrossing rate %.5f  (closed form %.5f)\n", crossings / horizon,
              2.0 * target.length / (M_PI * surface.area()));
  std::printf("entry rate    %.5f  (closed form %.5f)\n", enters_a / horizon,
              target.length * std::cosh(r) / (M_PI * surface.area()));
  return 0;
}
