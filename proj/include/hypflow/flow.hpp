#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <type_traits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hypflow/arcs.hpp"
#include "hypflow/collar.hpp"
#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/geodesic.hpp"
#include "hypflow/surface.hpp"

namespace hypflow {

enum class EventKind { SideCross, CoreCross, CollarEnter, CollarExit };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::SideCross: return "side-cross";
    case EventKind::CoreCross: return "core-cross";
    case EventKind::CollarEnter: return "collar-enter";
    case EventKind::CollarExit: return "collar-exit";
  }
  return "?";
}

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::SideCross;
  int table = -1;    // arc-table index; -1 for polygon side crossings
  int object = -1;   // side index or arc index
  char boundary = '-';  // collar events: boundary curve; core cross: side come from
  EntrySide entry_class = EntrySide::ReturnsNear;  // CollarEnter only
  double depth = 0.0;                              // CollarEnter only
};

// Running product of the applied side pairings, kept projectively with the
// largest entry rescaled to one. Over long runs the true product's entries
// grow like exp(time/2), far past what a determinant-normalized matrix can
// represent; only the projective class is meaningful.
struct PairingProduct {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  void compose_left(const MobiusMap& g) {
    const double a = g.m00() * m00 + g.m01() * m10;
    const double b = g.m00() * m01 + g.m01() * m11;
    const double c = g.m10() * m00 + g.m11() * m10;
    const double d = g.m10() * m01 + g.m11() * m11;
    const double s = 1.0 / std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    m00 = a * s;
    m01 = b * s;
    m10 = c * s;
    m11 = d * s;
  }
};

struct FlowState {
  // current lift; line.t is the base-point parameter
  TangentLine line{BoundaryGeodesic(BoundaryPoint(0.0), BoundaryPoint::infinity()), 0.0};
  double time = 0.0;  // accumulated flow time
  PairingProduct conditioner;  // product of applied pairings
};

namespace detail {

// Sinks may optionally observe the flow state at each event.
template <class Sink>
void emit_event(Sink&& sink, const Event& ev, const FlowState& st) {
  if constexpr (std::is_invocable_v<Sink&, const Event&, const FlowState&>) {
    sink(ev, st);
  } else {
    sink(ev);
  }
}

struct Candidate {
  double t = 0.0;
  int kind = -1;  // 0 side, 1 core arc, 2 boundary arc
  int table = -1;
  int object = -1;
  bool near_end = false;
  PointH p{0.0, 1.0};
};

}  // namespace detail

// Depth a collar excursion attains, from the trajectory line at entry and the
// boundary arc crossed: the conjugated endpoints determine the closest
// approach to the axis (zero when the lift crosses it).
inline double excursion_depth(const TangentLine& traj, const Arc& arc) {
  const BoundaryGeodesic mapped = apply(arc.to_normal, traj.line);
  return depth_to_axis(mapped);
}

// Event-driven geodesic flow on the quotient. The trajectory is advanced from
// exact intersection to exact intersection; crossing a polygon side applies
// that side's pairing to the whole state, so the base point never leaves the
// polygon. Events are reported through `sink` in strict time order.
template <class Sink>
FlowState trace(const SurfaceSpec& spec, const std::vector<const ArcTable*>& tables,
                const TangentVector& v0, double total_time, Sink&& sink) {
  if (!(total_time > 0.0)) throw DomainError("trace: need positive time");
  if (!spec.contains(v0.base, 1e-6)) throw DomainError("trace: start outside the polygon");

  FlowState st;
  st.line = line_from_vector(v0);
  int excluded_side = -1;

  while (st.time < total_time) {
    const double remaining = total_time - st.time;
    const GeneralizedCircle traj = GeneralizedCircle::of_geodesic(st.line.line);

    detail::Candidate best, runner;
    auto offer = [&](const detail::Candidate& c) {
      if (best.kind < 0 || c.t < best.t) {
        runner = best;
        best = c;
      } else if (runner.kind < 0 || c.t < runner.t) {
        runner = c;
      }
    };

    for (int i = 0; i < static_cast<int>(spec.sides().size()); ++i) {
      if (i == excluded_side) continue;
      const auto q = intersect(st.line.line, spec.sides()[i].geo);
      if (!q) continue;
      const double t = detail::param_on(st.line.line, *q);
      if (t <= st.line.t + tol::kEventGuard) continue;
      offer({t, 0, -1, i, false, *q});
    }

    for (int ti = 0; ti < static_cast<int>(tables.size()); ++ti) {
      const ArcTable& tab = *tables[ti];
      for (int ai = 0; ai < static_cast<int>(tab.core.size()); ++ai) {
        const Arc& arc = tab.core[ai];
        const auto q = intersect(st.line.line, *arc.line);
        if (!q) continue;
        const double t = detail::param_on(st.line.line, *q);
        if (t <= st.line.t + tol::kEventGuard) continue;
        const double s = detail::param_on(*arc.line, *q);
        if (s < arc.lo - tol::kVertex || s > arc.hi + tol::kVertex) continue;
        const bool near = s < arc.lo + tol::kVertex || s > arc.hi - tol::kVertex;
        offer({t, 1, ti, ai, near, *q});
      }
      for (int ai = 0; ai < static_cast<int>(tab.boundary.size()); ++ai) {
        const Arc& arc = tab.boundary[ai];
        PointH pts[2] = {PointH(0, 1), PointH(0, 1)};
        const int n = detail::intersect_generalized(traj, arc.circle, pts);
        for (int j = 0; j < n; ++j) {
          const double t = detail::param_on(st.line.line, pts[j]);
          if (t <= st.line.t + tol::kEventGuard) continue;
          const PointH mapped = arc.to_normal(pts[j]);
          const double tau = std::hypot(mapped.re, mapped.im);
          const double margin = tol::kVertex * tau;
          if (tau < arc.lo - margin || tau > arc.hi + margin) continue;
          const bool near = tau < arc.lo + margin || tau > arc.hi - margin;
          offer({t, 2, ti, ai, near, pts[j]});
        }
      }
    }

    if (best.kind < 0 || best.t - st.line.t >= remaining) {
      st.line.t += remaining;
      st.time = total_time;
      break;
    }
    if (best.near_end)
      throw DegenerateHit("trace: hit within tolerance of an arc endpoint");
    if (runner.kind >= 0 && runner.t - best.t < tol::kEventGuard)
      throw DegenerateHit("trace: simultaneous hits");

    st.time += best.t - st.line.t;
    st.line.t = best.t;

    if (best.kind == 0) {
      const Side& side = spec.sides()[best.object];
      Event ev;
      ev.time = st.time;
      ev.kind = EventKind::SideCross;
      ev.object = best.object;
      detail::emit_event(sink, ev, st);
      st.line = apply(side.pairing, st.line);
      st.conditioner.compose_left(side.pairing);
      excluded_side = side.partner;
      continue;
    }

    const ArcTable& tab = *tables[best.table];
    const Arc& arc = best.kind == 1 ? tab.core[best.object] : tab.boundary[best.object];
    const TangentLine nline = apply(arc.to_normal, st.line);
    const auto [dx, dy] = direction_at(nline.line, nline.t);

    Event ev;
    ev.time = st.time;
    ev.table = best.table;
    ev.object = best.object;

    if (best.kind == 1) {
      ev.kind = EventKind::CoreCross;
      ev.boundary = dx < 0.0 ? 'A' : 'B';  // side the trajectory comes from
      detail::emit_event(sink, ev, st);
      continue;
    }

    const CollarSpec& col = *tab.collar;
    const bool right = arc.kind == ArcKind::BoundaryA;
    const double slope = right ? col.b * dx - col.a * dy : col.b * dx + col.a * dy;
    const bool inward = right ? slope < 0.0 : slope > 0.0;
    ev.boundary = right ? 'A' : 'B';
    if (!inward) {
      ev.kind = EventKind::CollarExit;
      detail::emit_event(sink, ev, st);
      continue;
    }
    ev.kind = EventKind::CollarEnter;
    if (nline.line.x.is_infinity() || nline.line.y.is_infinity())
      throw DegenerateHit("trace: entry lift is vertical");
    const double sgn = right ? 1.0 : -1.0;
    try {
      ev.entry_class = classify_entry(sgn * nline.line.x.value(), sgn * nline.line.y.value());
    } catch (const DegenerateEndpoint&) {
      throw DegenerateHit("trace: degenerate entry endpoints");
    }
    ev.depth = excursion_depth(st.line, arc);
    detail::emit_event(sink, ev, st);
  }
  return st;
}

struct EventLog {
  std::vector<Event> events;
  double total_time = 0.0;
  FlowState final_state;
};

inline EventLog collect_trace(const SurfaceSpec& spec,
                              const std::vector<const ArcTable*>& tables,
                              const TangentVector& v0, double total_time) {
  EventLog log;
  log.total_time = total_time;
  log.final_state =
      trace(spec, tables, v0, total_time, [&log](const Event& e) { log.events.push_back(e); });
  return log;
}

// --- Excursion assembly -----------------------------------------------------

struct ExcursionRecord {
  int table = 0;
  double t_in = 0.0;
  double t_out = 0.0;
  char enter_side = 'A';
  char exit_side = 'A';
  EntrySide entry_class = EntrySide::ReturnsNear;
  double depth = 0.0;
  bool crossed_core = false;

  double length() const { return t_out - t_in; }
};

// Streaming reconstruction of the excursions of one table from its collar
// events. The first excursion is dropped when the trajectory starts inside
// the collar (no matching entry), and an excursion still open at the horizon
// is dropped from the records but contributes occupation time.
class ExcursionBuilder {
 public:
  explicit ExcursionBuilder(int table_index) : table_(table_index) {}

  void on_event(const Event& e) {
    if (e.table != table_) return;
    if (e.kind == EventKind::CoreCross) {
      ++core_cross_[e.boundary == 'A' ? 0 : 1];
      if (open_) {
        open_->crossed_core = true;
      } else if (!saw_enter_) {
        started_inside_ = true;
      }
      return;
    }
    if (e.kind == EventKind::CollarEnter) {
      ++enter_count_[e.boundary == 'A' ? 0 : 1];
      if (open_) ++violations_;  // entry while already inside: missed exit
      open_ = ExcursionRecord{table_, e.time, 0.0, e.boundary, '-',
                              e.entry_class, e.depth, false};
      saw_enter_ = true;
      return;
    }
    if (e.kind == EventKind::CollarExit) {
      if (open_) {
        open_->t_out = e.time;
        open_->exit_side = e.boundary;
        occupation_ += open_->t_out - open_->t_in;
        records.push_back(*open_);
        open_.reset();
      } else if (!saw_enter_) {
        started_inside_ = true;
        occupation_ += e.time;  // partial excursion open since t = 0
        ++initial_partial_;
      } else {
        ++violations_;  // exit without entry: missed entry event
      }
    }
  }

  void finalize(double total_time) {
    if (open_) {
      occupation_ += total_time - open_->t_in;
      dropped_tail_ = true;
      open_.reset();
    }
  }

  std::vector<ExcursionRecord> records;
  long enters(char boundary) const { return enter_count_[boundary == 'A' ? 0 : 1]; }
  long core_crossings_from(char boundary) const {
    return core_cross_[boundary == 'A' ? 0 : 1];
  }
  double occupation() const { return occupation_; }
  bool started_inside() const { return started_inside_; }
  bool dropped_tail() const { return dropped_tail_; }
  long violations() const { return violations_; }

 private:
  int table_;
  std::optional<ExcursionRecord> open_;
  long enter_count_[2] = {0, 0};
  long core_cross_[2] = {0, 0};
  long initial_partial_ = 0;
  double occupation_ = 0.0;
  bool saw_enter_ = false;
  bool started_inside_ = false;
  bool dropped_tail_ = false;
  long violations_ = 0;
};

inline std::vector<ExcursionRecord> excursions(const EventLog& log, int table_index) {
  ExcursionBuilder b(table_index);
  for (const Event& e : log.events) b.on_event(e);
  b.finalize(log.total_time);
  return std::move(b.records);
}

// Line-oriented dump: `time kind target side class`.
inline void dump_events(const EventLog& log, const std::vector<const ArcTable*>& tables,
                        std::ostream& out) {
  char buf[64];
  for (const Event& e : log.events) {
    std::snprintf(buf, sizeof buf, "%.9f", e.time);
    out << buf << ' ' << to_string(e.kind) << ' ';
    if (e.table >= 0) out << tables[e.table]->target.label;
    else out << "side" << e.object;
    out << ' ' << e.boundary << ' ';
    if (e.kind == EventKind::CollarEnter) out << to_string(e.entry_class);
    else out << '-';
    out << '\n';
  }
}

}  // namespace hypflow
