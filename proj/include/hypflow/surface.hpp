#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/geodesic.hpp"
#include "hypflow/mobius.hpp"

namespace hypflow {

struct Generator {
  std::string label;  // single uppercase letter
  MobiusMap map;
};

// One side of the fundamental polygon: the complete geodesic between two
// consecutive ideal vertices, plus the pairing applied to points lying beyond
// it (outside the polygon across this side).
struct Side {
  BoundaryGeodesic geo;
  int partner;
  MobiusMap pairing;
  std::string pairing_word;
  // Interior half-space descriptor: for a vertical side, interior_flag means
  // re >= finite endpoint; for a circle side it means outside the disk.
  bool interior_flag;
};

// Ideal fundamental polygon with side pairings for a finitely generated
// Fuchsian group. Vertices are boundary points, so every side is a complete
// geodesic and the polygon is the intersection of the sides' half-spaces.
class SurfaceSpec {
 public:
  SurfaceSpec(std::string name, std::vector<Generator> generators,
              std::vector<BoundaryPoint> vertices,
              std::vector<std::pair<int, std::string>> pairings,  // per side: (partner, word)
              PointH basepoint, double area)
      : name_(std::move(name)),
        generators_(std::move(generators)),
        vertices_(std::move(vertices)),
        basepoint_(basepoint),
        area_(area) {
    const int n = static_cast<int>(vertices_.size());
    if (n < 3) throw SurfaceFileError("polygon needs at least 3 vertices");
    if (static_cast<int>(pairings.size()) != n)
      throw SurfaceFileError("need exactly one pairing per side");
    for (int i = 0; i < n; ++i) {
      const BoundaryGeodesic geo(vertices_[i], vertices_[(i + 1) % n]);
      const auto& [partner, word] = pairings[i];
      Side s{geo, partner, word_map(word), word, interior_flag_for(geo)};
      sides_.push_back(std::move(s));
    }
    validate();
  }

  const std::string& name() const { return name_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<BoundaryPoint>& vertices() const { return vertices_; }
  const std::vector<Side>& sides() const { return sides_; }
  const PointH& basepoint() const { return basepoint_; }
  double area() const { return area_; }

  const MobiusMap& generator(const std::string& label) const {
    for (const auto& g : generators_)
      if (g.label == label) return g.map;
    throw DomainError("unknown generator label: " + label);
  }

  // Word over generator labels; uppercase means the generator, lowercase its
  // inverse, leftmost letter outermost ("ABa" is A * B * A^-1).
  MobiusMap word_map(const std::string& word) const {
    MobiusMap m = MobiusMap::identity();
    for (char ch : word) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      const bool inv = std::islower(static_cast<unsigned char>(ch));
      const std::string label(1, static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
      const MobiusMap& g = generator(label);
      m = m * (inv ? g.inverse() : g);
    }
    return m;
  }

  // Signed side test: true when p is in the closed interior half-space.
  bool inside_side(const PointH& p, const Side& s, double tolerance = tol::kGeom) const {
    if (s.geo.is_vertical()) {
      const double v = s.geo.finite_end();
      return s.interior_flag ? p.re >= v - tolerance : p.re <= v + tolerance;
    }
    const double d = std::hypot(p.re - s.geo.center(), p.im) - s.geo.radius();
    return s.interior_flag ? d >= -tolerance : d <= tolerance;
  }

  bool contains(const PointH& p, double tolerance = tol::kGeom) const {
    for (const auto& s : sides_)
      if (!inside_side(p, s, tolerance)) return false;
    return true;
  }

  // Index of the most violated side, or -1 when p is inside.
  int most_violated_side(const PointH& p) const {
    int best = -1;
    double best_d = 0.0;
    for (int i = 0; i < static_cast<int>(sides_.size()); ++i) {
      if (inside_side(p, sides_[i], 0.0)) continue;
      const double d = dist_to_geodesic(p, sides_[i].geo);
      if (best < 0 || d > best_d) {
        best = i;
        best_d = d;
      }
    }
    return best;
  }

  // Maps p into the closed polygon; returns the representative and the group
  // element g with g(p) = representative.
  std::pair<PointH, MobiusMap> reduce(const PointH& p) const {
    PointH q = p;
    MobiusMap g = MobiusMap::identity();
    for (std::size_t iter = 0; iter < tol::kReduceMax; ++iter) {
      const int side = most_violated_side(q);
      if (side < 0) return {q, g};
      q = sides_[side].pairing(q);
      g = sides_[side].pairing * g;
    }
    throw ReductionStall("reduce: no side pairing reached the polygon");
  }

 private:
  bool interior_flag_for(const BoundaryGeodesic& geo) const {
    if (geo.is_vertical()) return basepoint_.re >= geo.finite_end();
    return std::hypot(basepoint_.re - geo.center(), basepoint_.im) >= geo.radius();
  }

  // True when boundary point w is outside the open boundary interval cut off
  // by the side (the interval on the non-interior side).
  bool vertex_compatible(const Side& s, const BoundaryPoint& w) const {
    if (s.geo.is_vertical()) {
      if (w.is_infinity()) return true;
      const double v = s.geo.finite_end();
      return s.interior_flag ? w.value() >= v - tol::kGeom : w.value() <= v + tol::kGeom;
    }
    const double lo = s.geo.center() - s.geo.radius();
    const double hi = s.geo.center() + s.geo.radius();
    const bool in_interval =
        !w.is_infinity() && w.value() > lo + tol::kGeom && w.value() < hi - tol::kGeom;
    // interior outside the disk: other vertices must not be strictly inside
    return s.interior_flag ? !in_interval : in_interval || w.approx_eq(BoundaryPoint(lo)) ||
                                                w.approx_eq(BoundaryPoint(hi));
  }

  void validate() const {
    const int n = static_cast<int>(sides_.size());
    if (!contains(basepoint_, 0.0))
      throw SurfaceFileError("basepoint is not interior to the polygon");
    for (int i = 0; i < n; ++i) {
      const Side& s = sides_[i];
      if (s.partner < 0 || s.partner >= n)
        throw SurfaceFileError("pairing partner out of range on side " + std::to_string(i));
      if (sides_[s.partner].partner != i)
        throw SurfaceFileError("pairing is not an involution on side " + std::to_string(i));
      if (!(sides_[s.partner].pairing * s.pairing).is_identity(tol::kGeom))
        throw SurfaceFileError("pairing of side " + std::to_string(i) +
                               " is not inverse to its partner's");
      // Pairing must carry this side onto its partner (as unordered sets).
      const BoundaryPoint a = s.pairing(s.geo.x), b = s.pairing(s.geo.y);
      const BoundaryGeodesic& t = sides_[s.partner].geo;
      const bool direct = a.approx_eq(t.x) && b.approx_eq(t.y);
      const bool flipped = a.approx_eq(t.y) && b.approx_eq(t.x);
      if (!direct && !flipped)
        throw SurfaceFileError("pairing of side " + std::to_string(i) +
                               " does not map it onto side " + std::to_string(s.partner));
      // Convex position: all vertices on the interior side of each side.
      for (const auto& w : vertices_)
        if (!vertex_compatible(s, w))
          throw SurfaceFileError("polygon is not convex at side " + std::to_string(i));
    }
    // Ideal polygon: angle-defect area is (n-2) pi.
    const double defect = (n - 2) * M_PI;
    if (std::abs(defect - area_) > tol::kGeom)
      throw SurfaceFileError("declared area disagrees with the polygon's angle defect");
    // Every generator label must be used by some pairing word.
    for (const auto& g : generators_) {
      bool used = false;
      for (const auto& s : sides_)
        for (char ch : s.pairing_word)
          if (std::toupper(static_cast<unsigned char>(ch)) == g.label[0]) used = true;
      if (!used)
        throw SurfaceFileError("generator " + g.label + " is not used by any pairing");
    }
  }

  std::string name_;
  std::vector<Generator> generators_;
  std::vector<BoundaryPoint> vertices_;
  std::vector<Side> sides_;
  PointH basepoint_;
  double area_;
};

// Once-punctured torus: ideal quadrilateral (-1, 0, 1, inf) with the standard
// commutator-parabolic generator pair; area 2 pi.
inline SurfaceSpec preset(const std::string& name) {
  if (name == "punctured-torus") {
    std::vector<Generator> gens{{"A", MobiusMap(1, 1, 1, 2)}, {"B", MobiusMap(1, -1, -1, 2)}};
    std::vector<BoundaryPoint> verts{BoundaryPoint(-1), BoundaryPoint(0), BoundaryPoint(1),
                                     BoundaryPoint::infinity()};
    // side 0: (-1,0) <-> side 2: (1,inf) via B; side 1: (0,1) <-> side 3: (inf,-1) via A.
    std::vector<std::pair<int, std::string>> pairings{{2, "b"}, {3, "a"}, {0, "B"}, {1, "A"}};
    return SurfaceSpec("punctured-torus", std::move(gens), std::move(verts),
                       std::move(pairings), PointH(0.0, 1.0), 2.0 * M_PI);
  }
  throw UnknownPreset("unknown preset: " + name);
}

enum class HalfSide { A, B };

inline char to_char(HalfSide s) { return s == HalfSide::A ? 'A' : 'B'; }

// A closed geodesic selected by a generator word, together with one of its
// two half-collar sides and the normalizing map that carries the chosen
// configuration onto the imaginary axis (attracting endpoint at infinity,
// selected half-collar lifting to the right half-plane).
struct GeodesicTarget {
  std::string label;
  std::string word;
  HalfSide side = HalfSide::A;
  MobiusMap core = MobiusMap::identity();  // side-adjusted: word map for A, its inverse for B
  double length = 0.0;
  BoundaryPoint axis_backward;  // repelling endpoint of `core`
  BoundaryPoint axis_forward;   // attracting endpoint of `core`
  MobiusMap normalizer = MobiusMap::identity();
};

namespace detail {

// Orientation-preserving map sending (p, q) to (0, inf).
inline MobiusMap normalizer_for(const BoundaryPoint& p, const BoundaryPoint& q) {
  if (p.is_infinity()) return MobiusMap(0, -1, 1, -q.value());
  if (q.is_infinity()) return MobiusMap(1, -p.value(), 0, 1);
  if (p.value() > q.value()) return MobiusMap(1, -p.value(), 1, -q.value());
  return MobiusMap(-1, p.value(), 1, -q.value());
}

}  // namespace detail

inline GeodesicTarget target_from_word(const SurfaceSpec& spec, const std::string& word,
                                       HalfSide side) {
  const MobiusMap m = spec.word_map(word);
  if (m.is_identity(1e-12)) throw NotHyperbolic("target_from_word: word is the identity");
  const MapClass cls = classify(m);
  const Hyperbolic* hyp = std::get_if<Hyperbolic>(&cls);
  if (!hyp) throw NotHyperbolic("target_from_word: word is not hyperbolic: " + word);

  GeodesicTarget t;
  t.word = word;
  t.side = side;
  t.length = hyp->length;
  if (side == HalfSide::A) {
    t.core = m;
    t.axis_backward = hyp->repelling;
    t.axis_forward = hyp->attracting;
  } else {
    t.core = m.inverse();
    t.axis_backward = hyp->attracting;
    t.axis_forward = hyp->repelling;
  }
  t.normalizer = detail::normalizer_for(t.axis_backward, t.axis_forward);
  t.label = word + ":" + to_char(side);

  const MobiusMap diag = t.normalizer * t.core * t.normalizer.inverse();
  const double h = std::exp(0.5 * t.length);
  if (!diag.approx_eq(MobiusMap(h, 0, 0, 1.0 / h), 1e-7 * h))
    throw DomainError("target_from_word: normalizer failed to diagonalize the core");
  return t;
}

// --- Surface description files ---------------------------------------------
//
//   surface <name>
//   generator <label> <m00> <m01> <m10> <m11>
//   vertices <v0> <v1> ... ("inf" for the point at infinity)
//   pairing <side> <partner-side> <word>
//   basepoint <re> <im>        (optional, default 0 1)
//   area <value>
//
// '#' starts a comment. Sides are numbered by their first vertex.

inline SurfaceSpec load_surface(std::istream& in, const std::string& origin = "<stream>") {
  std::string name = "unnamed";
  std::vector<Generator> generators;
  std::vector<BoundaryPoint> vertices;
  std::map<int, std::pair<int, std::string>> pairings;
  PointH basepoint(0.0, 1.0);
  std::optional<double> area;

  auto fail = [&origin](int line_no, const std::string& what) -> void {
    throw SurfaceFileError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  auto parse_ext = [&fail](const std::string& tok, int line_no) {
    if (tok == "inf" || tok == "+inf" || tok == "-inf") return BoundaryPoint::infinity();
    try {
      return BoundaryPoint(std::stod(tok));
    } catch (const std::exception&) {
      fail(line_no, "bad extended real '" + tok + "'");
    }
    return BoundaryPoint();  // unreachable
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "surface") {
      ls >> name;
    } else if (key == "generator") {
      std::string label;
      double e[4];
      if (!(ls >> label >> e[0] >> e[1] >> e[2] >> e[3]))
        fail(line_no, "generator needs a label and 4 entries");
      if (label.size() != 1 || !std::isupper(static_cast<unsigned char>(label[0])))
        fail(line_no, "generator label must be a single uppercase letter");
      try {
        generators.push_back({label, MobiusMap(e[0], e[1], e[2], e[3])});
      } catch (const InvalidMatrix& ex) {
        fail(line_no, ex.what());
      }
    } else if (key == "vertices") {
      if (!vertices.empty()) fail(line_no, "duplicate 'vertices' directive");
      std::string tok;
      while (ls >> tok) vertices.push_back(parse_ext(tok, line_no));
      if (vertices.size() < 3) fail(line_no, "need at least 3 vertices");
    } else if (key == "pairing") {
      int src, dst;
      std::string word;
      if (!(ls >> src >> dst >> word)) fail(line_no, "pairing needs <side> <partner> <word>");
      if (pairings.count(src)) fail(line_no, "duplicate pairing for side " + std::to_string(src));
      pairings[src] = {dst, word};
    } else if (key == "basepoint") {
      double re, im;
      if (!(ls >> re >> im) || !(im > 0)) fail(line_no, "basepoint needs <re> <im> with im > 0");
      basepoint = PointH(re, im);
    } else if (key == "area") {
      double v;
      if (!(ls >> v) || !(v > 0)) fail(line_no, "area must be positive");
      area = v;
    } else {
      fail(line_no, "unknown directive '" + key + "'");
    }
  }
  if (!area) fail(line_no, "missing 'area' directive");
  if (vertices.empty()) fail(line_no, "missing 'vertices' directive");
  std::vector<std::pair<int, std::string>> plist;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    auto it = pairings.find(i);
    if (it == pairings.end()) fail(line_no, "missing pairing for side " + std::to_string(i));
    plist.push_back(it->second);
  }
  try {
    return SurfaceSpec(name, std::move(generators), std::move(vertices), std::move(plist),
                       basepoint, *area);
  } catch (const SurfaceFileError& ex) {
    throw SurfaceFileError(origin + ": " + ex.what());
  }
}

inline SurfaceSpec load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SurfaceFileError("cannot open surface file: " + path);
  return load_surface(in, path);
}

inline void save_surface(const SurfaceSpec& spec, std::ostream& out) {
  out.precision(17);
  out << "surface " << spec.name() << "\n";
  for (const auto& g : spec.generators())
    out << "generator " << g.label << " " << g.map.m00() << " " << g.map.m01() << " "
        << g.map.m10() << " " << g.map.m11() << "\n";
  out << "vertices";
  for (const auto& v : spec.vertices()) {
    if (v.is_infinity()) out << " inf";
    else out << " " << v.value();
  }
  out << "\n";
  for (int i = 0; i < static_cast<int>(spec.sides().size()); ++i)
    out << "pairing " << i << " " << spec.sides()[i].partner << " "
        << spec.sides()[i].pairing_word << "\n";
  out << "basepoint " << spec.basepoint().re << " " << spec.basepoint().im << "\n";
  out << "area " << spec.area() << "\n";
}

}  // namespace hypflow
