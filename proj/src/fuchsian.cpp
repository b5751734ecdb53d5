#include "surfgroup/fuchsian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace surfgroup {

namespace {

// Rotation about i by angle t.
Isometry rotation(double t) {
  return {std::cos(t / 2), std::sin(t / 2), -std::sin(t / 2), std::cos(t / 2)};
}

// Homogeneous hyperboloid coordinates (t, x, y) of the image of a point under
// g, using the symmetric-matrix model z <-> (1/y)[[|z|^2, x], [x, 1]] on which
// g acts by Z -> g Z g^T.
struct Sym {
  double p, q, r;
};

Sym act(const Isometry& g, const Sym& z) {
  return {g.a * g.a * z.p + 2 * g.a * g.b * z.q + g.b * g.b * z.r,
          g.a * g.c * z.p + (g.a * g.d + g.b * g.c) * z.q + g.b * g.d * z.r,
          g.c * g.c * z.p + 2 * g.c * g.d * z.q + g.d * g.d * z.r};
}

using Klein = KleinPoint;

Klein to_klein(const Sym& z) {
  const double s = z.p + z.r;
  return {(z.p - z.r) / s, 2 * z.q / s};
}

Sym klein_sym(Klein k) { return {1 + k.u, k.v, 1 - k.u}; }

Sym to_sym(Point z) {
  const double y = z.imag();
  return {std::norm(z) / y, z.real() / y, 1 / y};
}

constexpr Klein kWalkStart{0.01370548, 0.02913377};

}  // namespace

KleinPoint to_klein(Point z) { return to_klein(to_sym(z)); }

Point from_klein(KleinPoint k) {
  const double w = 1 - k.u;
  return {k.v / w, std::sqrt(std::max(0.0, 1 - k.u * k.u - k.v * k.v)) / w};
}

BoundaryPoint klein_boundary(KleinPoint k) {
  const double w = 1 - k.u;
  if (w < 1e-15) return BoundaryPoint::infinity();
  return BoundaryPoint::at(k.v / w);
}

double klein_distance(KleinPoint p, KleinPoint q) {
  const double den = std::sqrt((1 - p.u * p.u - p.v * p.v) * (1 - q.u * q.u - q.v * q.v));
  // sinh^2 d = (|p-q|^2 - (p x q)^2) / den^2, exact for nearby points
  const double du = p.u - q.u, dv = p.v - q.v;
  const double cross = p.u * q.v - p.v * q.u;
  const double sinh2 = (du * du + dv * dv - cross * cross) / (den * den);
  return std::asinh(std::sqrt(std::max(0.0, sinh2)));
}

FuchsianRep::FuchsianRep(int genus, double tol) : presentation_(genus), tol_geom_(tol) {}

namespace {

// Half-plane of the Dirichlet domain of the origin cut out by the bisector of
// the origin and g(origin), in Klein coordinates.
struct HalfPlane {
  double nx, ny, c;
};

HalfPlane bisector(const Isometry& g) {
  const Sym q = act(g, Sym{1, 0, 1});
  return {(q.p - q.r) / 2, q.q, (q.p + q.r) / 2 - 1};
}

// A generic centre for the walk domain, given in Klein coordinates about i.
constexpr Klein kWalkCentre{0.0731, -0.0419};

}  // namespace

FuchsianRep FuchsianRep::regular_polygon(int genus, double tol_geom) {
  FuchsianRep rep(genus, tol_geom);
  const int n = 4 * genus;
  const double pi = std::numbers::pi;
  // centre-to-side distance h of the regular n-gon with angles 2pi/n
  const double h = std::acosh(1 / std::tan(pi / n));
  const Isometry shift{std::exp(h), 0, 0, std::exp(-h)};
  auto side_angle = [&](int j) { return 2 * pi * j / n; };
  // maps side j onto side k, sending the polygon across side k
  auto pairing = [&](int j, int k) {
    return rotation(side_angle(k)) * shift * rotation(pi - side_angle(j));
  };
  rep.images_.assign(2 * genus * 2 + 1, Isometry::identity());
  for (int k = 0; k < genus; ++k) {
    const int s = 4 * k;
    const Isometry a = pairing(s + 2, s);
    const Isometry b = pairing(s + 1, s + 3);
    const int ia = 2 * k + 1, ib = 2 * k + 2;
    rep.images_[ia + 2 * genus] = a;
    rep.images_[-ia + 2 * genus] = a.inverse();
    rep.images_[ib + 2 * genus] = b;
    rep.images_[-ib + 2 * genus] = b.inverse();
  }
  // Dirichlet sides: bisector of the centre O and l.O
  rep.side_of_letter_.assign(2 * genus * 2 + 1, -1);
  for (Letter l : rep.presentation_.alphabet()) {
    const HalfPlane hp = bisector(rep.image(l));
    rep.side_of_letter_[l + 2 * genus] = static_cast<int>(rep.sides_.size());
    rep.sides_.push_back({hp.nx, hp.ny, hp.c, l});
  }
  for (Side& sd : rep.sides_) sd.pair = rep.side_of_letter_[-sd.letter + 2 * genus];
  rep.build_walk_domain();
  return rep;
}

void FuchsianRep::build_walk_domain() {
  const Point c = from_klein(kWalkCentre);
  const double sy = std::sqrt(c.imag());
  walk_.frame = {1 / sy, -c.real() / sy, 0, sy};
  const Isometry frame_inv = walk_.frame.inverse();

  // candidate elements: every element of word length <= 4, plus the prefixes
  // of the relator cyclings, which together include all tiles of P sharing a
  // vertex with P (those need length up to 2g)
  std::vector<Word> candidates;
  std::set<std::string> seen;
  auto consider = [&](const Word& x) {
    Word red = presentation_.dehn_reduce(x);
    if (red.empty() || !seen.insert(red.key()).second) return;
    candidates.push_back(std::move(red));
  };
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (Letter l : presentation_.alphabet()) {
        if (!w.empty() && l == inverse_letter(w.back())) continue;
        Word x = w;
        x.push_back(l);
        consider(x);
        next.push_back(std::move(x));
      }
    }
    frontier = std::move(next);
  }
  for (const Word& c : presentation_.relator_cyclings()) {
    for (std::size_t k = 1; k < c.size(); ++k) consider(c.subword(0, k));
  }

  // Clip a large square by every bisector half-plane, tracking which
  // half-plane contributes each edge (edge i runs from vertex i to i + 1).
  struct Vertex {
    Klein p;
    int label;
  };
  std::vector<Vertex> poly = {{{-2, -2}, -1}, {{2, -2}, -1}, {{2, 2}, -1}, {{-2, 2}, -1}};
  std::vector<HalfPlane> planes;
  std::vector<Isometry> centred;
  for (const Word& w : candidates) {
    centred.push_back(walk_.frame * evaluate(w) * frame_inv);
    planes.push_back(bisector(centred.back()));
  }
  for (std::size_t k = 0; k < planes.size(); ++k) {
    const HalfPlane& hp = planes[k];
    auto value = [&](Klein p) { return hp.nx * p.u + hp.ny * p.v - hp.c; };
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vertex& a = poly[i];
      const Vertex& b = poly[(i + 1) % poly.size()];
      const double fa = value(a.p), fb = value(b.p);
      auto cut = [&] {
        const double t = fa / (fa - fb);
        return Klein{a.p.u + t * (b.p.u - a.p.u), a.p.v + t * (b.p.v - a.p.v)};
      };
      if (fa <= 0) {
        out.push_back(a);
        if (fb > 0) out.push_back({cut(), static_cast<int>(k)});
      } else if (fb <= 0) {
        out.push_back({cut(), a.label});
      }
    }
    poly = std::move(out);
  }
  std::vector<int> index_of(planes.size(), -1);
  for (const Vertex& v : poly) {
    if (v.p.u * v.p.u + v.p.v * v.p.v >= 1 - 1e-9) throw GeometryError("walk domain is not compact");
    if (v.label < 0) throw GeometryError("walk domain touches the clipping box");
    if (index_of[static_cast<std::size_t>(v.label)] >= 0) continue;
    index_of[static_cast<std::size_t>(v.label)] = static_cast<int>(walk_.sides.size());
    const HalfPlane& hp = planes[static_cast<std::size_t>(v.label)];
    walk_.sides.push_back({hp.nx, hp.ny, hp.c, 0});
    walk_.elements.push_back(candidates[static_cast<std::size_t>(v.label)]);
    walk_.centred.push_back(centred[static_cast<std::size_t>(v.label)]);
  }
  for (std::size_t k = 0; k < walk_.sides.size(); ++k) {
    for (std::size_t j = 0; j < walk_.sides.size(); ++j) {
      if (presentation_.is_identity(walk_.elements[k] * walk_.elements[j])) {
        walk_.sides[k].pair = static_cast<int>(j);
      }
    }
    if (walk_.sides[k].pair < 0) throw GeometryError("walk domain side without a partner");
  }
}

Isometry FuchsianRep::evaluate(const Word& w) const {
  Isometry m;
  for (Letter l : w) m = m * image(l);
  return m;
}

int FuchsianRep::exit_side(const std::vector<Side>& sides, KleinPoint x, KleinPoint target,
                           int entry, double& fraction) {
  const double dx = target.u - x.u, dy = target.v - x.v;
  int best = -1;
  fraction = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(sides.size()); ++j) {
    if (j == entry) continue;
    const Side& sd = sides[j];
    const double den = sd.nx * dx + sd.ny * dy;
    if (den <= 0) continue;
    const double s = (sd.c - sd.nx * x.u - sd.ny * x.v) / den;
    if (s < fraction) {
      fraction = s;
      best = j;
    }
  }
  return best;
}

Word FuchsianRep::geodesic_word(const Word& w) const {
  Word rest = presentation_.dehn_reduce(w);
  Word out;
  Klein x = kWalkStart;
  int entry = -1;
  const Sym start = klein_sym(kWalkStart);
  const std::size_t cap = 4 * rest.size() + 16;
  while (!rest.empty()) {
    if (out.size() > cap) throw GeometryError("geodesic walk did not terminate");
    const Klein e = to_klein(act(evaluate(rest), start));
    double s = 0;
    const int best = exit_side(sides_, x, e, entry, s);
    if (best < 0) throw GeometryError("geodesic walk lost the segment");
    const Letter l = sides_[best].letter;
    const Klein exit{x.u + s * (e.u - x.u), x.v + s * (e.v - x.v)};
    out.push_back(l);
    x = to_klein(act(image(inverse_letter(l)), klein_sym(exit)));
    entry = sides_[best].pair;
    Word next{inverse_letter(l)};
    next.append(rest);
    rest = presentation_.dehn_reduce(next);
  }
  return out;
}

Word FuchsianRep::locate(Point z) const {
  const Sym target = to_sym(z);
  Word tile;
  Klein x{0, 0};
  int entry = -1;
  for (int step = 0; step < 10000; ++step) {
    const Isometry to_local = walk_.frame * evaluate(tile).inverse();
    const Klein e = to_klein(act(to_local, target));
    double s = 0;
    const int best = exit_side(walk_.sides, x, e, entry, s);
    if (best < 0 || s >= 1) return presentation_.dehn_reduce(tile);
    const Klein exit{x.u + s * (e.u - x.u), x.v + s * (e.v - x.v)};
    tile.append(walk_.elements[static_cast<std::size_t>(best)]);
    tile = presentation_.dehn_reduce(tile);
    x = to_klein(act(walk_.centred[static_cast<std::size_t>(best)].inverse(), klein_sym(exit)));
    entry = walk_.sides[static_cast<std::size_t>(best)].pair;
  }
  throw GeometryError("point location did not terminate");
}

AxisWalk FuchsianRep::axis_walk(const Word& u, int periods) const {
  if (periods < 1) throw std::invalid_argument("axis walk needs at least one period");
  const AxisLength al = axis_and_length(evaluate(u), tol_geom_);
  AxisWalk walk;
  walk.periods = periods;
  walk.length = al.length;
  const Point foot = project(from_klein(kWalkCentre), al.axis);
  walk.conjugator = locate(foot);
  walk.element = presentation_.dehn_reduce(walk.conjugator.inverse() * u * walk.conjugator);
  walk.start = evaluate(walk.conjugator).inverse().apply(foot);
  const Sym start = to_sym(walk.start);

  Word rest = presentation_.dehn_reduce(power(walk.element, periods));
  Word tile;
  Klein x = to_klein(act(walk_.frame, start));
  int entry = -1;
  const std::size_t cap = 8 * rest.size() + 16;
  while (!rest.empty()) {
    if (walk.tiles.size() > cap) throw GeometryError("axis walk did not terminate");
    const Klein e = to_klein(act(walk_.frame * evaluate(rest), start));
    double s = 0;
    const int best = exit_side(walk_.sides, x, e, entry, s);
    if (best < 0) throw GeometryError("axis walk lost the axis");
    const auto k = static_cast<std::size_t>(best);
    const Klein exit{x.u + s * (e.u - x.u), x.v + s * (e.v - x.v)};
    walk.tiles.push_back({tile, x, exit, 0, 0});
    tile = presentation_.dehn_reduce(tile * walk_.elements[k]);
    x = to_klein(act(walk_.centred[k].inverse(), klein_sym(exit)));
    entry = walk_.sides[k].pair;
    rest = presentation_.dehn_reduce(walk_.elements[k].inverse() * rest);
  }
  if (walk.tiles.empty()) throw GeometryError("axis walk found no tiles");
  // the first tile's chord starts where the axis enters the last translate
  const Klein p0 = walk.tiles[0].entry;
  walk.tiles[0].entry = x;
  double param = -klein_distance(x, p0);
  double total = 0;
  for (AxisTile& t : walk.tiles) {
    t.entry_param = param;
    t.chord_length = klein_distance(t.entry, t.exit);
    param += t.chord_length;
    total += t.chord_length;
  }
  if (std::abs(total - periods * al.length) > 1e-6 * (1 + periods * al.length)) {
    throw GeometryError("axis walk length disagrees with the translation length");
  }
  return walk;
}

}  // namespace surfgroup
