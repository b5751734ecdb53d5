#include "surfgroup/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace surfgroup {

Point Isometry::apply(Point z) const {
  const Point den = c * z + d;
  Point w = (a * z + b) / den;
  // the imaginary part loses relative precision far from i; recompute it directly
  return {w.real(), z.imag() / std::norm(den)};
}

double projective_distance(const Isometry& x, const Isometry& y) {
  auto dist = [](const Isometry& p, const Isometry& q, double s) {
    return std::max({std::abs(p.a - s * q.a), std::abs(p.b - s * q.b), std::abs(p.c - s * q.c),
                     std::abs(p.d - s * q.d)});
  };
  return std::min(dist(x, y, 1.0), dist(x, y, -1.0));
}

bool approx_equal(const Isometry& x, const Isometry& y, double tol) {
  return projective_distance(x, y) <= tol;
}

double BoundaryPoint::angle() const { return infinite ? std::numbers::pi : 2 * std::atan(x); }

BoundaryPoint apply(const Isometry& g, BoundaryPoint p) {
  if (p.infinite) {
    if (g.c == 0) return BoundaryPoint::infinity();
    return BoundaryPoint::at(g.a / g.c);
  }
  const double den = g.c * p.x + g.d;
  if (den == 0) return BoundaryPoint::infinity();
  return BoundaryPoint::at((g.a * p.x + g.b) / den);
}

double boundary_gap(BoundaryPoint p, BoundaryPoint q) {
  const double d = std::abs(p.angle() - q.angle());
  return std::min(d, 2 * std::numbers::pi - d);
}

GeodesicLine apply(const Isometry& g, const GeodesicLine& l) {
  return {apply(g, l.neg), apply(g, l.pos)};
}

AxisLength axis_and_length(const Isometry& input, double tol) {
  Isometry g = input;
  if (g.trace() < 0) g = {-g.a, -g.b, -g.c, -g.d};
  const double t = g.trace();
  if (t <= 2 + tol) throw GeometryError("axis requested for a non-hyperbolic isometry");
  const double s = std::sqrt((t - 2) * (t + 2));
  AxisLength out;
  out.length = 2 * std::acosh(t / 2);
  if (g.c == 0) {
    const BoundaryPoint finite = BoundaryPoint::at(g.b / (g.d - g.a));
    out.axis = g.a > g.d ? GeodesicLine{finite, BoundaryPoint::infinity()}
                         : GeodesicLine{BoundaryPoint::infinity(), finite};
    return out;
  }
  // roots of c z^2 + (d - a) z - b = 0 in the cancellation-free form
  const double B = g.d - g.a;
  const double q = -0.5 * (B + std::copysign(s, B));
  const double r1 = q / g.c;
  const double r2 = -g.b / q;
  const bool r1_attracting = std::abs(g.c * r1 + g.d) > std::abs(g.c * r2 + g.d);
  out.axis = r1_attracting ? GeodesicLine{BoundaryPoint::at(r2), BoundaryPoint::at(r1)}
                           : GeodesicLine{BoundaryPoint::at(r1), BoundaryPoint::at(r2)};
  return out;
}

bool linked(const GeodesicLine& l1, const GeodesicLine& l2, double tol) {
  const std::array<BoundaryPoint, 4> pts = {l1.neg, l1.pos, l2.neg, l2.pos};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (boundary_gap(pts[i], pts[j]) <= tol) {
        throw DegenerateError("geodesic endpoints coincide within tolerance");
      }
    }
  }
  const double lo = std::min(l1.neg.angle(), l1.pos.angle());
  const double hi = std::max(l1.neg.angle(), l1.pos.angle());
  auto inside = [&](BoundaryPoint p) {
    const double th = p.angle();
    return th > lo && th < hi;
  };
  return inside(l2.neg) != inside(l2.pos);
}

double distance(Point z, Point w) {
  return 2 * std::asinh(std::abs(z - w) / (2 * std::sqrt(z.imag() * w.imag())));
}

namespace {

// neg -> 0, pos -> inf
Isometry normalizer(const GeodesicLine& l) {
  if (l.neg.infinite && l.pos.infinite) throw DegenerateError("line with equal endpoints");
  if (l.pos.infinite) return {1, -l.neg.x, 0, 1};
  if (l.neg.infinite) return {0, -1, 1, -l.pos.x};
  const double gap = l.neg.x - l.pos.x;
  if (gap == 0) throw DegenerateError("line with equal endpoints");
  const double k = gap > 0 ? 1.0 : -1.0;
  const double s = 1 / std::sqrt(std::abs(gap));
  return {k * s, -k * l.neg.x * s, s, -l.pos.x * s};
}

}  // namespace

double distance_to_line(Point z, const GeodesicLine& l) {
  const Point w = normalizer(l).apply(z);
  return std::asinh(std::abs(w.real()) / w.imag());
}

Isometry standard_frame(const GeodesicLine& l, Point foot) {
  const Isometry m = normalizer(l);
  const double y = std::abs(m.apply(foot));
  const double r = std::sqrt(y);
  return Isometry{1 / r, 0, 0, r} * m;
}

Point project(Point z, const GeodesicLine& l) {
  const Isometry m = normalizer(l);
  const Point w = m.apply(z);
  return m.inverse().apply(Point(0, std::abs(w)));
}

double line_parameter(const GeodesicLine& l, Point foot, Point z) {
  return std::log(std::abs(standard_frame(l, foot).apply(z)));
}

Point point_on_line(const GeodesicLine& l, Point foot, double t) {
  return standard_frame(l, foot).inverse().apply(Point(0, std::exp(t)));
}

Crossing crossing(const GeodesicLine& l1, const GeodesicLine& l2, double tol) {
  if (!linked(l1, l2, tol)) throw GeometryError("crossing requested for unlinked lines");
  const Isometry m = normalizer(l1);
  const GeodesicLine k = apply(m, l2);
  if (k.neg.infinite || k.pos.infinite) throw DegenerateError("crossing at the boundary");
  const double x1 = k.neg.x, x2 = k.pos.x;
  const double y = std::sqrt(-x1 * x2);
  const double c = (x1 + x2) / 2, r = std::abs(x2 - x1) / 2;
  const double cos_angle = std::clamp(x1 < x2 ? c / r : -c / r, -1.0, 1.0);
  return {m.inverse().apply(Point(0, y)), std::acos(cos_angle)};
}

GeodesicSegment apply(const Isometry& g, const GeodesicSegment& s) {
  return {apply(g, s.carrier), g.apply(s.foot), s.t0, s.t1};
}

std::optional<Point> segments_cross(const GeodesicSegment& s1, const GeodesicSegment& s2,
                                    double tol) {
  bool is_linked = false;
  try {
    is_linked = linked(s1.carrier, s2.carrier, tol);
  } catch (const DegenerateError&) {
    return std::nullopt;  // shared endpoint or same carrier: no transverse crossing
  }
  if (!is_linked) return std::nullopt;
  const Point p = crossing(s1.carrier, s2.carrier, tol).point;
  const double u = line_parameter(s1.carrier, s1.foot, p);
  const double v = line_parameter(s2.carrier, s2.foot, p);
  if (u < s1.t0 || u > s1.t1 || v < s2.t0 || v > s2.t1) return std::nullopt;
  return p;
}

}  // namespace surfgroup
