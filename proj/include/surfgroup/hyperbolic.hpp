#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "surfgroup/word.hpp"

namespace surfgroup {

inline constexpr double kDefaultTolGeom = 1e-9;

using Point = std::complex<double>;  // upper half-plane, Im > 0

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coincident or near-coincident boundary points; the caller must perturb the
// configuration or raise precision.
class DegenerateError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Element of PSL(2,R): a 2x2 matrix of determinant 1, identified with its negation.
struct Isometry {
  double a = 1, b = 0, c = 0, d = 1;

  static Isometry identity() { return {}; }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Isometry inverse() const { return {d, -b, -c, a}; }
  // Squared Frobenius norm; equals 2 cosh of the displacement of i.
  double norm2() const { return a * a + b * b + c * c + d * d; }
  Point apply(Point z) const;

  friend Isometry operator*(const Isometry& x, const Isometry& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
};

// Max entrywise distance between x and +y or -y, whichever is smaller.
double projective_distance(const Isometry& x, const Isometry& y);
bool approx_equal(const Isometry& x, const Isometry& y, double tol);

// A point of the boundary circle R u {inf}.
struct BoundaryPoint {
  double x = 0;
  bool infinite = false;

  static BoundaryPoint at(double v) { return {v, false}; }
  static BoundaryPoint infinity() { return {0, true}; }
  // Position on the circle via the chart x -> 2 atan(x), inf -> pi.
  double angle() const;
};

BoundaryPoint apply(const Isometry& g, BoundaryPoint p);
double boundary_gap(BoundaryPoint p, BoundaryPoint q);  // angular distance on the circle

struct GeodesicLine {
  BoundaryPoint neg;  // repelling end when the line is an oriented axis
  BoundaryPoint pos;  // attracting end

  GeodesicLine reversed() const { return {pos, neg}; }
};

GeodesicLine apply(const Isometry& g, const GeodesicLine& l);

struct AxisLength {
  GeodesicLine axis;
  double length = 0;
};

// Oriented axis and translation length 2 arccosh(|tr|/2) of a hyperbolic element.
AxisLength axis_and_length(const Isometry& g, double tol = kDefaultTolGeom);
inline double translation_length(const Isometry& g) {
  const double t = std::abs(g.trace()) / 2;
  return t <= 1 ? 0.0 : 2 * std::acosh(t);
}

// True iff the endpoints of l2 separate those of l1 on the circle at infinity.
// Throws DegenerateError when two of the four endpoints agree within tol.
bool linked(const GeodesicLine& l1, const GeodesicLine& l2, double tol = kDefaultTolGeom);

double distance(Point z, Point w);
double distance_to_line(Point z, const GeodesicLine& l);

// Orientation-preserving isometry taking l to the imaginary axis (neg -> 0,
// pos -> inf) and `foot` (a point of l) to i.
Isometry standard_frame(const GeodesicLine& l, Point foot);
// Orthogonal projection of z onto l.
Point project(Point z, const GeodesicLine& l);
// Signed arc length from `foot` to the projection of z, positive toward l.pos.
double line_parameter(const GeodesicLine& l, Point foot, Point z);
Point point_on_line(const GeodesicLine& l, Point foot, double t);

struct Crossing {
  Point point;
  double angle = 0;  // in (0, pi), between the oriented tangents
};

// Intersection of two linked lines.
Crossing crossing(const GeodesicLine& l1, const GeodesicLine& l2, double tol = kDefaultTolGeom);

struct GeodesicSegment {
  GeodesicLine carrier;
  Point foot;       // marked point on carrier, parameter 0
  double t0 = 0;    // arc-length parameters, t0 < t1
  double t1 = 0;

  double length() const { return t1 - t0; }
  Point start() const { return point_on_line(carrier, foot, t0); }
  Point end() const { return point_on_line(carrier, foot, t1); }
};

GeodesicSegment apply(const Isometry& g, const GeodesicSegment& s);

// Transverse intersection of two segments (interior crossing of the carriers
// within both parameter ranges).
std::optional<Point> segments_cross(const GeodesicSegment& s1, const GeodesicSegment& s2,
                                    double tol = kDefaultTolGeom);

}  // namespace surfgroup
