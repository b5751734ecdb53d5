#pragma once

#include <string>
#include <vector>

#include "surfgroup/hyperbolic.hpp"
#include "surfgroup/presentation.hpp"

namespace surfgroup {

// Beltrami-Klein model coordinates of the disc, with the basepoint i at the
// origin. Geodesics are straight chords.
struct KleinPoint {
  double u = 0, v = 0;
};

KleinPoint to_klein(Point z);
Point from_klein(KleinPoint k);
BoundaryPoint klein_boundary(KleinPoint k);  // k on the unit circle
double klein_distance(KleinPoint p, KleinPoint q);

// One tile crossed by an axis: the tile is tile_word.D, and the axis crosses
// it along the chord entry -> exit, given in the tile's own frame.
struct AxisTile {
  Word tile_word;
  KleinPoint entry, exit;
  double entry_param = 0;  // arc length along the axis from the walk start
  double chord_length = 0;
};

// The tiles met by one or more periods of the axis of u, starting from the
// tile that contains the foot of the basepoint on the axis.
struct AxisWalk {
  Word conjugator;   // t, with the walk done for the conjugate t^{-1} u t
  Word element;      // t^{-1} u t, Dehn reduced
  Point start;       // start point on the conjugate's axis, inside D
  double length = 0; // translation length from the trace
  int periods = 1;
  std::vector<AxisTile> tiles;
};

// A discrete faithful representation of the surface group in PSL(2,R) whose
// fundamental domain is the regular 4g-gon centred at i with angles 2pi/4g.
// The generators pair its sides, so the Cayley graph is the dual graph of the
// tiling and word length equals the number of tiling walls crossed.
class FuchsianRep {
 public:
  static FuchsianRep regular_polygon(int genus, double tol_geom = kDefaultTolGeom);

  int genus() const { return presentation_.genus(); }
  const SurfacePresentation& presentation() const { return presentation_; }
  std::string id() const { return "regular-" + std::to_string(4 * genus()) + "-gon"; }

  const Isometry& image(Letter l) const { return images_[static_cast<std::size_t>(l + rank())]; }
  Isometry evaluate(const Word& w) const;

  double tol_geom() const { return tol_geom_; }
  void set_tol_geom(double tol) { tol_geom_ = tol; }

  // Shortest translation length seen on a ball; 0 until estimated.
  double systole_estimate() const { return systole_; }
  int systole_radius() const { return systole_radius_; }
  void set_systole(double value, int radius) {
    systole_ = value;
    systole_radius_ = radius;
  }

  // Centre of the fundamental polygon.
  static Point basepoint() { return {0.0, 1.0}; }

  // A geodesic word for w, read off from the tiles crossed by the hyperbolic
  // segment from a generic interior point p to w.p. Exact: the returned word
  // equals w in the group (checked by Dehn's algorithm along the way).
  Word geodesic_word(const Word& w) const;
  int geodesic_length(const Word& w) const { return static_cast<int>(geodesic_word(w).size()); }

  // Axis walks use the Dirichlet domain D of a generic centre instead of the
  // polygon P: the walls of the regular tiling contain closed geodesics
  // (commutators run along them), while the walls of D are not geodesic lines.
  // Tiles are t.D for group elements t.
  int walk_domain_sides() const { return static_cast<int>(walk_.sides.size()); }

  // Tile t with z in t.D (a word for t).
  Word locate(Point z) const;

  // Tiles crossed by `periods` periods of the axis of a hyperbolic element.
  AxisWalk axis_walk(const Word& u, int periods = 1) const;

 private:
  FuchsianRep(int genus, double tol);
  int rank() const { return presentation_.rank(); }
  struct Side {
    double nx, ny, c;  // Klein-model half-plane nx*u + ny*v <= c
    Letter letter;     // crossing this side leads to tile letter.P
    int pair = -1;     // the side it is glued to
  };

  // Dirichlet domain of a generic centre, in Klein coordinates centred there.
  struct WalkDomain {
    Isometry frame;                 // moves the centre to i
    std::vector<Side> sides;
    std::vector<Word> elements;     // crossing side k leads to tile elements[k].D
    std::vector<Isometry> centred;  // frame * element * frame^{-1}
  };
  void build_walk_domain();

  // Exit side for the ray from x toward target, skipping `entry`.
  static int exit_side(const std::vector<Side>& sides, KleinPoint x, KleinPoint target, int entry,
                       double& fraction);

  SurfacePresentation presentation_;
  std::vector<Isometry> images_;  // indexed by letter + rank
  std::vector<Side> sides_;
  std::vector<int> side_of_letter_;  // letter + rank -> index into sides_
  WalkDomain walk_;
  double tol_geom_;
  double systole_ = 0;
  int systole_radius_ = 0;
};

inline FuchsianRep octagon_rep(double tol_geom = kDefaultTolGeom) {
  return FuchsianRep::regular_polygon(2, tol_geom);
}

}  // namespace surfgroup
