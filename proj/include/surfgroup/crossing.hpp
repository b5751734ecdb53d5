#pragma once

#include <map>
#include <optional>
#include <vector>

#include "surfgroup/ball.hpp"
#include "surfgroup/fuchsian.hpp"

namespace surfgroup {

struct PrimitiveRoot {
  Word root;
  int power = 1;
};

// w = root^power with root not a proper power. The stabilizer of the axis of
// w is cyclic and its generator maps the first tile along the axis to another
// tile along the axis, so every candidate root is among those tiles; each is
// confirmed exactly with Dehn's algorithm.
PrimitiveRoot primitive_root(const Word& w, const FuchsianRep& rep);

// One unordered pair of crossing lifts up to the deck group. The conjugator g
// is relative to the report's axis element u: the lifts are axis(u) and
// g.axis(u), and both crossing parameters lie in [0, length).
struct CrossingWitness {
  Word conjugator;
  GeodesicLine axis;
  GeodesicLine other;
  Point point;
  double angle = 0;
  double param = 0;        // crossing point on axis(u)
  double other_param = 0;  // g^{-1} of the crossing point, on axis(u)
};

struct CrossingReport {
  Word element;
  Word primitive_root;
  int power = 1;
  Word axis_element;  // conjugate of the primitive root used for the walk
  double translation_length = 0;
  int primitive_crossings = 0;
  int crossing_number = 0;
  std::vector<CrossingWitness> witnesses;
  // Number of axis periods scanned by the confirming enumeration, and the
  // counts found by each enumeration (first: one period, second: independent
  // conjugate over `enumeration_radius` periods).
  int enumeration_radius = 0;
  std::vector<int> counts;
  bool stabilized = false;
};

struct CrossingPolicy {
  int confirm_periods = 2;
};

// Throws std::invalid_argument for the identity and DegenerateError when a
// crossing is tangential within tolerance.
CrossingReport crossing_number(const Word& w, const FuchsianRep& rep,
                               const CrossingPolicy& policy = {});

// Crossing pairs of the axis of a primitive element u over the given number
// of periods, each as (param on axis, param of g^{-1}(point), conjugator g).
struct CrossingPair {
  double param = 0;
  double other_param = 0;
  Word conjugator;
  KleinPoint local_point;
  int tile = 0;
  int other_tile = 0;
};
std::vector<CrossingPair> axis_crossings(const AxisWalk& walk, double tol);

// An automorphism given by the images of the generators a1, b1, ..., ag, bg.
struct Automorphism {
  std::string name;
  std::vector<Word> images;  // images[i] is the image of generator i + 1
  Word apply(const Word& w) const;
};

// Dehn twists a_k -> a_k b_k and b_k -> b_k a_k for each handle, and the
// swap of the first two handles.
std::vector<Automorphism> standard_automorphisms(int genus);

struct SnEntry {
  BallTable::Index index = 0;
  Word word;
  int crossing_number = 0;
  int power = 1;
};

struct SnTable {
  int n = 0;
  int radius = 0;
  bool primitive_only = false;
  std::vector<SnEntry> elements;  // in ball order (shortlex of normal forms)
  bool contains(BallTable::Index i) const;
};

// Crossing numbers and root powers of every nontrivial ball element up to
// `radius`, indexed by ball index (entry 0, the identity, is unused).
// Throws if any report fails to stabilize.
struct CrossingCensus {
  int radius = 0;
  std::vector<int> crossing_number;
  std::vector<int> power;
};
CrossingCensus crossing_census(const BallTable& ball, int radius);

SnTable enumerate_Sn(int n, bool primitive_only, const BallTable& ball,
                     const CrossingCensus& census);

}  // namespace surfgroup
