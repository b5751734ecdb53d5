#pragma once

#include <stdexcept>
#include <vector>

#include "surfgroup/fuchsian.hpp"

namespace surfgroup {

// The pair of subsegments of two crossing lines lying within 2 eps of each other.
struct TrapWitness {
  GeodesicSegment alpha_eps;
  GeodesicSegment beta_eps;
  double epsilon = 0;
  Point point;       // the crossing
  double angle = 0;  // in (0, pi)
};

// Half-length t of the trap segment on one line: sinh(t) sin(angle) = sinh(2 eps).
double trap_half_length(double angle, double eps);

// Throws GeometryError if the closed form disagrees with the direct distance
// from the segment ends to the other line.
TrapWitness trap_segment(const GeodesicLine& alpha, const GeodesicLine& beta, double eps);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class SegmentTooShortError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};
class EpsilonTooLargeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};
class NotNearLiftError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Searches for two deck translates of sigma that cross transversely, where
// sigma is eps-close to a segment of the axis of gamma. `crossing_lifts` are
// deck elements k for which k.axis crosses the axis (for example crossing
// witnesses). Preconditions are checked and reported with distinct errors.
bool stable_intersection_check(const FuchsianRep& rep, const Word& gamma,
                               const GeodesicSegment& sigma, double eps,
                               const std::vector<Word>& crossing_lifts);

}  // namespace surfgroup
