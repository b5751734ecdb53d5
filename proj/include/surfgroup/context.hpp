#pragma once

#include <cstdint>

#include "surfgroup/ball.hpp"

namespace surfgroup {

// Measured stand-ins for the hyperbolicity and quasi-isometry constants of the
// word metric, valid on the ball they were measured on and nowhere else.
struct CayleyContext {
  int genus = 2;
  double delta_estimate = 0;  // thin-triangle constant
  double qi_K = 1;            // d_word / K - eps <= d_hyp(x0, g x0) <= K d_word + eps
  double qi_eps = 0;
  int radius = 0;             // ball radius used for all three
  std::size_t triangles_sampled = 0;
};

// qi constants from every ball element; delta from `triangles` seeded random
// geodesic triangles with vertices in the half-radius ball.
CayleyContext estimate_context(const BallTable& ball, std::size_t triangles = 2000,
                               std::uint64_t seed = 1);

// Minimum translation length over the nontrivial elements of the ball.
double systole_lowerbound(const BallTable& ball);

// Hyperbolic displacement of the basepoint by the element.
double displacement(const Isometry& g);

}  // namespace surfgroup
