#include "surfgroup/context.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace surfgroup {

double displacement(const Isometry& g) {
  // cosh d(i, g i) = |g|^2 / 2
  return std::acosh(std::max(1.0, g.norm2() / 2));
}

CayleyContext estimate_context(const BallTable& ball, std::size_t triangles, std::uint64_t seed) {
  if (ball.radius() < 4) throw std::invalid_argument("context estimates need a ball of radius >= 4");
  CayleyContext ctx;
  ctx.genus = ball.genus();
  ctx.radius = ball.radius();

  // upper slope: the largest displacement per letter
  double K = 1;
  for (std::size_t i = 1; i < ball.size(); ++i) {
    const auto idx = static_cast<BallTable::Index>(i);
    K = std::max(K, displacement(ball.matrix(idx)) / ball.length(idx));
  }
  double eps = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto idx = static_cast<BallTable::Index>(i);
    const double dw = ball.length(idx), dh = displacement(ball.matrix(idx));
    eps = std::max({eps, dw / K - dh, dh - K * dw});
  }
  ctx.qi_K = K;
  ctx.qi_eps = eps;

  // Triangle (id, x, y) with |x|, |y| <= R/2 so all distances stay in the ball.
  const int half = ball.radius() / 2;
  const std::size_t pool = ball.count_within(half);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(1, pool - 1);
  auto dist = [&](BallTable::Index p, BallTable::Index q) {
    const Word w = ball.normal_form(ball.inverse_of(p)) * ball.normal_form(q);
    const auto r = ball.multiply(ball.inverse_of(p), ball.normal_form(q));
    return r != BallTable::kNone ? ball.length(r) : ball.rep().geodesic_length(w);
  };
  auto path = [&](BallTable::Index from, const Word& w) {
    std::vector<BallTable::Index> pts{from};
    for (Letter l : w) pts.push_back(ball.neighbor(pts.back(), l));
    return pts;
  };
  double delta = 0;
  for (std::size_t s = 0; s < triangles; ++s) {
    const auto x = static_cast<BallTable::Index>(pick(rng));
    const auto y = static_cast<BallTable::Index>(pick(rng));
    const auto xy = ball.multiply(ball.inverse_of(x), ball.normal_form(y));
    const std::array<std::vector<BallTable::Index>, 3> sides = {
        path(0, ball.normal_form(x)), path(0, ball.normal_form(y)), path(x, ball.normal_form(xy))};
    for (int a = 0; a < 3; ++a) {
      for (BallTable::Index p : sides[a]) {
        int best = std::numeric_limits<int>::max();
        for (int b = 0; b < 3; ++b) {
          if (b == a) continue;
          for (BallTable::Index q : sides[b]) best = std::min(best, dist(p, q));
        }
        delta = std::max(delta, static_cast<double>(best));
      }
    }
  }
  ctx.delta_estimate = delta;
  ctx.triangles_sampled = triangles;
  return ctx;
}

double systole_lowerbound(const BallTable& ball) {
  if (ball.radius() < 4) throw std::invalid_argument("systole estimate needs a ball of radius >= 4");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ball.size(); ++i) {
    best = std::min(best, translation_length(ball.matrix(static_cast<BallTable::Index>(i))));
  }
  return best;
}

}  // namespace surfgroup
