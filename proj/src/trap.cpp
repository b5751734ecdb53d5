#include "surfgroup/trap.hpp"

#include <cmath>

namespace surfgroup {

double trap_half_length(double angle, double eps) {
  return std::asinh(std::sinh(2 * eps) / std::sin(angle));
}

TrapWitness trap_segment(const GeodesicLine& alpha, const GeodesicLine& beta, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("trap needs eps > 0");
  const Crossing c = crossing(alpha, beta);
  const double t = trap_half_length(c.angle, eps);
  TrapWitness out;
  out.alpha_eps = {alpha, c.point, -t, t};
  out.beta_eps = {beta, c.point, -t, t};
  out.epsilon = eps;
  out.point = c.point;
  out.angle = c.angle;
  // validate the closed form against the direct point-to-line distance
  for (const auto* seg : {&out.alpha_eps, &out.beta_eps}) {
    const GeodesicLine& other = seg == &out.alpha_eps ? beta : alpha;
    for (const Point p : {seg->start(), seg->end()}) {
      const double d = distance_to_line(p, other);
      if (std::abs(d - 2 * eps) > 1e-7 * std::max(1.0, t)) {
        throw GeometryError("trap endpoint is not at distance 2 eps from the other line");
      }
    }
  }
  return out;
}

namespace {

Isometry power_of(const Isometry& g, int k) {
  Isometry out;
  const Isometry step = k >= 0 ? g : g.inverse();
  for (int i = 0; i < std::abs(k); ++i) out = out * step;
  return out;
}

}  // namespace

bool stable_intersection_check(const FuchsianRep& rep, const Word& gamma,
                               const GeodesicSegment& sigma, double eps,
                               const std::vector<Word>& crossing_lifts) {
  if (rep.systole_estimate() <= 0) throw PreconditionError("systole estimate not set");
  if (8 * eps >= rep.systole_estimate()) {
    throw EpsilonTooLargeError("8 eps must be below the systole estimate");
  }
  const Isometry g = rep.evaluate(gamma);
  const AxisLength al = axis_and_length(g, rep.tol_geom());
  if (!(sigma.length() > 2 * al.length + 4 * eps)) {
    throw SegmentTooShortError("sigma must be longer than 2 length(gamma) + 4 eps");
  }
  const double slack = 1e-9;
  if (distance_to_line(sigma.start(), al.axis) > eps + slack ||
      distance_to_line(sigma.end(), al.axis) > eps + slack) {
    throw NotNearLiftError("sigma is not eps-close to the axis of gamma");
  }
  if (crossing_lifts.empty()) throw PreconditionError("no crossing lift supplied");

  // Translates g^i sigma and k g^j sigma; the traps sit within a bounded
  // number of periods of the foot of sigma.
  const Point foot = project(sigma.foot, al.axis);
  const double s0 = line_parameter(al.axis, foot, sigma.start());
  const double s1 = line_parameter(al.axis, foot, sigma.end());
  for (const Word& kw : crossing_lifts) {
    const Isometry k = rep.evaluate(kw);
    const GeodesicLine beta = apply(k, al.axis);
    Crossing c;
    try {
      c = crossing(al.axis, beta, rep.tol_geom());
    } catch (const GeometryError&) {
      continue;
    }
    const double tp = line_parameter(al.axis, foot, c.point);
    const double tq = line_parameter(beta, k.apply(foot), c.point);
    const double spread = std::abs(tp) + std::abs(tq) + std::abs(s0) + std::abs(s1);
    const int reach = static_cast<int>(std::ceil(spread / al.length)) + 2;
    for (int i = -reach; i <= reach; ++i) {
      const GeodesicSegment first = apply(power_of(g, i), sigma);
      for (int j = -reach; j <= reach; ++j) {
        const GeodesicSegment second = apply(k * power_of(g, j), sigma);
        if (segments_cross(first, second, rep.tol_geom())) return true;
      }
    }
  }
  return false;
}

}  // namespace surfgroup
