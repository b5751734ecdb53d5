#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "surfgroup/fuchsian.hpp"
#include "surfgroup/hyperbolic.hpp"

using namespace surfgroup;

namespace {

BoundaryPoint at(double x) { return BoundaryPoint::at(x); }
BoundaryPoint inf() { return BoundaryPoint::infinity(); }

Isometry random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.2) continue;
    return {a, b, c, (1 + b * c) / a};
  }
}

}  // namespace

TEST_CASE("octagon representation") {
  const FuchsianRep rep = octagon_rep();
  const auto& pres = rep.presentation();
  const Isometry r = rep.evaluate(pres.relator());
  CHECK(std::abs(std::abs(r.trace()) - 2) < 1e-9);
  CHECK(approx_equal(r, Isometry::identity(), 1e-9));
  const double len = translation_length(rep.image(1));
  CHECK(len > 0);
  for (Letter l : pres.alphabet()) {
    CHECK(std::abs(rep.image(l).det() - 1) < 1e-12);
    CHECK(std::abs(rep.image(l).trace()) > 2);
    CHECK(std::abs(translation_length(rep.image(l)) - len) < 1e-9);
  }
  // a generator moves the centre to a neighbouring tile centre, 2 acosh(cot(pi/8)) away
  const double step = 2 * std::acosh(1 / std::tan(std::numbers::pi / 8));
  CHECK(distance(FuchsianRep::basepoint(), rep.image(1).apply(FuchsianRep::basepoint())) ==
        doctest::Approx(step).epsilon(1e-12));
  CHECK(len < step);
  CHECK(approx_equal(rep.evaluate(Word{1, -1}), Isometry::identity(), 1e-12));
  CHECK(approx_equal(rep.evaluate(Word{}), Isometry::identity(), 0));
}

TEST_CASE("evaluate is a homomorphism and respects Dehn reduction") {
  const FuchsianRep rep = octagon_rep();
  for (int s = 0; s < 100; ++s) {
    const Word u = random_word(2, s % 11, static_cast<std::uint64_t>(s));
    const Word v = random_word(2, (s * 7) % 11, static_cast<std::uint64_t>(s + 1000));
    const Isometry uv = rep.evaluate(u * v);
    const double scale = std::max(1.0, uv.norm2());
    CHECK(projective_distance(uv, rep.evaluate(u) * rep.evaluate(v)) < 1e-12 * scale);
    const double un = rep.evaluate(u).norm2();
    CHECK(projective_distance(rep.evaluate(u * u.inverse()), Isometry::identity()) < 1e-13 * un * un);
    const Word w = random_word(2, 10, static_cast<std::uint64_t>(s + 5000));
    const Isometry a = rep.evaluate(w), b = rep.evaluate(rep.presentation().dehn_reduce(w));
    CHECK(projective_distance(a, b) < 1e-9 * std::max(1.0, a.norm2()));
  }
}

TEST_CASE("axes and translation lengths") {
  const double e = std::exp(1.0);
  const AxisLength al = axis_and_length({e, 0, 0, 1 / e});
  CHECK(al.length == doctest::Approx(2));
  CHECK(al.axis.neg.x == doctest::Approx(0));
  CHECK(al.axis.pos.infinite);
  CHECK_THROWS_AS(axis_and_length({1, 1, 0, 1}), GeometryError);
  CHECK_THROWS_AS(axis_and_length({0, 1, -1, 0}), GeometryError);

  std::mt19937_64 rng(5);
  const FuchsianRep rep = octagon_rep();
  for (int s = 0; s < 200; ++s) {
    const Word w = rep.presentation().dehn_reduce(random_word(2, 1 + s % 6, static_cast<std::uint64_t>(s)));
    if (w.empty()) continue;
    const Isometry g = rep.evaluate(w);
    const AxisLength ag = axis_and_length(g);
    // attracting end is fixed and attracts
    const BoundaryPoint fp = apply(g, ag.axis.pos);
    CHECK(boundary_gap(fp, ag.axis.pos) < 1e-9);
    const AxisLength ai = axis_and_length(g.inverse());
    CHECK(ai.length == doctest::Approx(ag.length).epsilon(1e-12));
    CHECK(boundary_gap(ai.axis.pos, ag.axis.neg) < 1e-9);
    CHECK(boundary_gap(ai.axis.neg, ag.axis.pos) < 1e-9);
    const Isometry h = random_isometry(rng);
    const AxisLength ac = axis_and_length(h * g * h.inverse());
    CHECK(std::abs(ac.length - ag.length) < 1e-9);
    CHECK(boundary_gap(ac.axis.pos, apply(h, ag.axis.pos)) < 1e-8);
    for (int n = 2; n <= 5; ++n) {
      Isometry gn = g;
      for (int k = 1; k < n; ++k) gn = gn * g;
      CHECK(std::abs(translation_length(gn) - n * ag.length) < n * 1e-9);
    }
  }
}

TEST_CASE("linking at infinity") {
  CHECK(linked({at(-1), at(1)}, {at(0), inf()}));
  CHECK_FALSE(linked({at(-1), at(1)}, {at(2), at(3)}));
  CHECK(linked({at(0), at(2)}, {at(1), at(3)}));
  CHECK_THROWS_AS(linked({at(0), at(2)}, {at(2), at(3)}), DegenerateError);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int agreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const GeodesicLine l1{at(u(rng)), at(u(rng))};
    const GeodesicLine l2{at(u(rng)), at(u(rng))};
    const Isometry h = random_isometry(rng);
    bool base = false, moved = false, sym = false;
    try {
      base = linked(l1, l2);
      sym = linked(l2, l1);
      moved = linked(apply(h, l1), apply(h, l2));
    } catch (const DegenerateError&) {
      ++agreements;
      continue;
    }
    CHECK(base == sym);
    CHECK(base == moved);
    if (base == moved && base == sym) ++agreements;
  }
  CHECK(agreements == 1000);
}

TEST_CASE("distances, projections and crossings") {
  CHECK(distance({0, 1}, {0, std::exp(1.0)}) == doctest::Approx(1));
  const GeodesicLine imag{at(0), inf()};
  CHECK(distance_to_line({1, 1}, imag) == doctest::Approx(std::asinh(1.0)));
  CHECK(std::abs(project({1, 1}, imag) - Point(0, std::sqrt(2.0))) < 1e-12);
  CHECK(line_parameter(imag, {0, 1}, {0, std::exp(2.0)}) == doctest::Approx(2));
  CHECK(std::abs(point_on_line(imag, {0, 1}, 1.0) - Point(0, std::exp(1.0))) < 1e-12);
  const Crossing c = crossing({at(-1), at(1)}, imag);
  CHECK(std::abs(c.point - Point(0, 1)) < 1e-12);
  CHECK(c.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(crossing({at(-1), at(1)}, {at(2), at(3)}), GeometryError);

  // segments
  const GeodesicSegment s1{imag, {0, 1}, -1, 1};
  const GeodesicSegment s2{{at(-1), at(1)}, {0, 1}, -0.5, 0.5};
  CHECK(segments_cross(s1, s2).has_value());
  const GeodesicSegment s3{imag, {0, 1}, 0.5, 1};
  CHECK_FALSE(segments_cross(s3, s2).has_value());
}

TEST_CASE("geodesic walk gives geodesic words") {
  const FuchsianRep rep = octagon_rep();
  const auto& pres = rep.presentation();
  CHECK(rep.geodesic_word(Word{}).empty());
  CHECK(rep.geodesic_length(Word{1}) == 1);
  CHECK(rep.geodesic_length(pres.relator()) == 0);
  CHECK(rep.geodesic_length(Word{1, 2, -1, -2}) == 4);
  for (int s = 0; s < 300; ++s) {
    const Word w = random_word(2, 1 + s % 30, static_cast<std::uint64_t>(s));
    const Word g = rep.geodesic_word(w);
    CHECK(pres.equal(g, w));
    CHECK(g.size() <= pres.dehn_reduce(w).size());
    CHECK(is_freely_reduced(g));
  }
}
