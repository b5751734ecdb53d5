#include "surfgroup/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surfgroup {

namespace {

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double wrap(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0) r += period;
  if (period - r < 1e-9 * (1 + period)) r = 0;
  return r;
}

bool close_mod(double a, double b, double period, double tol) {
  const double d = std::abs(a - b);
  return std::min(d, period - d) < tol;
}

constexpr double kParamTol = 1e-7;

// Index pairs (p, partner) of swap-equivalent crossing pairs; throws when the
// pairing is not perfect.
std::vector<std::pair<std::size_t, std::size_t>> pair_classes(
    const std::vector<CrossingPair>& pairs, double period) {
  std::vector<std::size_t> partner(pairs.size(), pairs.size());
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (a == b) continue;
      if (close_mod(pairs[a].param, pairs[b].other_param, period, kParamTol) &&
          close_mod(pairs[a].other_param, pairs[b].param, period, kParamTol)) {
        if (partner[a] != pairs.size()) throw GeometryError("crossing pair has two partners");
        partner[a] = b;
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    if (partner[a] == pairs.size() || partner[partner[a]] != a) {
      throw GeometryError("crossing pairs are not matched by the swap");
    }
    if (a < partner[a]) out.emplace_back(a, partner[a]);
  }
  return out;
}

Letter some_other_letter(const Word& w, const SurfacePresentation& pres) {
  const int rank = w.empty() ? 0 : letter_rank(w[0]);
  return letter_from_rank((rank + 2) % pres.num_letters());
}

}  // namespace

std::vector<CrossingPair> axis_crossings(const AxisWalk& walk, double tol) {
  const std::size_t total = walk.tiles.size();
  if (total % static_cast<std::size_t>(walk.periods) != 0) {
    throw GeometryError("axis walk is not periodic");
  }
  const std::size_t n = total / static_cast<std::size_t>(walk.periods);
  const double ell = walk.length;
  std::vector<CrossingPair> found;
  for (std::size_t i = 0; i < total; ++i) {
    const AxisTile& ti = walk.tiles[i];
    if (ti.chord_length < 1e-9) continue;  // passes a vertex only
    const double diu = ti.exit.u - ti.entry.u, div = ti.exit.v - ti.entry.v;
    const double ni = std::hypot(diu, div);
    for (std::size_t j = 0; j < total; ++j) {
      if (i % n == j % n) continue;
      const AxisTile& tj = walk.tiles[j];
      if (tj.chord_length < 1e-9) continue;
      const double dju = tj.exit.u - tj.entry.u, djv = tj.exit.v - tj.entry.v;
      const double nj = std::hypot(dju, djv);
      const double ru = tj.entry.u - ti.entry.u, rv = tj.entry.v - ti.entry.v;
      const double den = cross2(diu, div, dju, djv);
      if (std::abs(den) <= tol * ni * nj) {
        if (std::abs(cross2(ru, rv, diu, div)) <= tol * ni) {
          throw DegenerateError("two lifts of a primitive axis share a chord");
        }
        continue;  // parallel chords in the tile: the lines may still meet outside
      }
      const double s = cross2(ru, rv, dju, djv) / den;
      const double sj = cross2(ru, rv, diu, div) / den;
      const double slack = 1e-9;
      if (s < -slack || s > 1 + slack || sj < -slack || sj > 1 + slack) continue;
      const KleinPoint c{ti.entry.u + s * diu, ti.entry.v + s * div};
      CrossingPair p;
      p.param = wrap(ti.entry_param + std::copysign(klein_distance(ti.entry, c), s), ell);
      p.other_param = wrap(tj.entry_param + std::copysign(klein_distance(tj.entry, c), sj), ell);
      p.local_point = c;
      p.tile = static_cast<int>(i % n);
      p.other_tile = static_cast<int>(j % n);
      found.push_back(p);
    }
  }
  std::sort(found.begin(), found.end(), [](const CrossingPair& a, const CrossingPair& b) {
    return a.param != b.param ? a.param < b.param : a.other_param < b.other_param;
  });
  std::vector<CrossingPair> unique;
  for (const CrossingPair& p : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const CrossingPair& q) {
      return close_mod(p.param, q.param, ell, kParamTol) &&
             close_mod(p.other_param, q.other_param, ell, kParamTol);
    });
    if (!dup) unique.push_back(p);
  }
  for (CrossingPair& p : unique) {
    p.conjugator = walk.tiles[static_cast<std::size_t>(p.tile)].tile_word *
                   walk.tiles[static_cast<std::size_t>(p.other_tile)].tile_word.inverse();
  }
  return unique;
}

PrimitiveRoot primitive_root(const Word& w, const FuchsianRep& rep) {
  const auto& pres = rep.presentation();
  const Word reduced = pres.dehn_reduce(w);
  if (reduced.empty()) throw std::invalid_argument("primitive root of the identity");
  const AxisWalk walk = rep.axis_walk(reduced, 1);
  const double ell = walk.length;
  int best_k = 1;
  Word best = walk.element;
  for (std::size_t j = 1; j < walk.tiles.size(); ++j) {
    const Word& r = walk.tiles[j].tile_word;
    const double lr = translation_length(rep.evaluate(r));
    if (lr < 1e-9) continue;
    const int k = static_cast<int>(std::lround(ell / lr));
    if (k <= best_k || std::abs(k * lr - ell) > 1e-7 * (1 + ell)) continue;
    if (pres.equal(power(r, k), walk.element)) {
      best_k = k;
      best = r;
    }
  }
  PrimitiveRoot out;
  out.power = best_k;
  // prefer the syntactic root when the word is visibly a conjugated power
  const CyclicSplit split = cyclic_reduce(free_reduce(w));
  const std::size_t len = split.core.size();
  int k_syn = 1;
  std::size_t period = len;
  for (std::size_t p = 1; p < len; ++p) {
    if (len % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < len && ok; ++i) ok = split.core[i] == split.core[i - p];
    if (ok) {
      k_syn = static_cast<int>(len / p);
      period = p;
      break;
    }
  }
  if (k_syn == best_k) {
    out.root = free_reduce(split.conjugator * split.core.subword(0, period) *
                           split.conjugator.inverse());
  } else {
    out.root = pres.dehn_reduce(walk.conjugator * best * walk.conjugator.inverse());
  }
  if (!pres.equal(power(out.root, out.power), w)) {
    throw std::logic_error("primitive root failed exact verification");
  }
  return out;
}

CrossingReport crossing_number(const Word& w, const FuchsianRep& rep, const CrossingPolicy& policy) {
  const auto& pres = rep.presentation();
  if (pres.is_identity(w)) throw std::invalid_argument("crossing number of the identity");
  CrossingReport report;
  report.element = w;
  const PrimitiveRoot pr = primitive_root(w, rep);
  report.primitive_root = pr.root;
  report.power = pr.power;

  const double tol = rep.tol_geom();
  const AxisWalk walk = rep.axis_walk(pr.root, 1);
  const std::vector<CrossingPair> pairs = axis_crossings(walk, tol);
  const auto classes = pair_classes(pairs, walk.length);
  report.axis_element = walk.element;
  report.translation_length = walk.length;

  // independent confirmation from another conjugate over more periods
  const Letter x = some_other_letter(pr.root, pres);
  const Word other = pres.dehn_reduce(Word{inverse_letter(x)} * pr.root * Word{x});
  const AxisWalk walk2 = rep.axis_walk(other, policy.confirm_periods);
  const auto pairs2 = axis_crossings(walk2, tol);
  const auto classes2 = pair_classes(pairs2, walk2.length);

  report.counts = {static_cast<int>(classes.size()), static_cast<int>(classes2.size())};
  report.enumeration_radius = policy.confirm_periods;
  report.stabilized = classes.size() == classes2.size();
  report.primitive_crossings = static_cast<int>(classes.size());
  report.crossing_number = pr.power * pr.power * report.primitive_crossings;

  const Isometry mu = rep.evaluate(walk.element);
  const GeodesicLine axis = axis_and_length(mu, tol).axis;
  for (const auto& [a, b] : classes) {
    const CrossingPair& p = pairs[a].param <= pairs[b].param ? pairs[a] : pairs[b];
    CrossingWitness wit;
    wit.conjugator = rep.geodesic_word(p.conjugator);
    wit.axis = axis;
    wit.other = apply(rep.evaluate(p.conjugator), axis);
    const Crossing c = crossing(wit.axis, wit.other, tol);
    wit.point = c.point;
    wit.angle = c.angle;
    wit.param = p.param;
    wit.other_param = p.other_param;
    report.witnesses.push_back(std::move(wit));
  }
  return report;
}

Word Automorphism::apply(const Word& w) const {
  Word out;
  for (Letter l : w) {
    const Word& img = images.at(static_cast<std::size_t>(letter_index(l) - 1));
    out.append(l > 0 ? img : img.inverse());
  }
  return free_reduce(out);
}

std::vector<Automorphism> standard_automorphisms(int genus) {
  std::vector<Word> identity;
  for (int i = 1; i <= 2 * genus; ++i) identity.push_back(Word{static_cast<Letter>(i)});
  std::vector<Automorphism> out;
  for (int k = 0; k < genus; ++k) {
    const auto a = static_cast<Letter>(2 * k + 1), b = static_cast<Letter>(2 * k + 2);
    Automorphism ta{"twist_a" + std::to_string(k + 1), identity};
    ta.images[static_cast<std::size_t>(a - 1)] = Word{a, b};
    out.push_back(ta);
    Automorphism tb{"twist_b" + std::to_string(k + 1), identity};
    tb.images[static_cast<std::size_t>(b - 1)] = Word{b, a};
    out.push_back(tb);
  }
  Automorphism swap{"swap_handles_1_2", identity};
  std::swap(swap.images[0], swap.images[2]);
  std::swap(swap.images[1], swap.images[3]);
  out.push_back(swap);
  return out;
}

bool SnTable::contains(BallTable::Index i) const {
  return std::binary_search(elements.begin(), elements.end(), SnEntry{i, {}, 0, 1},
                            [](const SnEntry& x, const SnEntry& y) { return x.index < y.index; });
}

CrossingCensus crossing_census(const BallTable& ball, int radius) {
  if (radius > ball.radius()) throw std::invalid_argument("census radius exceeds the ball");
  CrossingCensus census;
  census.radius = radius;
  const std::size_t n = ball.count_within(radius);
  census.crossing_number.assign(n, 0);
  census.power.assign(n, 1);
  for (std::size_t i = 1; i < n; ++i) {
    const auto idx = static_cast<BallTable::Index>(i);
    const auto inv = ball.inverse_of(idx);
    if (inv < idx) {  // cr(w^{-1}) = cr(w)
      census.crossing_number[i] = census.crossing_number[inv];
      census.power[i] = census.power[inv];
      continue;
    }
    const CrossingReport r = crossing_number(ball.normal_form(idx), ball.rep());
    if (!r.stabilized) {
      throw GeometryError("crossing count did not stabilize for " +
                          format_word(ball.normal_form(idx)));
    }
    census.crossing_number[i] = r.crossing_number;
    census.power[i] = r.power;
  }
  return census;
}

SnTable enumerate_Sn(int n, bool primitive_only, const BallTable& ball,
                     const CrossingCensus& census) {
  SnTable t;
  t.n = n;
  t.radius = census.radius;
  t.primitive_only = primitive_only;
  for (std::size_t i = 1; i < census.crossing_number.size(); ++i) {
    if (census.crossing_number[i] > n) continue;
    if (primitive_only && census.power[i] != 1) continue;
    const auto idx = static_cast<BallTable::Index>(i);
    t.elements.push_back({idx, ball.normal_form(idx), census.crossing_number[i], census.power[i]});
  }
  for (const SnEntry& e : t.elements) {
    if (!t.contains(ball.inverse_of(e.index))) throw std::logic_error("S_n table is not symmetric");
  }
  return t;
}

}  // namespace surfgroup
