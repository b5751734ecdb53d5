#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>

#include "surfgroup/quasimorphism.hpp"

using namespace surfgroup;

namespace {

const FuchsianRep& rep() {
  static const FuchsianRep r = octagon_rep();
  return r;
}

const BallTable& ball6() {
  static const BallTable t = BallTable::enumerate(rep(), 6);
  return t;
}

Word W(const char* s) { return parse_word(s, 2); }

// Maximum disjoint copies by dynamic programming over start positions.
int brute_copies(const Word& w, const Word& p) {
  const std::size_t n = w.size(), L = p.size();
  std::vector<int> best(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    best[i] = best[i + 1];
    if (i + L <= n && std::equal(p.begin(), p.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
      best[i] = std::max(best[i], 1 + best[i + L]);
    }
  }
  return best[0];
}

// All words over `letters` of length 2..3.
std::vector<Word> patterns_over(const std::vector<Letter>& letters) {
  std::vector<Word> out;
  for (Letter x : letters)
    for (Letter y : letters) {
      out.push_back(Word{x, y});
      for (Letter z : letters) out.push_back(Word{x, y, z});
    }
  return out;
}

// Exhaustive oracle: for every element a of length <= max_d, c_sigma(a)
// computed over all words of length <= 2 d(a) + 4, by layered dynamic
// programming of the maximum copy count per (word length, endpoint, match
// state). No pruning region is used.
std::vector<int> exhaustive_c(const PathPattern& p, const BallTable& ball, int max_d) {
  const int T = 2 * max_d + 4;
  const MatchAutomaton m(p, ball.presentation().num_letters());
  const auto L = static_cast<std::size_t>(p.length());
  const std::size_t n = ball.size();
  const std::size_t targets = ball.count_within(max_d);
  std::vector<int> cur(n * L, -1), next(n * L, -1);
  std::vector<int> best_cost(targets, 1 << 20);
  cur[0] = 0;
  for (int t = 0; t <= T; ++t) {
    for (std::size_t i = 0; i < targets; ++i) {
      const int d = ball.length(static_cast<BallTable::Index>(i));
      if (t > 2 * d + 4) continue;
      for (std::size_t q = 0; q < L; ++q) {
        if (cur[i * L + q] >= 0) best_cost[i] = std::min(best_cost[i], t - cur[i * L + q]);
      }
    }
    if (t == T) break;
    std::fill(next.begin(), next.end(), -1);
    for (std::size_t s = 0; s < n * L; ++s) {
      if (cur[s] < 0) continue;
      const auto x = static_cast<BallTable::Index>(s / L);
      // the walk must still be able to end within max_d of id
      if (ball.length(x) > max_d + (T - t)) continue;
      for (Letter l : ball.presentation().alphabet()) {
        const auto y = ball.neighbor(x, l);
        if (y == BallTable::kNone) {
          // leaving the ball is only harmless if no target is reachable
          REQUIRE(ball.radius() + 1 > max_d + (T - t - 1));
          continue;
        }
        bool done = false;
        const int nq = m.next(static_cast<int>(s % L), l, done);
        const std::size_t u = static_cast<std::size_t>(y) * L + static_cast<std::size_t>(nq);
        next[u] = std::max(next[u], cur[s] + (done ? 1 : 0));
      }
    }
    std::swap(cur, next);
  }
  std::vector<int> out(targets);
  for (std::size_t i = 0; i < targets; ++i) {
    out[i] = ball.length(static_cast<BallTable::Index>(i)) - best_cost[i];
  }
  return out;
}

}  // namespace

TEST_CASE("disjoint copies") {
  CHECK(count_disjoint_copies(W("a1 b1 a1 b1 a1 b1"), PathPattern(W("a1 b1"))) == 3);
  CHECK(count_disjoint_copies(W("a1 b1 a1 b1 a1"), PathPattern(W("a1 b1 a1"))) == 1);
  CHECK(count_disjoint_copies(W("a1"), PathPattern(W("a1 b1 a1"))) == 0);
  CHECK_THROWS_AS(PathPattern(W("a1")), std::invalid_argument);

  // greedy counting and the automaton agree with brute force on all words of
  // length <= 12 over two letters, for every pattern of length 2..4
  const std::vector<Letter> two{1, 2};
  std::vector<Word> pats = patterns_over(two);
  for (int mask = 0; mask < 16; ++mask) {
    Word p;
    for (int k = 0; k < 4; ++k) p.push_back(two[static_cast<std::size_t>((mask >> k) & 1)]);
    pats.push_back(p);
  }
  for (const Word& pw : pats) {
    const PathPattern p(pw);
    const MatchAutomaton m(p, 8);
    for (int len = 0; len <= 12; ++len) {
      for (int bits = 0; bits < (1 << len); ++bits) {
        Word w;
        for (int k = 0; k < len; ++k) w.push_back(two[static_cast<std::size_t>((bits >> k) & 1)]);
        const int expect = brute_copies(w, pw);
        REQUIRE(count_disjoint_copies(w, p) == expect);
        int q = 0, run = 0;
        for (Letter l : w) {
          bool done = false;
          q = m.next(q, l, done);
          run += done;
        }
        REQUIRE(run == expect);
      }
    }
  }
}

TEST_CASE("c_sigma examples") {
  const PathPattern aa(W("a1 a1"));
  CHECK(c_sigma(Word{}, aa, rep()).value == 0);
  CHECK(h_sigma(Word{}, aa, rep()).h_sigma == 0);
  const Word a4 = power(W("a1"), 4);
  const CEvaluation c = c_sigma(a4, aa, rep(), &ball6());
  CHECK(c.value == 2);
  CHECK(c.realizing_word == a4);
  CHECK(c_sigma(a4, aa.inverse(), rep(), &ball6()).value == 0);
  const QmEvaluation h = h_sigma(a4, aa, rep(), &ball6());
  CHECK(h.c_sigma == 2);
  CHECK(h.c_sigma_inv == 0);
  CHECK(h.h_sigma == 2);
  // the same values without a ball, from the tiling walk alone
  CHECK(h_sigma(a4, aa, rep()).h_sigma == 2);
}

TEST_CASE("c_sigma equals the exhaustive oracle") {
  const BallTable& ball = ball6();
  const int max_d = 3;
  const std::vector<Letter> sub{1, 2};  // a1, b1
  for (const Word& pw : patterns_over(sub)) {
    const PathPattern p(pw);
    CAPTURE(format_word(pw));
    const std::vector<int> oracle = exhaustive_c(p, ball, max_d);
    const std::vector<int> table = c_sigma_table(p, ball, max_d);
    REQUIRE(table.size() == oracle.size());
    int disagreements = 0;
    for (std::size_t i = 0; i < oracle.size(); ++i) disagreements += table[i] != oracle[i];
    CHECK(disagreements == 0);
    // single-target searches on a spread of elements
    for (std::size_t i = 0; i < oracle.size(); i += 37) {
      const Word a = ball.normal_form(static_cast<BallTable::Index>(i));
      const CEvaluation c = c_sigma(a, p, rep(), &ball);
      CHECK(c.value == oracle[i]);
      CHECK(rep().presentation().equal(c.realizing_word, a));
      CHECK(count_disjoint_copies(c.realizing_word, p) == c.copies);
      CHECK(static_cast<int>(c.realizing_word.size()) - c.copies == c.stats.distance - c.value);
      CHECK(c.value >= count_disjoint_copies(a, p));
      CHECK(c.value >= 0);
    }
  }
}

TEST_CASE("antisymmetry and witness bounds") {
  std::mt19937_64 rng(9);
  const std::vector<Word> pats = {W("a1 a1"), W("a1 b1"), W("a1 b1 A1"), W("b2 a2 a2")};
  for (int s = 0; s < 60; ++s) {
    const Word a = rep().presentation().dehn_reduce(random_word(2, 1 + s % 6, rng()));
    const PathPattern p(pats[static_cast<std::size_t>(s) % pats.size()]);
    const QmEvaluation h = h_sigma(a, p, rep(), &ball6());
    const QmEvaluation hi = h_sigma(a.inverse(), p, rep(), &ball6());
    CAPTURE(format_word(a));
    CHECK(hi.h_sigma == -h.h_sigma);
    CHECK(hi.c_sigma == h.c_sigma_inv);
    CHECK(h.c_sigma >= count_disjoint_copies(ball6().normal_form(*ball6().find(a)), p));
  }
}

TEST_CASE("no room for a copy gives zero") {
  // a pattern longer than any admissible path
  const PathPattern p(W("a2 b2 a2 b2 a2 b2 a2 b2 a2 b2"));
  for (const char* s : {"a1", "a1 b1", "a1 b1 A1", "b2 a2 B2"}) {
    const CEvaluation c = c_sigma(W(s), p, rep(), &ball6());
    CHECK(c.stats.distance + c.stats.excess_bound < p.length());
    CHECK(c.value == 0);
  }
}

TEST_CASE("axis patterns and homogenization") {
  const AxisPattern ap = axis_pattern(W("a1"), 3, rep(), &ball6());
  CHECK(ap.pattern.word() == W("a1 a1 a1"));
  CHECK(ap.axis_like);
  CHECK(ap.length_b2N == 6);
  CHECK_FALSE(axis_pattern(W("a1 b1 A1"), 1, rep(), &ball6()).axis_like);
  CHECK_THROWS_AS(axis_pattern(W("a1"), 1, rep()), std::invalid_argument);
  CHECK(shortlex_geodesic(W("a1 b1 A1 B1 a2 b2 A2"), rep()) == W("b2"));
  CHECK(shortlex_geodesic(W("B2 A2 b2"), rep(), &ball6()) == ball6().normal_form(*ball6().find(W("B2 A2 b2"))));

  const PathPattern aa(W("a1 a1"));
  for (int m = 1; m <= 4; ++m) {
    CHECK(h_sigma(power(W("a1"), 2 * m), aa, rep(), &ball6()).h_sigma == m);
  }
  const HomogenizationEstimate h = homogenize(aa, W("a1"), dyadic_schedule(8), rep(), &ball6());
  CHECK(h.schedule == std::vector<int>{1, 2, 4, 8});
  CHECK(h.limit == 0.5);
  CHECK(h.error == 0);
  CHECK_FALSE(h.truncated);
  CHECK(h.cauchy);

  const HomogenizationEstimate id = homogenize(aa, Word{}, dyadic_schedule(4), rep(), &ball6());
  CHECK(id.limit == 0);
  CHECK(id.error == 0);

  const HomogenizationEstimate other = homogenize(aa, W("a2 b2"), dyadic_schedule(4), rep(), &ball6());
  CHECK(other.limit == 0);
  CHECK(other.error == 0);

  SearchLimits tiny;
  tiny.max_states = 50;
  const HomogenizationEstimate cut = homogenize(aa, W("a1"), dyadic_schedule(8), rep(), &ball6(), tiny);
  CHECK(cut.truncated);
  CHECK(cut.schedule.size() < 4);
}

TEST_CASE("defect estimates") {
  const PathPattern aa(W("a1 a1"));
  CHECK(defect_estimate(aa, {{Word{}, Word{}}}, rep()) == 0);
  CHECK(defect_estimate(aa, {{W("a1 a1"), W("a1 a1")}}, rep(), &ball6()) == 0);

  // a baseline from one sample set bounds a fresh one up to a factor 2
  std::mt19937_64 rng(12);
  auto pairs = [&](int count) {
    std::vector<std::pair<Word, Word>> out;
    for (int i = 0; i < count; ++i) {
      out.emplace_back(random_word(2, 1 + static_cast<int>(rng() % 3), rng()),
                       random_word(2, 1 + static_cast<int>(rng() % 3), rng()));
    }
    return out;
  };
  for (const char* s : {"a1 a1", "a1 b1", "a1 b1 A1", "a1 a2 b1 b2", "a1 b1 a1 b1 a1"}) {
    const PathPattern p(W(s));
    const double base = defect_estimate(p, pairs(100), rep(), &ball6());
    const double fresh = defect_estimate(p, pairs(100), rep(), &ball6());
    CAPTURE(s);
    CHECK(base <= 4);
    CHECK(fresh <= 2 * std::max(base, 1.0));
  }
}

TEST_CASE("search limits and ball size") {
  SearchLimits tiny;
  tiny.max_states = 10;
  CHECK_THROWS_AS(c_sigma(power(W("a1"), 4), PathPattern(W("A1 A1")), rep(), &ball6(), tiny),
                  ResourceLimitError);
  const BallTable small = BallTable::enumerate(rep(), 4);
  try {
    c_sigma_table(PathPattern(W("a1 a1")), small, 4);
    FAIL("expected OutOfBallError");
  } catch (const OutOfBallError& e) {
    CHECK(e.required_radius() == required_radius(2, 4));
    CHECK(e.required_radius() == 6);
  }
}
