#include "surfgroup/quasimorphism.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace surfgroup {

PathPattern::PathPattern(Word word) : word_(std::move(word)) {
  if (word_.size() < 2) throw std::invalid_argument("a path pattern needs length >= 2");
  for (Letter l : word_) {
    if (l == 0) throw std::invalid_argument("bad letter in path pattern");
  }
}

MatchAutomaton::MatchAutomaton(const PathPattern& p, int num_letters)
    : length_(p.length()), stride_(static_cast<std::size_t>(num_letters)) {
  const Word& w = p.word();
  for (Letter l : w) {
    if (static_cast<std::size_t>(letter_rank(l)) >= stride_) {
      throw std::invalid_argument("pattern letter outside the alphabet");
    }
  }
  table_.assign(static_cast<std::size_t>(length_) * stride_, 0);
  auto at = [&](int s, int rank) -> int& {
    return table_[static_cast<std::size_t>(s) * stride_ + static_cast<std::size_t>(rank)];
  };
  at(0, letter_rank(w[0])) = 1;
  int fallback = 0;
  for (int j = 1; j < length_; ++j) {
    for (std::size_t c = 0; c < stride_; ++c) at(j, static_cast<int>(c)) = at(fallback, static_cast<int>(c));
    at(j, letter_rank(w[static_cast<std::size_t>(j)])) = j + 1;
    fallback = at(fallback, letter_rank(w[static_cast<std::size_t>(j)]));
    if (fallback == length_) fallback = 0;
  }
}

int count_disjoint_copies(const Word& w, const PathPattern& p) {
  const std::size_t n = w.size(), L = static_cast<std::size_t>(p.length());
  int count = 0;
  std::size_t i = 0;
  while (i + L <= n) {
    if (std::equal(p.word().begin(), p.word().end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
      i += L;
    } else {
      ++i;
    }
  }
  return count;
}

ElementIndex::ElementIndex(const FuchsianRep& rep, const BallTable* ball)
    : rep_(rep), ball_(ball), stride_(static_cast<std::size_t>(rep.presentation().num_letters())) {}

int ElementIndex::add(Word canonical, BallTable::Index ball_index, const Isometry& m) {
  const int id = static_cast<int>(nodes_.size());
  const int len = static_cast<int>(canonical.size());
  nodes_.push_back({std::move(canonical), len, ball_index, m});
  next_.resize(next_.size() + stride_, -1);
  return id;
}

namespace {

// A sign-invariant projection of the normalized matrix; equal elements land
// in the same or an adjacent bucket.
std::int64_t matrix_bucket(const Isometry& m) {
  const double n2 = m.norm2();
  const double s = ((m.a * m.a - m.d * m.d) + 0.7548776662 * (m.b * m.b - m.c * m.c) +
                    0.5698402910 * (m.a * m.b + m.c * m.d) + 0.3221853546 * (m.a * m.c + m.b * m.d)) /
                   n2;
  return static_cast<std::int64_t>(std::floor(s * 1e5));
}

bool same_up_to_sign(const Isometry& x, const Isometry& y) {
  const double tol = 1e-6 * std::sqrt(std::max(x.norm2(), y.norm2()));
  auto close = [&](double sgn) {
    return std::abs(x.a - sgn * y.a) + std::abs(x.b - sgn * y.b) + std::abs(x.c - sgn * y.c) +
               std::abs(x.d - sgn * y.d) <=
           tol;
  };
  return close(1) || close(-1);
}

}  // namespace

int ElementIndex::intern(const Word& w) { return intern(w, rep_.evaluate(w)); }

int ElementIndex::intern(const Word& w, const Isometry& m) {
  if (ball_ != nullptr) {
    if (auto i = ball_->find(w, m)) {
      auto [it, fresh] = by_ball_.try_emplace(*i, 0);
      if (fresh) it->second = add(ball_->normal_form(*i), *i, ball_->matrix(*i));
      return it->second;
    }
  }
  // Floating point only proposes candidates; Dehn's algorithm decides.
  const std::int64_t key = matrix_bucket(m);
  for (std::int64_t k = key - 1; k <= key + 1; ++k) {
    auto [lo, hi] = by_matrix_.equal_range(k);
    for (auto it = lo; it != hi; ++it) {
      const Node& n = nodes_[static_cast<std::size_t>(it->second)];
      if (same_up_to_sign(n.matrix, m) && rep_.presentation().equal(n.word, w)) return it->second;
    }
  }
  Word g = rep_.geodesic_word(w);
  if (ball_ != nullptr && static_cast<int>(g.size()) <= ball_->radius()) {
    throw std::logic_error("element of length " + std::to_string(g.size()) +
                           " missing from the ball");
  }
  const int id = add(std::move(g), BallTable::kNone, m);
  by_matrix_.emplace(key, id);
  return id;
}

int ElementIndex::step(int id, Letter l) {
  const std::size_t slot = static_cast<std::size_t>(id) * stride_ + letter_rank(l);
  if (next_[slot] >= 0) return next_[slot];
  const BallTable::Index bi = nodes_[static_cast<std::size_t>(id)].ball_index;
  int out = -1;
  if (bi != BallTable::kNone) {
    const BallTable::Index j = ball_->neighbor(bi, l);
    if (j != BallTable::kNone) {
      auto [it, fresh] = by_ball_.try_emplace(j, 0);
      if (fresh) it->second = add(ball_->normal_form(j), j, ball_->matrix(j));
      out = it->second;
    }
  }
  if (out < 0) {
    // evaluated from the geodesic word: products along long paths that come
    // back toward the identity lose all relative precision
    Word w = nodes_[static_cast<std::size_t>(id)].word;
    w.push_back(l);
    out = intern(w);
  }
  next_[slot] = out;
  return out;
}

namespace {

// Paths with cost <= d - c0 have at most (d - L c0) / (L - 1) extra steps,
// since a path of length d + e carries at most (d + e) / L copies.
int cost_excess(int d, int c0, int L) { return std::max(0, (d - L * c0) / (L - 1)); }

}  // namespace

CEvaluation c_sigma(const Word& a, const PathPattern& p, const FuchsianRep& rep,
                    const BallTable* ball, const SearchLimits& limits) {
  const auto& pres = rep.presentation();
  const MatchAutomaton automaton(p, pres.num_letters());
  const int L = p.length();
  ElementIndex index(rep, ball);
  const int id0 = index.intern(Word{});
  const int target = index.intern(a);
  const int d = index.length(target);
  const int c0 = count_disjoint_copies(index.word(target), p);

  CEvaluation out;
  out.stats.distance = d;
  out.stats.nominal_excess = d + 4;
  out.stats.excess_bound = std::min(cost_excess(d, c0, L), out.stats.nominal_excess);
  const int bound = d + out.stats.excess_bound;

  // x -> a^{-1} x, so that d(x, a) = length of the image
  std::vector<int> to_target;
  auto partner = [&](int x) -> int& {
    if (static_cast<std::size_t>(x) >= to_target.size()) to_target.resize(index.size() + 64, -1);
    return to_target[static_cast<std::size_t>(x)];
  };
  partner(id0) = index.intern(a.inverse());

  struct State {
    int x, q, cost, len, parent;
    Letter letter;
  };
  std::vector<State> states;
  std::unordered_map<std::int64_t, int> state_of;
  auto key = [&](int x, int q) { return static_cast<std::int64_t>(x) * L + q; };
  using Entry = std::tuple<int, int, int>;  // cost, len, state
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  states.push_back({id0, 0, 0, 0, -1, 0});
  state_of.emplace(key(id0, 0), 0);
  queue.emplace(0, 0, 0);

  int found = -1;
  while (!queue.empty()) {
    const auto [cost, len, s] = queue.top();
    queue.pop();
    const State cur = states[static_cast<std::size_t>(s)];
    if (cost != cur.cost || len != cur.len) continue;
    ++out.stats.states_expanded;
    if (index.length(partner(cur.x)) == 0) {
      found = s;
      break;
    }
    const int y = partner(cur.x);
    for (Letter l : pres.alphabet()) {
      const int nx = index.step(cur.x, l);
      int& ny = partner(nx);
      if (ny < 0) ny = index.step(y, l);
      if (index.length(nx) + index.length(ny) > bound) continue;
      bool completed = false;
      const int nq = automaton.next(cur.q, l, completed);
      const int ncost = cur.cost + (completed ? 0 : 1);
      const int nlen = cur.len + 1;
      auto [it, fresh] = state_of.try_emplace(key(nx, nq), static_cast<int>(states.size()));
      if (fresh) {
        if (states.size() >= limits.max_states) {
          throw ResourceLimitError("c_sigma search exceeded " + std::to_string(limits.max_states) +
                                   " states");
        }
        states.push_back({nx, nq, ncost, nlen, s, l});
      } else {
        State& t = states[static_cast<std::size_t>(it->second)];
        if (std::tie(ncost, nlen) >= std::tie(t.cost, t.len)) continue;
        t.cost = ncost;
        t.len = nlen;
        t.parent = s;
        t.letter = l;
      }
      queue.emplace(ncost, nlen, it->second);
    }
  }
  if (found < 0) throw std::logic_error("c_sigma search did not reach the target");
  out.stats.elements_seen = index.size();
  std::vector<Letter> letters;
  for (int s = found; states[static_cast<std::size_t>(s)].parent >= 0;
       s = states[static_cast<std::size_t>(s)].parent) {
    letters.push_back(states[static_cast<std::size_t>(s)].letter);
  }
  std::reverse(letters.begin(), letters.end());
  out.realizing_word = Word(std::move(letters));
  const State& fin = states[static_cast<std::size_t>(found)];
  out.copies = fin.len - fin.cost;
  out.value = d - fin.cost;
  return out;
}

QmEvaluation h_sigma(const Word& a, const PathPattern& p, const FuchsianRep& rep,
                     const BallTable* ball, const SearchLimits& limits) {
  QmEvaluation out;
  out.forward = c_sigma(a, p, rep, ball, limits);
  out.backward = c_sigma(a, p.inverse(), rep, ball, limits);
  out.c_sigma = out.forward.value;
  out.c_sigma_inv = out.backward.value;
  out.h_sigma = out.c_sigma - out.c_sigma_inv;
  return out;
}

int required_radius(int pattern_length, int max_length) {
  int need = 0;
  for (int d = 0; d <= max_length; ++d) {
    const int e = std::min(cost_excess(d, 0, pattern_length), d + 4);
    need = std::max(need, d + e / 2);
  }
  return need;
}

std::vector<int> c_sigma_table(const PathPattern& p, const BallTable& ball, int max_length) {
  const int need = required_radius(p.length(), max_length);
  if (ball.radius() < need || max_length > ball.radius()) {
    throw OutOfBallError("c_sigma table up to length " + std::to_string(max_length) +
                             " needs a ball of radius " + std::to_string(need),
                         need);
  }
  const auto& pres = ball.presentation();
  const MatchAutomaton automaton(p, pres.num_letters());
  const auto L = static_cast<std::size_t>(p.length());
  const std::size_t n = ball.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(n * L, kInf);
  std::deque<std::size_t> queue;
  dist[0] = 0;
  queue.push_back(0);
  // 0-1 breadth-first search: completing a copy costs 0, any other step 1
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const auto x = static_cast<BallTable::Index>(s / L);
    const int q = static_cast<int>(s % L);
    const int c = dist[s];
    for (Letter l : pres.alphabet()) {
      const BallTable::Index y = ball.neighbor(x, l);
      if (y == BallTable::kNone) continue;
      bool completed = false;
      const int nq = automaton.next(q, l, completed);
      const std::size_t t = static_cast<std::size_t>(y) * L + static_cast<std::size_t>(nq);
      const int nc = c + (completed ? 0 : 1);
      if (nc >= dist[t]) continue;
      dist[t] = nc;
      if (completed) {
        queue.push_front(t);
      } else {
        queue.push_back(t);
      }
    }
  }
  const std::size_t m = ball.count_within(max_length);
  std::vector<int> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int best = *std::min_element(dist.begin() + static_cast<std::ptrdiff_t>(i * L),
                                       dist.begin() + static_cast<std::ptrdiff_t>((i + 1) * L));
    out[i] = ball.length(static_cast<BallTable::Index>(i)) - best;
  }
  return out;
}

Word shortlex_geodesic(const Word& w, const FuchsianRep& rep, const BallTable* ball) {
  ElementIndex index(rep, ball);
  int x = index.intern(Word{});
  int y = index.intern(w.inverse());  // a^{-1} x
  Word out;
  while (index.length(y) != 0) {
    const int r = index.length(y);
    bool moved = false;
    for (Letter l : rep.presentation().alphabet()) {
      const int ny = index.step(y, l);
      if (index.length(ny) != r - 1) continue;
      x = index.step(x, l);
      y = ny;
      out.push_back(l);
      moved = true;
      break;
    }
    if (!moved) throw std::logic_error("no geodesic step toward the target");
  }
  return out;
}

AxisPattern axis_pattern(const Word& b, int N, const FuchsianRep& rep, const BallTable* ball) {
  if (N < 1) throw std::invalid_argument("axis pattern needs N >= 1");
  const Word bN = power(b, N);
  Word g = shortlex_geodesic(bN, rep, ball);
  if (g.size() < 2) throw std::invalid_argument("axis pattern of length < 2; increase N");
  AxisPattern out{PathPattern(std::move(g))};
  out.length_bN = out.pattern.length();
  out.length_b2N = rep.geodesic_length(power(b, 2 * N));
  out.axis_like = out.length_b2N == 2 * out.length_bN;
  return out;
}

std::vector<int> dyadic_schedule(int max_n) {
  std::vector<int> out;
  for (int n = 1; n <= max_n; n *= 2) out.push_back(n);
  return out;
}

HomogenizationEstimate homogenize(const PathPattern& p, const Word& a,
                                  const std::vector<int>& schedule, const FuchsianRep& rep,
                                  const BallTable* ball, const SearchLimits& limits) {
  HomogenizationEstimate out;
  for (int n : schedule) {
    if (n < 1) throw std::invalid_argument("schedule entries must be positive");
    try {
      out.values.push_back(h_sigma(power(a, n), p, rep, ball, limits).h_sigma);
    } catch (const ResourceLimitError&) {
      out.truncated = true;
      break;
    }
    out.schedule.push_back(n);
  }
  const std::size_t k = out.values.size();
  if (k == 0) {
    out.error = std::numeric_limits<double>::infinity();
    return out;
  }
  auto ratio = [&](std::size_t i) { return static_cast<double>(out.values[i]) / out.schedule[i]; };
  out.limit = ratio(k - 1);
  out.error = k >= 2 ? std::abs(ratio(k - 1) - ratio(k - 2)) : std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i < k; ++i) {
    if (std::abs(ratio(i) - ratio(i - 1)) > std::abs(ratio(i - 1) - ratio(i - 2)) + 1e-12) {
      out.cauchy = false;
    }
  }
  return out;
}

double defect_estimate(const PathPattern& p, const std::vector<std::pair<Word, Word>>& samples,
                       const FuchsianRep& rep, const BallTable* ball, const SearchLimits& limits) {
  double worst = 0;
  for (const auto& [x, y] : samples) {
    const int hx = h_sigma(x, p, rep, ball, limits).h_sigma;
    const int hy = h_sigma(y, p, rep, ball, limits).h_sigma;
    const int hxy = h_sigma(x * y, p, rep, ball, limits).h_sigma;
    worst = std::max(worst, static_cast<double>(std::abs(hx + hy - hxy)));
  }
  return worst;
}

}  // namespace surfgroup
