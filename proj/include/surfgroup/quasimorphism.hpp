#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "surfgroup/ball.hpp"

namespace surfgroup {

// An oriented path in the Cayley graph, given by its edge labels. Length >= 2.
class PathPattern {
 public:
  explicit PathPattern(Word word);
  const Word& word() const { return word_; }
  int length() const { return static_cast<int>(word_.size()); }
  PathPattern inverse() const { return PathPattern(word_.inverse()); }

 private:
  Word word_;
};

// Knuth-Morris-Pratt automaton for one pattern that restarts from the empty
// prefix after each complete copy, so runs count disjoint copies greedily
// from the left.
class MatchAutomaton {
 public:
  MatchAutomaton(const PathPattern& p, int num_letters);
  int states() const { return length_; }  // prefix lengths 0 .. L-1
  // Next state after reading l; `completed` is set when a copy ends here.
  int next(int state, Letter l, bool& completed) const {
    const int s = table_[static_cast<std::size_t>(state) * stride_ + letter_rank(l)];
    completed = s == length_;
    return completed ? 0 : s;
  }

 private:
  int length_;
  std::size_t stride_;
  std::vector<int> table_;
};

// Maximal number of pairwise disjoint occurrences of p as subwords of w.
int count_disjoint_copies(const Word& w, const PathPattern& p);

// Group elements with exact lengths: the ball normal form inside the ball, an
// octagon-walk geodesic word outside it. Outside the ball a matrix bucket
// proposes candidates and Dehn's algorithm confirms equality, so equal
// elements share an id even when the walk picks a different geodesic.
class ElementIndex {
 public:
  ElementIndex(const FuchsianRep& rep, const BallTable* ball);

  int intern(const Word& w);
  int intern(const Word& w, const Isometry& image);
  int step(int id, Letter l);  // id of element(id) * l, cached
  int length(int id) const { return nodes_[static_cast<std::size_t>(id)].length; }
  const Word& word(int id) const { return nodes_[static_cast<std::size_t>(id)].word; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Word word;
    int length;
    BallTable::Index ball_index;
    Isometry matrix;
  };
  int add(Word canonical, BallTable::Index ball_index, const Isometry& m);

  const FuchsianRep& rep_;
  const BallTable* ball_;
  std::size_t stride_;
  std::vector<Node> nodes_;
  std::vector<int> next_;
  std::unordered_map<BallTable::Index, int> by_ball_;
  std::unordered_multimap<std::int64_t, int> by_matrix_;
};

struct SearchLimits {
  std::size_t max_states = 20'000'000;
};

struct SearchStats {
  std::size_t states_expanded = 0;
  std::size_t elements_seen = 0;
  int distance = 0;         // d(id, a)
  int excess_bound = 0;     // paths may exceed d(id, a) by at most this much
  int nominal_excess = 0;     // d + 4 from K <= 2, eps <= 4
};

struct CEvaluation {
  int value = 0;
  Word realizing_word;
  int copies = 0;  // disjoint copies on the realizing word
  SearchStats stats;
};

// c_sigma(a) = d(id, a) - min over paths (length - disjoint copies), by
// Dijkstra over (element, automaton state) restricted to the elements x with
// d(id, x) + d(x, a) <= d(id, a) + excess_bound. Throws ResourceLimitError.
CEvaluation c_sigma(const Word& a, const PathPattern& p, const FuchsianRep& rep,
                    const BallTable* ball = nullptr, const SearchLimits& limits = {});

struct QmEvaluation {
  int c_sigma = 0;
  int c_sigma_inv = 0;
  int h_sigma = 0;
  CEvaluation forward;
  CEvaluation backward;
};

QmEvaluation h_sigma(const Word& a, const PathPattern& p, const FuchsianRep& rep,
                     const BallTable* ball = nullptr, const SearchLimits& limits = {});

// c_sigma for every ball element of length <= max_length in one search over
// the ball. Throws OutOfBallError naming the radius needed when the ball is
// too small to contain every pruning region.
std::vector<int> c_sigma_table(const PathPattern& p, const BallTable& ball, int max_length);
int required_radius(int pattern_length, int max_length);

// Shortlex-least geodesic word for w.
Word shortlex_geodesic(const Word& w, const FuchsianRep& rep, const BallTable* ball = nullptr);

struct AxisPattern {
  PathPattern pattern;
  bool axis_like = false;  // |b^{2N}| = 2 |b^N|
  int length_bN = 0;
  int length_b2N = 0;
};

AxisPattern axis_pattern(const Word& b, int N, const FuchsianRep& rep,
                         const BallTable* ball = nullptr);

struct HomogenizationEstimate {
  std::vector<int> schedule;  // the n actually evaluated
  std::vector<int> values;    // h(a^n)
  double limit = 0;           // h(a^n)/n at the last n
  double error = 0;           // |last - previous| ratio
  bool truncated = false;     // a search hit the limits before the schedule ended
  bool cauchy = true;         // successive deviations nonincreasing
};

std::vector<int> dyadic_schedule(int max_n);

HomogenizationEstimate homogenize(const PathPattern& p, const Word& a,
                                  const std::vector<int>& schedule, const FuchsianRep& rep,
                                  const BallTable* ball = nullptr, const SearchLimits& limits = {});

// Max of |h(x) + h(y) - h(xy)| over the samples; a lower bound for the defect.
double defect_estimate(const PathPattern& p, const std::vector<std::pair<Word, Word>>& samples,
                       const FuchsianRep& rep, const BallTable* ball = nullptr,
                       const SearchLimits& limits = {});

}  // namespace surfgroup
