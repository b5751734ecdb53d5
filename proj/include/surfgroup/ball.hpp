#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "surfgroup/fuchsian.hpp"

namespace surfgroup {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfBallError : public std::runtime_error {
 public:
  OutOfBallError(const std::string& what, int required_radius)
      : std::runtime_error(what), required_radius_(required_radius) {}
  int required_radius() const { return required_radius_; }

 private:
  int required_radius_;
};

struct BallLimits {
  std::size_t max_elements = 20'000'000;
  std::size_t max_bytes = std::size_t{3} << 30;
};

enum class TraversalOrder { kShortlex, kReversed };

// All group elements of word length <= radius, each stored once under its
// shortlex-least geodesic word, with exact lengths and the right-multiplication
// graph. Elements are indexed in shortlex order of their normal forms.
//
// Element identity during construction is decided exactly: a numeric key of
// the Fuchsian image selects candidates, and Dehn's algorithm confirms them.
class BallTable {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNone = 0xffffffffu;

  static BallTable enumerate(const FuchsianRep& rep, int radius, const BallLimits& limits = {},
                             TraversalOrder order = TraversalOrder::kShortlex);

  // Rebuild from stored data (parent index and last letter per entry in index
  // order, plus the adjacency array). Used by the on-disk cache. Throws
  // std::runtime_error when the data is inconsistent.
  static BallTable from_parts(const FuchsianRep& rep, int radius, std::vector<Index> parents,
                              std::vector<Letter> last_letters, std::vector<Index> adjacency);
  const std::vector<Index>& parents() const { return parent_; }
  const std::vector<Letter>& last_letters() const { return last_; }
  const std::vector<Index>& adjacency() const { return adjacency_; }

  int radius() const { return radius_; }
  int genus() const { return rep_.genus(); }
  std::size_t size() const { return length_.size(); }
  const FuchsianRep& rep() const { return rep_; }
  const SurfacePresentation& presentation() const { return rep_.presentation(); }

  int length(Index i) const { return length_[i]; }
  Word normal_form(Index i) const;
  const Isometry& matrix(Index i) const { return matrix_[i]; }
  Index parent(Index i) const { return parent_[i]; }
  Letter last_letter(Index i) const { return last_[i]; }
  // x * letter, or kNone when that element lies outside the ball.
  Index neighbor(Index i, Letter l) const {
    return adjacency_[static_cast<std::size_t>(i) * stride_ + letter_rank(l)];
  }
  Index inverse_of(Index i) const { return inverse_[i]; }
  // Number of elements of length <= r.
  std::size_t count_within(int r) const { return layer_end_[static_cast<std::size_t>(r)]; }

  // Follows the adjacency graph; kNone if the path leaves the ball.
  Index multiply(Index start, const Word& w) const;

  std::optional<Index> find(const Word& w) const;
  std::optional<Index> find(const Word& w, const Isometry& image) const;

  // Exact geodesic length; throws OutOfBallError when the element is outside.
  int word_length(const Word& w) const;

  std::size_t approx_bytes() const;

 private:
  explicit BallTable(const FuchsianRep& rep) : rep_(rep) {}

  static std::int64_t bucket(const Isometry& m);
  std::optional<Index> lookup(const Word& w, const Isometry& image) const;
  void finish();

  FuchsianRep rep_;
  int radius_ = 0;
  std::size_t stride_ = 0;
  std::vector<Index> parent_;
  std::vector<Letter> last_;
  std::vector<std::uint8_t> length_;
  std::vector<Isometry> matrix_;
  std::vector<Index> adjacency_;
  std::vector<Index> inverse_;
  std::vector<std::size_t> layer_end_;
  std::unordered_multimap<std::int64_t, Index> index_;
};

// Bounded conjugacy search: some g in the ball with g u g^{-1} = v, or nullopt
// ("not found within radius", not a proof of non-conjugacy).
std::optional<Word> are_conjugate(const Word& u, const Word& v, const BallTable& ball);

}  // namespace surfgroup
