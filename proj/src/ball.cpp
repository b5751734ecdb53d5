#include "surfgroup/ball.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace surfgroup {

namespace {

// Element bookkeeping cost used for the byte cap: parent, letter, length,
// matrix, adjacency row, inverse, and a hash node.
std::size_t bytes_per_element(std::size_t stride) {
  return sizeof(BallTable::Index) * (2 + stride) + 2 + sizeof(Isometry) + 48;
}

// Sign-invariant, generic positive form in the matrix entries; its log is
// quantized into buckets of relative width 1e-8.
double key_form(const Isometry& m) {
  return m.norm2() + 0.37 * m.a * m.b - 0.29 * m.c * m.d + 0.41 * m.a * m.c - 0.23 * m.b * m.d;
}

constexpr double kBucketScale = 1e8;

}  // namespace

std::int64_t BallTable::bucket(const Isometry& m) {
  return std::llround(std::log(key_form(m)) * kBucketScale);
}

Word BallTable::normal_form(Index i) const {
  std::vector<Letter> out(length_[i]);
  for (std::size_t k = out.size(); k > 0; --k) {
    out[k - 1] = last_[i];
    i = parent_[i];
  }
  return Word(std::move(out));
}

std::optional<BallTable::Index> BallTable::lookup(const Word& w, const Isometry& image) const {
  const std::int64_t k = bucket(image);
  const auto& pres = presentation();
  for (std::int64_t b = k - 1; b <= k + 1; ++b) {
    auto [lo, hi] = index_.equal_range(b);
    for (auto it = lo; it != hi; ++it) {
      Word probe = w;
      probe.append(normal_form(it->second).inverse());
      if (pres.is_identity(probe)) return it->second;
    }
  }
  return std::nullopt;
}

void BallTable::finish() {
  const std::size_t n = parent_.size();
  length_.assign(n, 0);
  matrix_.assign(n, Isometry::identity());
  index_.clear();
  index_.reserve(n);
  layer_end_.assign(static_cast<std::size_t>(radius_) + 1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const Index p = parent_[i];
    if (p >= i) throw std::runtime_error("ball data: parent after child");
    length_[i] = static_cast<std::uint8_t>(length_[p] + 1);
    if (length_[i] < length_[i - 1] || length_[i] > radius_) {
      throw std::runtime_error("ball data: lengths out of order");
    }
    matrix_[i] = matrix_[p] * rep_.image(last_[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    index_.emplace(bucket(matrix_[i]), static_cast<Index>(i));
    ++layer_end_[length_[i]];
  }
  std::partial_sum(layer_end_.begin(), layer_end_.end(), layer_end_.begin());
  // every edge must have its reverse
  const auto& alphabet = presentation().alphabet();
  for (std::size_t i = 0; i < n; ++i) {
    for (Letter l : alphabet) {
      const Index j = neighbor(static_cast<Index>(i), l);
      if (j == kNone) continue;
      if (j >= n || neighbor(j, inverse_letter(l)) != i) {
        throw std::runtime_error("ball data: adjacency is not symmetric");
      }
    }
  }
  inverse_.assign(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (inverse_[i] != kNone) continue;
    const Index j = multiply(0, normal_form(static_cast<Index>(i)).inverse());
    if (j == kNone) throw std::runtime_error("ball data: inverse leaves the ball");
    inverse_[i] = j;
    inverse_[j] = static_cast<Index>(i);
  }
}

BallTable BallTable::enumerate(const FuchsianRep& rep, int radius, const BallLimits& limits,
                               TraversalOrder order) {
  if (radius < 0 || radius > 250) throw std::invalid_argument("ball radius out of range");
  BallTable t(rep);
  t.radius_ = radius;
  const auto& pres = rep.presentation();
  t.stride_ = static_cast<std::size_t>(pres.num_letters());
  const std::size_t per = bytes_per_element(t.stride_);
  std::vector<Letter> letters = pres.alphabet();
  if (order == TraversalOrder::kReversed) std::reverse(letters.begin(), letters.end());

  t.parent_ = {kNone};
  t.last_ = {0};
  t.length_ = {0};
  t.matrix_ = {Isometry::identity()};
  t.adjacency_.assign(t.stride_, kNone);
  t.index_.emplace(bucket(Isometry::identity()), 0);

  std::size_t layer_begin = 0;
  for (int r = 0; r <= radius; ++r) {
    const std::size_t layer_end = t.parent_.size();
    // new elements of length r + 1, keyed separately until they are sorted
    std::unordered_multimap<std::int64_t, Index> fresh;
    std::vector<Index> order_in_layer(layer_end - layer_begin);
    std::iota(order_in_layer.begin(), order_in_layer.end(), static_cast<Index>(layer_begin));
    if (order == TraversalOrder::kReversed) {
      std::reverse(order_in_layer.begin(), order_in_layer.end());
    }
    for (Index x : order_in_layer) {
      const Word nf = t.normal_form(x);
      for (Letter l : letters) {
        const std::size_t slot = static_cast<std::size_t>(x) * t.stride_ + letter_rank(l);
        if (r > 0 && l == inverse_letter(t.last_[x])) {
          t.adjacency_[slot] = t.parent_[x];
          continue;
        }
        Word cand = nf;
        cand.push_back(l);
        const Isometry m = t.matrix_[x] * rep.image(l);
        if (auto hit = t.lookup(cand, m)) {
          t.adjacency_[slot] = *hit;
          continue;
        }
        // among elements created in this pass
        const std::int64_t k = bucket(m);
        Index found = kNone;
        for (std::int64_t b = k - 1; b <= k + 1 && found == kNone; ++b) {
          auto [lo, hi] = fresh.equal_range(b);
          for (auto it = lo; it != hi; ++it) {
            Word probe = cand;
            const Index y = it->second;
            Word ynf = t.normal_form(t.parent_[y]);
            ynf.push_back(t.last_[y]);
            probe.append(ynf.inverse());
            if (pres.is_identity(probe)) {
              found = y;
              break;
            }
          }
        }
        if (found != kNone) {
          t.adjacency_[slot] = found;
          // layer r is sorted, so comparing parents by index is shortlex
          const Index p = t.parent_[found];
          if (x < p || (x == p && letter_rank(l) < letter_rank(t.last_[found]))) {
            t.parent_[found] = x;
            t.last_[found] = l;
          }
          continue;
        }
        if (r == radius) continue;  // outside the ball
        const std::size_t n = t.parent_.size() + 1;
        if (n > limits.max_elements || n * per > limits.max_bytes) {
          throw ResourceLimitError("ball of radius " + std::to_string(radius) +
                                   " exceeds the resource limits at " + std::to_string(n) +
                                   " elements");
        }
        const auto y = static_cast<Index>(t.parent_.size());
        t.parent_.push_back(x);
        t.last_.push_back(l);
        t.length_.push_back(static_cast<std::uint8_t>(r + 1));
        t.matrix_.push_back(m);
        t.adjacency_.resize(t.adjacency_.size() + t.stride_, kNone);
        fresh.emplace(k, y);
        t.adjacency_[slot] = y;
      }
    }
    // sort the new layer by normal form: (parent index, last letter rank)
    const std::size_t new_end = t.parent_.size();
    const std::size_t count = new_end - layer_end;
    std::vector<Index> perm(count);
    std::iota(perm.begin(), perm.end(), static_cast<Index>(layer_end));
    std::sort(perm.begin(), perm.end(), [&](Index u, Index v) {
      if (t.parent_[u] != t.parent_[v]) return t.parent_[u] < t.parent_[v];
      return letter_rank(t.last_[u]) < letter_rank(t.last_[v]);
    });
    std::vector<Index> new_id(count);
    for (std::size_t i = 0; i < count; ++i) new_id[perm[i] - layer_end] = static_cast<Index>(layer_end + i);
    std::vector<Index> parents(count);
    std::vector<Letter> lasts(count);
    for (std::size_t i = 0; i < count; ++i) {
      parents[i] = t.parent_[perm[i]];
      lasts[i] = t.last_[perm[i]];
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t y = layer_end + i;
      t.parent_[y] = parents[i];
      t.last_[y] = lasts[i];
      // recomputed from the normal form so the matrix does not depend on the traversal
      t.matrix_[y] = t.matrix_[parents[i]] * rep.image(lasts[i]);
      t.index_.emplace(bucket(t.matrix_[y]), static_cast<Index>(y));
    }
    for (std::size_t s = layer_begin * t.stride_; s < layer_end * t.stride_; ++s) {
      Index& e = t.adjacency_[s];
      if (e != kNone && e >= layer_end) e = new_id[e - layer_end];
    }
    layer_begin = layer_end;
    if (count == 0) break;
  }
  t.finish();
  return t;
}

BallTable BallTable::from_parts(const FuchsianRep& rep, int radius, std::vector<Index> parents,
                                std::vector<Letter> last_letters, std::vector<Index> adjacency) {
  BallTable t(rep);
  t.radius_ = radius;
  t.stride_ = static_cast<std::size_t>(rep.presentation().num_letters());
  const std::size_t n = parents.size();
  if (n == 0 || last_letters.size() != n || adjacency.size() != n * t.stride_) {
    throw std::runtime_error("ball data: inconsistent sizes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!rep.presentation().valid_letter(last_letters[i])) {
      throw std::runtime_error("ball data: bad letter");
    }
  }
  t.parent_ = std::move(parents);
  t.last_ = std::move(last_letters);
  t.adjacency_ = std::move(adjacency);
  t.finish();
  return t;
}

BallTable::Index BallTable::multiply(Index start, const Word& w) const {
  Index x = start;
  for (Letter l : w) {
    x = neighbor(x, l);
    if (x == kNone) return kNone;
  }
  return x;
}

std::optional<BallTable::Index> BallTable::find(const Word& w) const {
  return find(w, rep_.evaluate(w));
}

std::optional<BallTable::Index> BallTable::find(const Word& w, const Isometry& image) const {
  return lookup(w, image);
}

int BallTable::word_length(const Word& w) const {
  if (auto i = find(w)) return length_[*i];
  const Word r = presentation().dehn_reduce(w);
  throw OutOfBallError("element outside the ball of radius " + std::to_string(radius_),
                       static_cast<int>(r.size()));
}

std::size_t BallTable::approx_bytes() const { return size() * bytes_per_element(stride_); }

std::optional<Word> are_conjugate(const Word& u, const Word& v, const BallTable& ball) {
  const auto& rep = ball.rep();
  const Isometry mu = rep.evaluate(u), mv = rep.evaluate(v);
  const double scale = std::max(1.0, std::sqrt(mv.norm2()));
  if (std::abs(std::abs(mu.trace()) - std::abs(mv.trace())) > 1e-7 * scale) return std::nullopt;
  const auto& pres = ball.presentation();
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Isometry& g = ball.matrix(static_cast<BallTable::Index>(i));
    const Isometry c = g * mu * g.inverse();
    if (projective_distance(c, mv) > 1e-7 * std::max(1.0, g.norm2()) * scale) continue;
    const Word gw = ball.normal_form(static_cast<BallTable::Index>(i));
    if (pres.is_identity(gw * u * gw.inverse() * v.inverse())) return gw;
  }
  return std::nullopt;
}

}  // namespace surfgroup
