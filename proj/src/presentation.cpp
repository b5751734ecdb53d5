#include "surfgroup/presentation.hpp"

#include <stdexcept>

namespace surfgroup {

SurfacePresentation::SurfacePresentation(int genus) : genus_(genus) {
  if (genus < 2 || genus > 30) throw std::invalid_argument("genus must be in 2..30");
  for (int k = 1; k <= genus; ++k) {
    const auto a = static_cast<Letter>(2 * k - 1);
    const auto b = static_cast<Letter>(2 * k);
    relator_.push_back(a);
    relator_.push_back(b);
    relator_.push_back(inverse_letter(a));
    relator_.push_back(inverse_letter(b));
  }
  families_[0] = relator_;
  families_[1] = relator_.inverse();
  const int n = static_cast<int>(relator_.size());
  for (int f = 0; f < 2; ++f) {
    position_[f].assign(2 * rank() + 1, -1);
    for (int i = 0; i < n; ++i) position_[f][families_[f][i] + rank()] = i;
    for (int i = 0; i < n; ++i) cyclings_.push_back(rotate(families_[f], i));
  }
  for (int r = 0; r < num_letters(); ++r) alphabet_.push_back(letter_from_rank(r));
}

std::size_t SurfacePresentation::match_length(const std::vector<Letter>& w, std::size_t pos,
                                              int family, std::size_t limit) const {
  const auto& fam = families_[family].letters();
  const std::size_t n = fam.size();
  const int start = position_[family][w[pos] + rank()];
  std::size_t k = 1;
  while (k < limit && pos + k < w.size() && w[pos + k] == fam[(start + k) % n]) ++k;
  return k;
}

Word SurfacePresentation::dehn_reduce(const Word& input) const {
  std::vector<Letter> w = free_reduce(input).letters();
  const std::size_t n = relator_.size();
  const std::size_t half = n / 2;
  std::size_t scan_from = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = scan_from; i < w.size() && !changed; ++i) {
      for (int f = 0; f < 2 && !changed; ++f) {
        const std::size_t k = match_length(w, i, f, n);
        if (k <= half) continue;
        // w[i..i+k) = s with s*t = cycling, so s = t^{-1}
        const auto& fam = families_[f].letters();
        const int start = position_[f][w[i] + rank()];
        std::vector<Letter> replacement;
        replacement.reserve(n - k);
        for (std::size_t j = n; j > k; --j) {
          replacement.push_back(inverse_letter(fam[(start + j - 1) % n]));
        }
        std::vector<Letter> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(next.end(), replacement.begin(), replacement.end());
        next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + k), w.end());
        // free reduction only touches the seam; rescan a window around it
        w = free_reduce(Word(std::move(next))).letters();
        scan_from = i > n ? i - n : 0;
        changed = true;
      }
    }
  }
  return Word(std::move(w));
}

CyclicSplit SurfacePresentation::cyclic_dehn_reduce(const Word& input) const {
  Word conj;
  Word core = dehn_reduce(input);
  const std::size_t n = relator_.size();
  while (true) {
    CyclicSplit split = cyclic_reduce(core);
    conj = conj * split.conjugator;
    core = split.core;
    if (core.size() <= n / 2) break;
    // look for a cyclic subword longer than half a relator
    std::vector<Letter> doubled = (core * core).letters();
    bool found = false;
    for (std::size_t i = 0; i < core.size() && !found; ++i) {
      for (int f = 0; f < 2 && !found; ++f) {
        const std::size_t k = match_length(doubled, i, f, std::min(n, core.size()));
        if (k > n / 2) {
          // rotate so the piece starts the word, then reduce linearly
          const Word prefix = core.subword(0, i);
          conj = conj * prefix;
          core = dehn_reduce(rotate(core, i));
          found = true;
        }
      }
    }
    if (!found) break;
  }
  return {free_reduce(conj), core};
}

}  // namespace surfgroup
