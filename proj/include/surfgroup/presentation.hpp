#pragma once

#include <array>
#include <vector>

#include "surfgroup/word.hpp"

namespace surfgroup {

// Standard one-relator presentation <a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>.
class SurfacePresentation {
 public:
  explicit SurfacePresentation(int genus);

  int genus() const { return genus_; }
  int rank() const { return 2 * genus_; }
  int num_letters() const { return 4 * genus_; }
  const Word& relator() const { return relator_; }
  // All cyclic permutations of the relator and of its inverse (8g words).
  const std::vector<Word>& relator_cyclings() const { return cyclings_; }
  // Letters in shortlex rank order.
  const std::vector<Letter>& alphabet() const { return alphabet_; }

  bool valid_letter(Letter l) const { return l != 0 && letter_index(l) <= rank(); }

  // Dehn's algorithm: free reduction plus replacement of any subword that is
  // strictly more than half of a relator cycling by the shorter complement.
  // Returns the empty word iff w is the identity.
  Word dehn_reduce(const Word& w) const;
  bool is_identity(const Word& w) const { return dehn_reduce(w).empty(); }
  bool equal(const Word& u, const Word& v) const { return is_identity(u * v.inverse()); }

  // Conjugation-invariant version: also removes cyclic cancellations and
  // cyclic long relator pieces. w = conjugator * core * conjugator^{-1}.
  CyclicSplit cyclic_dehn_reduce(const Word& w) const;

 private:
  // Length of the longest prefix of w[pos..] that reads along the cyclic
  // relator family `family` (0 = relator, 1 = inverse) starting at letter w[pos].
  std::size_t match_length(const std::vector<Letter>& w, std::size_t pos, int family,
                           std::size_t limit) const;

  int genus_;
  Word relator_;
  std::array<Word, 2> families_;
  std::array<std::vector<int>, 2> position_;  // letter -> index in family, via letter + rank()
  std::vector<Word> cyclings_;
  std::vector<Letter> alphabet_;
};

}  // namespace surfgroup
