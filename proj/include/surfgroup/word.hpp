#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace surfgroup {

// A letter is a nonzero small integer: +i is the i-th standard generator,
// -i its inverse. Odd indices are a_k = 2k-1, even indices are b_k = 2k.
using Letter = std::int8_t;

struct Generator {
  int index = 1;  // 1..2g
  int sign = 1;   // +1 or -1

  Letter letter() const { return static_cast<Letter>(index * sign); }
  static Generator from_letter(Letter l) { return {l > 0 ? l : -l, l > 0 ? 1 : -1}; }
};

inline int letter_index(Letter l) { return l > 0 ? l : -l; }
inline Letter inverse_letter(Letter l) { return static_cast<Letter>(-l); }

// Position of a letter in the fixed alphabet order a1 < A1 < b1 < B1 < a2 < ...
// Shortlex comparisons use this rank.
inline int letter_rank(Letter l) { return 2 * (letter_index(l) - 1) + (l < 0 ? 1 : 0); }
inline Letter letter_from_rank(int rank) {
  auto idx = static_cast<Letter>(rank / 2 + 1);
  return rank % 2 ? static_cast<Letter>(-idx) : idx;
}

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  const std::vector<Letter>& letters() const { return letters_; }

  void push_back(Letter l) { letters_.push_back(l); }
  void pop_back() { letters_.pop_back(); }
  void append(const Word& other) { letters_.insert(letters_.end(), other.begin(), other.end()); }

  Word subword(std::size_t pos, std::size_t len) const;
  Word inverse() const;

  // Byte string usable as a hash key.
  std::string key() const { return {letters_.begin(), letters_.end()}; }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

Word operator*(const Word& u, const Word& v);

// Shortlex order: shorter first, then lexicographic by letter_rank.
bool shortlex_less(const Word& u, const Word& v);
struct ShortlexLess {
  bool operator()(const Word& u, const Word& v) const { return shortlex_less(u, v); }
};

Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);

// w = conjugator * core * conjugator^{-1} with core cyclically (freely) reduced.
struct CyclicSplit {
  Word conjugator;
  Word core;
};
CyclicSplit cyclic_reduce(const Word& w);

Word rotate(const Word& w, std::size_t shift);
Word least_rotation(const Word& w);

// Conjugacy-class representative in the free group: cyclically reduced and
// the shortlex-least rotation.
class CyclicWord {
 public:
  explicit CyclicWord(const Word& w);
  const Word& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  Word letters_;
};

Word power(const Word& w, int k);

// Uniform freely reduced word of the given length over 4*genus letters.
Word random_word(int genus, int length, std::uint64_t seed);

// Text syntax: a1 b1 a2 b2 ..., uppercase for inverses, whitespace separated
// (adjacent tokens like "a1b1" are accepted too). "1" or "" is the identity.
Word parse_word(std::string_view text, int genus);
std::string format_word(const Word& w);

}  // namespace surfgroup
