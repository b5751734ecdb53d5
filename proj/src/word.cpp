#include "surfgroup/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>

namespace surfgroup {

Word Word::subword(std::size_t pos, std::size_t len) const {
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = inverse_letter(l);
  return Word(std::move(out));
}

Word operator*(const Word& u, const Word& v) {
  Word out = u;
  out.append(v);
  return out;
}

bool shortlex_less(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != v[i]) return letter_rank(u[i]) < letter_rank(v[i]);
  }
  return false;
}

Word free_reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter l : w) {
    if (!stack.empty() && stack.back() == inverse_letter(l)) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == inverse_letter(w[i - 1])) return false;
  }
  return true;
}

CyclicSplit cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == inverse_letter(r[hi - 1])) {
    ++lo;
    --hi;
  }
  return {r.subword(0, lo), r.subword(lo, hi - lo)};
}

Word rotate(const Word& w, std::size_t shift) {
  if (w.empty()) return w;
  shift %= w.size();
  std::vector<Letter> out(w.begin() + static_cast<std::ptrdiff_t>(shift), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(shift));
  return Word(std::move(out));
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word r = rotate(w, i);
    if (shortlex_less(r, best)) best = std::move(r);
  }
  return best;
}

CyclicWord::CyclicWord(const Word& w) : letters_(least_rotation(cyclic_reduce(w).core)) {}

Word power(const Word& w, int k) {
  if (k < 0) return power(w.inverse(), -k);
  Word out;
  for (int i = 0; i < k; ++i) out.append(w);
  return out;
}

namespace {

// Unbiased draw in [0, n) from a 64-bit engine; avoids implementation-defined
// distributions so sequences agree across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

Word random_word(int genus, int length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int letters = 4 * genus;
  Word w;
  for (int i = 0; i < length; ++i) {
    if (w.empty()) {
      w.push_back(letter_from_rank(static_cast<int>(draw(rng, letters))));
    } else {
      // skip the rank of the cancelling letter
      const int forbidden = letter_rank(inverse_letter(w.back()));
      int r = static_cast<int>(draw(rng, letters - 1));
      if (r >= forbidden) ++r;
      w.push_back(letter_from_rank(r));
    }
  }
  return w;
}

Word parse_word(std::string_view text, int genus) {
  Word w;
  std::size_t i = 0;
  auto fail = [&](std::size_t start, std::size_t end) {
    throw ParseError("cannot parse word token '" + std::string(text.substr(start, end - start)) +
                     "'");
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '1' && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      ++i;  // explicit identity
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    const bool letter_ok = c == 'a' || c == 'b' || c == 'A' || c == 'B';
    if (!letter_ok) {
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
      fail(start, end);
    }
    if (end == i + 1 || end - i > 4) fail(start, end);
    const int k = std::stoi(std::string(text.substr(i + 1, end - i - 1)));
    if (k < 1 || k > genus) fail(start, end);
    const int index = (c == 'a' || c == 'A') ? 2 * k - 1 : 2 * k;
    const int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    w.push_back(static_cast<Letter>(index * sign));
    i = end;
  }
  return w;
}

std::string format_word(const Word& w) {
  std::string out;
  for (Letter l : w) {
    if (!out.empty()) out += ' ';
    const int idx = letter_index(l);
    const bool is_a = idx % 2 == 1;
    char c = is_a ? 'a' : 'b';
    if (l < 0) c = static_cast<char>(std::toupper(c));
    out += c;
    out += std::to_string((idx + 1) / 2);
  }
  return out;
}

}  // namespace surfgroup
