#include "gconj/word.hpp"

#include <algorithm>
#include <sstream>

namespace gconj {

Word reduce_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int letter : w) {
    if (letter == 0) continue;
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

Word concat_reduce(const Word& a, const Word& b) {
  Word out = a;
  for (int letter : b) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

Word invert_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

Word power_word(const Word& w, long long k) {
  Word base = k < 0 ? invert_word(w) : w;
  long long n = k < 0 ? -k : k;
  Word out;
  for (long long i = 0; i < n; ++i) out = concat_reduce(out, base);
  return out;
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == -w[i + 1]) return false;
  return std::none_of(w.begin(), w.end(), [](int l) { return l == 0; });
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  Word core(w.begin() + static_cast<long>(lo), w.begin() + static_cast<long>(hi));
  // w = prefix * core * prefix^-1 with prefix = w[0..lo); the conjugator c
  // with w = c^-1 * core * c is prefix^-1.
  Word prefix(w.begin(), w.begin() + static_cast<long>(lo));
  return {core, invert_word(prefix)};
}

Word conjugacy_canonical(const Word& w) {
  Word core = cyclic_reduce(w).first;
  if (core.empty()) return core;
  Word best = core;
  Word rot = core;
  for (std::size_t i = 1; i < core.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (std::lexicographical_compare(rot.begin(), rot.end(), best.begin(), best.end()))
      best = rot;
  }
  return best;
}

std::string word_key(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ".";
    os << w[i];
  }
  return os.str();
}

}  // namespace gconj
