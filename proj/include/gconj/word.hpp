#pragma once

#include <string>
#include <vector>

namespace gconj {

// A free-group word over generators 0..n-1, stored as signed letters:
// +(i+1) is generator i, -(i+1) its inverse.  All public words are freely
// reduced (no adjacent cancelling pair).
using Word = std::vector<int>;

inline int letter_of(std::size_t gen, bool inverse) {
  return inverse ? -static_cast<int>(gen + 1) : static_cast<int>(gen + 1);
}
inline std::size_t gen_of(int letter) {
  return static_cast<std::size_t>((letter > 0 ? letter : -letter) - 1);
}

Word reduce_word(const Word& w);
Word concat_reduce(const Word& a, const Word& b);
Word invert_word(const Word& w);
Word power_word(const Word& w, long long k);
bool is_reduced(const Word& w);

// core and conjugator with w = conjugator^-1 * core * conjugator,
// core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

// Least cyclic rotation of the cyclically reduced core; canonical form of
// the conjugacy class of w in a free group.
Word conjugacy_canonical(const Word& w);

std::string word_key(const Word& w);

}  // namespace gconj
