#pragma once

#include <cstddef>
#include <vector>

namespace twistlab {

/// Zero-based permutation: perm[i] is the image of position i. Acting on a
/// sequence moves the entry at i to position perm[i].
using Permutation = std::vector<std::size_t>;

/// Word in the adjacent transpositions sigma_1..sigma_{N-1} (one-based),
/// applied left to right.
using SigmaWord = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
bool is_permutation(const Permutation& perm);
/// (outer o inner)(i) = outer[inner[i]]: first inner, then outer.
Permutation compose(const Permutation& outer, const Permutation& inner);
Permutation inverse(const Permutation& perm);

/// Reduced word for `perm` (bubble sort on target positions).
SigmaWord reduced_word(const Permutation& perm);
/// Permutation realised by applying `word` to n positions.
Permutation word_permutation(const SigmaWord& word, std::size_t n);

/// The block exchange i <-> i + m on 2m positions.
Permutation block_swap(std::size_t m);

template <class T>
std::vector<T> permute(const Permutation& perm, const std::vector<T>& values) {
  std::vector<T> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[perm[i]] = values[i];
  return out;
}

}  // namespace twistlab
