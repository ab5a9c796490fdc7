#include "twistlab/permutation.hpp"

#include <numeric>
#include <utility>

#include "twistlab/error.hpp"

namespace twistlab {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

bool is_permutation(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (auto v : perm) {
    if (v >= perm.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) throw Error(ErrorKind::SizeMismatch, "compose: sizes differ");
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

Permutation inverse(const Permutation& perm) {
  Permutation out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = i;
  return out;
}

SigmaWord reduced_word(const Permutation& perm) {
  if (!is_permutation(perm)) throw Error(ErrorKind::SchemaError, "reduced_word: not a permutation");
  // keys[p] = final destination of the entry currently at position p.
  Permutation keys = perm;
  SigmaWord word;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t j = 0; j + 1 < keys.size(); ++j) {
      if (keys[j] > keys[j + 1]) {
        std::swap(keys[j], keys[j + 1]);
        word.push_back(j + 1);
        swapped = true;
      }
    }
  }
  return word;
}

Permutation word_permutation(const SigmaWord& word, std::size_t n) {
  // content[p] = original index of the entry now at position p.
  Permutation content = identity_permutation(n);
  for (auto g : word) {
    if (g == 0 || g >= n) throw Error(ErrorKind::SchemaError, "word_permutation: generator out of range");
    std::swap(content[g - 1], content[g]);
  }
  return inverse(content);
}

Permutation block_swap(std::size_t m) {
  Permutation p(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) p[i] = (i + m) % (2 * m);
  return p;
}

}  // namespace twistlab
