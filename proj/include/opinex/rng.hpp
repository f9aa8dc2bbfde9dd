#ifndef OPINEX_RNG_HPP_
#define OPINEX_RNG_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace opinex {

// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so seeded outputs would differ between standard libraries. These helpers
// only rely on the mt19937_64 engine, whose sequence is fixed by the standard.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be positive.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = UniformIndex(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace opinex

#endif  // OPINEX_RNG_HPP_
