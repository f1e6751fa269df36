#pragma once

#include <cstdint>
#include <random>

namespace mmvd {

// splitmix64 finalizer, used to derive independent per-task seeds from
// (master_seed, task_index) so work items reproduce in any execution order.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(mix_seed(master, index));
}

// Unbiased bounded draw (rejection sampling), independent of
// std::uniform_int_distribution so permutation streams are pinned down
// by this header alone.
inline std::uint64_t bounded_draw(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = eng();
  } while (v >= limit);
  return v % bound;
}

// Fisher-Yates shuffle of {0,...,n-1}.
inline std::vector<std::uint32_t> random_permutation(std::size_t n,
                                                     std::mt19937_64& eng) {
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_draw(eng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace mmvd
