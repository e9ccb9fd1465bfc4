#pragma once

#include "randeff/core.hpp"

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace randeff {

// Draws use plain modulo on mt19937_64 output so sequences are identical
// across standard libraries (std::uniform_int_distribution is not).

inline std::size_t draw_below(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

/// Fisher-Yates shuffle of 0..n-1.
inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[draw_below(rng, i)]);
  return perm;
}

inline PreferenceProfile random_profile(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::vector<std::size_t>> prefs;
  for (std::size_t i = 0; i < n; ++i) prefs.push_back(random_permutation(rng, n));
  return PreferenceProfile::with_default_names(std::move(prefs));
}

/// Profile in which every agent gets one of `types` random rankings.
inline PreferenceProfile random_typed_profile(std::mt19937_64& rng, std::size_t n,
                                              std::size_t types) {
  std::vector<std::vector<std::size_t>> rankings;
  for (std::size_t t = 0; t < types; ++t) rankings.push_back(random_permutation(rng, n));
  std::vector<std::vector<std::size_t>> prefs;
  for (std::size_t i = 0; i < n; ++i) prefs.push_back(rankings[draw_below(rng, types)]);
  return PreferenceProfile::with_default_names(std::move(prefs));
}

/// Convex combination of `terms` random permutation matrices with integer
/// weights 1..10, normalized.
inline RandomAssignment random_convex_assignment(std::mt19937_64& rng, std::size_t n,
                                                 std::size_t terms) {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::uint64_t> weights;
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < terms; ++k) {
    perms.push_back(random_permutation(rng, n));
    weights.push_back(1 + rng() % 10);
    total += weights.back();
  }
  RationalMatrix m(n);
  for (std::size_t k = 0; k < terms; ++k) {
    const Rational w(static_cast<long long>(weights[k]), static_cast<long long>(total));
    for (std::size_t i = 0; i < n; ++i) m(i, perms[k][i]) += w;
  }
  return RandomAssignment(std::move(m));
}

/// 2 to 5 terms, as used by `gen random`.
inline RandomAssignment random_convex_assignment(std::mt19937_64& rng, std::size_t n) {
  const std::size_t terms = 2 + draw_below(rng, 4);
  return random_convex_assignment(rng, n, terms);
}

}  // namespace randeff
