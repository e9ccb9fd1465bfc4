#pragma once

#include "randeff/core.hpp"
#include "randeff/matching.hpp"

#include <utility>

namespace randeff {

struct PeelResult {
  Rational weight;
  RationalMatrix remainder;
};

/// Subtracts the largest multiple of the permutation matrix of `d` that
/// keeps every cell non-negative. The weight is the smallest matched entry,
/// so at least one matched cell becomes zero.
inline PeelResult peel(const RationalMatrix& m, const DeterministicAssignment& d) {
  const std::size_t n = m.size();
  if (d.size() != n) throw InputError("assignment size differs from matrix size");
  Rational lambda = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& v = m(i, d[i]);
    if (v <= 0) {
      throw InputError("assignment uses cell (" + std::to_string(i + 1) + "," +
                       std::to_string(d[i] + 1) + ") outside the support");
    }
    if (lambda < 0 || v < lambda) lambda = v;
  }
  PeelResult result{lambda, m};
  for (std::size_t i = 0; i < n; ++i) result.remainder(i, d[i]) -= lambda;
  return result;
}

inline PeelResult peel(const RandomAssignment& p, const DeterministicAssignment& d) {
  return peel(p.matrix(), d);
}

/// Birkhoff's algorithm: repeatedly peel a perfect matching of the current
/// support until nothing is left. Every peel zeroes at least one cell, so
/// the result has at most n^2 - n + 1 terms.
inline Decomposition birkhoff_decompose(const RandomAssignment& p) {
  Decomposition dec;
  RationalMatrix rest = p.matrix();
  while (!rest.is_zero()) {
    auto matching = find_consistent_matching(support(rest));
    // A positive multiple of a bistochastic matrix always has one (Hall).
    if (!matching) throw std::logic_error("support of remainder has no perfect matching");
    auto [lambda, remainder] = peel(rest, *matching);
    dec.terms.push_back({std::move(lambda), std::move(*matching)});
    rest = std::move(remainder);
  }
  return dec;
}

}  // namespace randeff
