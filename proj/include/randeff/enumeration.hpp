#pragma once

#include "randeff/core.hpp"
#include "randeff/matching.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace randeff {

inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 20;

namespace detail {

// Smallest x with x^k >= value.
inline BigInt ceil_root(const BigInt& value, unsigned k) {
  if (value <= 1 || k == 1) return value;
  BigInt lo = 1;
  BigInt hi = BigInt(1) << (boost::multiprecision::msb(value) / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, k) >= value) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

// prod_d ceil((d!)^(count_d / d)) over a degree histogram: an integer upper
// bound on Bregman's bound prod_i (d_i!)^(1/d_i).
inline BigInt bregman_bound(const std::map<std::size_t, std::size_t>& degree_counts) {
  BigInt bound = 1;
  for (const auto& [degree, count] : degree_counts) {
    if (degree == 0) return 0;
    BigInt fact = 1;
    for (std::size_t f = 2; f <= degree; ++f) fact *= f;
    bound *= ceil_root(boost::multiprecision::pow(fact, static_cast<unsigned>(count)),
                       static_cast<unsigned>(degree));
  }
  return bound;
}

}  // namespace detail

/// Upper bound on the number of perfect matchings inside `mask` (the
/// permanent of its 0/1 matrix), from Bregman's inequality applied to rows
/// and to columns. Exact integer arithmetic; the bound is rounded up.
inline BigInt permanent_upper_bound(const SupportMask& mask) {
  std::map<std::size_t, std::size_t> rows, cols;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    ++rows[mask.row_degree(i)];
    ++cols[mask.column_degree(i)];
  }
  return std::min(detail::bregman_bound(rows), detail::bregman_bound(cols));
}

inline void check_enumeration_guard(const SupportMask& mask, std::uint64_t guard) {
  const BigInt bound = permanent_upper_bound(mask);
  if (bound > guard) {
    throw GuardExceeded("support admits up to " + bound.str() +
                            " consistent assignments, above the enumeration limit of " +
                            std::to_string(guard),
                        bound.str());
  }
}

/// Calls `visit(d)` for every perfect matching d inside `mask`, in
/// lexicographic order of (object of agent 0, object of agent 1, ...).
/// Stops early when `visit` returns false. Branches that cannot be
/// completed are cut with a matching check, so every leaf is a solution.
/// Throws GuardExceeded first if the permanent bound exceeds `guard`.
template <class Visitor>
void for_each_consistent_assignment(const SupportMask& mask, Visitor&& visit,
                                    std::uint64_t guard = kDefaultEnumerationGuard) {
  check_enumeration_guard(mask, guard);
  const std::size_t n = mask.size();
  std::vector<std::size_t> object_of(n);
  std::vector<bool> free_agent(n, true), free_object(n, true);
  bool stop = false;

  auto rec = [&](auto&& self, std::size_t agent) -> void {
    if (agent == n) {
      stop = !visit(DeterministicAssignment(object_of));
      return;
    }
    free_agent[agent] = false;
    for (std::size_t o = 0; o < n && !stop; ++o) {
      if (!mask(agent, o) || !free_object[o]) continue;
      free_object[o] = false;
      if (has_perfect_matching(mask, free_agent, free_object)) {
        object_of[agent] = o;
        self(self, agent + 1);
      }
      free_object[o] = true;
    }
    free_agent[agent] = true;
  };
  rec(rec, 0);
}

/// All perfect matchings inside `mask`, in enumeration order.
inline std::vector<DeterministicAssignment> consistent_assignments(
    const SupportMask& mask, std::uint64_t guard = kDefaultEnumerationGuard) {
  std::vector<DeterministicAssignment> out;
  for_each_consistent_assignment(
      mask,
      [&](const DeterministicAssignment& d) {
        out.push_back(d);
        return true;
      },
      guard);
  return out;
}

}  // namespace randeff
