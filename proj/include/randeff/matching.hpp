#pragma once

#include "randeff/core.hpp"

#include <optional>
#include <vector>

namespace randeff {

namespace detail {

// Kuhn's augmenting-path matching over the rows with active_row set, using
// only active columns. Rows are seeded greedily then augmented in ascending
// order; neighbours are tried by ascending column. Returns match_of_row with
// kNone for inactive rows, or nullopt if some active row stays unmatched.
inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

inline std::optional<std::vector<std::size_t>> match_rows(const SupportMask& mask,
                                                          const std::vector<bool>& active_row,
                                                          const std::vector<bool>& active_col) {
  const std::size_t n = mask.size();
  std::vector<std::size_t> row_match(n, kNone), col_match(n, kNone);

  for (std::size_t i = 0; i < n; ++i) {
    if (!active_row[i]) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (active_col[o] && mask(i, o) && col_match[o] == kNone) {
        row_match[i] = o;
        col_match[o] = i;
        break;
      }
    }
  }

  std::vector<char> visited(n);
  auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t o = 0; o < n; ++o) {
      if (!active_col[o] || !mask(i, o) || visited[o]) continue;
      visited[o] = 1;
      if (col_match[o] == kNone || self(self, col_match[o])) {
        row_match[i] = o;
        col_match[o] = i;
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (!active_row[i] || row_match[i] != kNone) continue;
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, i)) return std::nullopt;
  }
  return row_match;
}

}  // namespace detail

/// A perfect matching of agents to objects that uses only true cells of
/// `mask`, or nullopt if none exists.
inline std::optional<DeterministicAssignment> find_consistent_matching(const SupportMask& mask) {
  const std::size_t n = mask.size();
  auto rows = detail::match_rows(mask, std::vector<bool>(n, true), std::vector<bool>(n, true));
  if (!rows) return std::nullopt;
  return DeterministicAssignment(std::move(*rows));
}

/// True when the active agents can be perfectly matched to the active
/// objects inside `mask`. Both sets must have equal size.
inline bool has_perfect_matching(const SupportMask& mask, const std::vector<bool>& active_agents,
                                 const std::vector<bool>& active_objects) {
  return detail::match_rows(mask, active_agents, active_objects).has_value();
}

}  // namespace randeff
