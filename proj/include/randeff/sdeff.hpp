#pragma once

#include "randeff/core.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace randeff {

/// Trading cycle consistent with a random assignment p. Entry m says agent
/// `agent` holds `held` (p(agent)(held) > 0) and wants `desired`, which it
/// strictly prefers; `desired` is the `held` object of entry m+1.
struct ConsistentTradingCycle {
  struct Entry {
    std::size_t agent;
    std::size_t held;
    std::size_t desired;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;
  friend bool operator==(const ConsistentTradingCycle&, const ConsistentTradingCycle&) = default;
};

inline bool is_valid_consistent_cycle(const PreferenceProfile& profile, const SupportMask& mask,
                                      const ConsistentTradingCycle& c) {
  const std::size_t k = c.entries.size();
  if (k < 2) return false;
  std::vector<bool> agents(profile.size()), objects(profile.size());
  for (std::size_t m = 0; m < k; ++m) {
    const auto& e = c.entries[m];
    if (agents[e.agent] || objects[e.held]) return false;
    agents[e.agent] = objects[e.held] = true;
    if (!mask(e.agent, e.held)) return false;
    if (!profile.prefers(e.agent, e.desired, e.held)) return false;
    if (e.desired != c.entries[(m + 1) % k].held) return false;
  }
  return true;
}

namespace detail {

// Removes repeated agents or objects from a closed walk in the cell graph
// (nodes = support cells, edge (i,o) -> (i',o') iff o' >_i o). Each step
// drops a detour and keeps a closed walk, so the loop ends in a simple
// cycle with distinct agents and distinct objects.
inline void shortcut_cycle(const PreferenceProfile& profile,
                           std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t k = cells.size();
    for (std::size_t a = 0; a < k && !changed; ++a) {
      for (std::size_t b = a + 1; b < k && !changed; ++b) {
        const auto [ia, oa] = cells[a];
        const auto [ib, ob] = cells[b];
        std::vector<std::pair<std::size_t, std::size_t>> out;
        if (ia == ib) {
          // Same agent holds oa and ob; keep the cell holding the worse
          // object and let it point where the other cell pointed.
          if (profile.prefers(ia, ob, oa)) {
            // (ia,oa) -> successor of b ... -> back to a.
            out.push_back(cells[a]);
            for (std::size_t m = b + 1; m < k; ++m) out.push_back(cells[m]);
            for (std::size_t m = 0; m < a; ++m) out.push_back(cells[m]);
          } else {
            // (ib,ob) -> successor of a ... -> back to b.
            for (std::size_t m = a + 1; m <= b; ++m) out.push_back(cells[m]);
            out.insert(out.begin(), cells[b]);
            out.pop_back();
          }
        } else if (oa == ob) {
          // Two agents hold the same object: the predecessor of b can point
          // at cell a instead, skipping the segment [b, end) + [0, a).
          for (std::size_t m = a; m < b; ++m) out.push_back(cells[m]);
        } else {
          continue;
        }
        cells = std::move(out);
        changed = true;
      }
    }
  }
}

}  // namespace detail

/// A trading cycle consistent with p, or nullopt when p is SD-efficient.
///
/// Searches the graph whose nodes are support cells (agent, held object);
/// cell (i,o) points to every cell (i',o') with o' >_i o. Start cells are
/// taken by ascending agent then the agent's preference order, successors
/// by the agent's preference order then ascending holder. The first closed
/// walk is reduced to a simple cycle and rotated to its smallest agent.
inline std::optional<ConsistentTradingCycle> find_consistent_cycle(const PreferenceProfile& profile,
                                                                   const RandomAssignment& p) {
  const std::size_t n = profile.size();
  if (p.size() != n) throw InputError("assignment size differs from profile size");
  const SupportMask mask = support(p);

  enum : char { kWhite, kGray, kBlack };
  std::vector<char> color(n * n, kWhite);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> walk;

  auto dfs = [&](auto&& self, std::size_t agent, std::size_t held) -> void {
    color[agent * n + held] = kGray;
    stack.emplace_back(agent, held);
    for (std::size_t o : profile.ranking(agent)) {
      if (o == held) break;
      for (std::size_t holder = 0; holder < n; ++holder) {
        if (!mask(holder, o)) continue;
        const char c = color[holder * n + o];
        if (c == kGray) {
          auto it = std::find(stack.begin(), stack.end(), std::pair{holder, o});
          walk.emplace(it, stack.end());
          return;
        }
        if (c == kWhite) {
          self(self, holder, o);
          if (walk) return;
        }
      }
    }
    color[agent * n + held] = kBlack;
    stack.pop_back();
  };

  for (std::size_t agent = 0; agent < n && !walk; ++agent) {
    for (std::size_t held : profile.ranking(agent)) {
      if (mask(agent, held) && color[agent * n + held] == kWhite) {
        dfs(dfs, agent, held);
        if (walk) break;
      }
    }
  }
  if (!walk) return std::nullopt;

  auto cells = std::move(*walk);
  detail::shortcut_cycle(profile, cells);
  const auto first = std::min_element(cells.begin(), cells.end());
  std::rotate(cells.begin(), first, cells.end());

  ConsistentTradingCycle cycle;
  for (std::size_t m = 0; m < cells.size(); ++m) {
    cycle.entries.push_back(
        {cells[m].first, cells[m].second, cells[(m + 1) % cells.size()].second});
  }
  return cycle;
}

inline bool is_sd_efficient(const PreferenceProfile& profile, const RandomAssignment& p) {
  return !find_consistent_cycle(profile, p).has_value();
}

/// Moves `epsilon` probability along the cycle: each agent gives up epsilon
/// of its held object and gains epsilon of the object it wants. With
/// epsilon = the smallest held entry, the result is again bistochastic.
inline RandomAssignment execute_cycle(const RandomAssignment& p, const ConsistentTradingCycle& c,
                                      const Rational& epsilon) {
  RationalMatrix m = p.matrix();
  for (const auto& e : c.entries) {
    m(e.agent, e.held) -= epsilon;
    m(e.agent, e.desired) += epsilon;
  }
  return RandomAssignment(std::move(m));
}

inline Rational max_cycle_shift(const RandomAssignment& p, const ConsistentTradingCycle& c) {
  Rational eps = 1;
  for (const auto& e : c.entries) eps = std::min(eps, Rational(p(e.agent, e.held)));
  return eps;
}

}  // namespace randeff
