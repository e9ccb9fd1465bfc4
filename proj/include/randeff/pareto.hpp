#pragma once

#include "randeff/core.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace randeff {

/// Cycle (i_1, o_1), ..., (i_k, o_k) in the corresponding graph of a
/// deterministic assignment: agent i_m holds o_m and strictly prefers
/// o_{m+1} (cyclically). Executing it makes every listed agent better off.
struct TradingCycle {
  struct Entry {
    std::size_t agent;
    std::size_t object;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;
  friend bool operator==(const TradingCycle&, const TradingCycle&) = default;
};

/// A permutation of the agents, i.e. a picking order.
class AgentPermutation {
 public:
  explicit AgentPermutation(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t a : order_) {
      if (a >= order_.size() || seen[a]) throw InputError("agent order is not a permutation");
      seen[a] = true;
    }
  }
  static AgentPermutation identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return AgentPermutation(std::move(v));
  }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

 private:
  std::vector<std::size_t> order_;
};

/// Agents pick in `order`, each taking the best object still available.
inline DeterministicAssignment serial_dictatorship(const PreferenceProfile& profile,
                                                   const AgentPermutation& order) {
  const std::size_t n = profile.size();
  if (order.size() != n) throw InputError("agent order has wrong length");
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> object_of(n);
  for (std::size_t agent : order.order()) {
    for (std::size_t o : profile.ranking(agent)) {
      if (!taken[o]) {
        taken[o] = true;
        object_of[agent] = o;
        break;
      }
    }
  }
  return DeterministicAssignment(std::move(object_of));
}

/// Directed graph on agents and objects: every object points to its holder,
/// every agent points to each object it strictly prefers to its own.
struct CorrespondingGraph {
  std::vector<std::size_t> holder;                   // object -> agent
  std::vector<std::vector<std::size_t>> agent_out;  // agent -> objects, best first
};

inline CorrespondingGraph corresponding_graph(const PreferenceProfile& profile,
                                              const DeterministicAssignment& d) {
  const std::size_t n = profile.size();
  if (d.size() != n) throw InputError("assignment size differs from profile size");
  CorrespondingGraph g{d.agents_by_object(), std::vector<std::vector<std::size_t>>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o : profile.ranking(i)) {
      if (o == d[i]) break;
      g.agent_out[i].push_back(o);
    }
  }
  return g;
}

/// Trading cycle of `d`, or nullopt when `d` is Pareto optimal.
///
/// Start agents are tried in ascending order; from start s the search only
/// visits agents >= s and follows each agent's out-edges in preference
/// order, so the witness begins at its smallest agent and is reproducible.
inline std::optional<TradingCycle> find_trading_cycle(const PreferenceProfile& profile,
                                                      const DeterministicAssignment& d) {
  const std::size_t n = profile.size();
  const CorrespondingGraph g = corresponding_graph(profile, d);
  std::vector<char> dead(n);
  std::vector<std::size_t> path;
  std::vector<char> on_path(n);

  for (std::size_t start = 0; start < n; ++start) {
    std::fill(dead.begin(), dead.end(), 0);
    bool found = false;
    auto dfs = [&](auto&& self, std::size_t agent) -> void {
      path.push_back(agent);
      on_path[agent] = 1;
      for (std::size_t o : g.agent_out[agent]) {
        const std::size_t next = g.holder[o];
        if (next == start) {
          found = true;
          return;
        }
        if (next < start || dead[next] || on_path[next]) continue;
        self(self, next);
        if (found) return;
      }
      on_path[agent] = 0;
      dead[agent] = 1;
      path.pop_back();
    };
    dfs(dfs, start);
    if (found) {
      TradingCycle cycle;
      for (std::size_t a : path) cycle.entries.push_back({a, d[a]});
      return cycle;
    }
    path.clear();
    std::fill(on_path.begin(), on_path.end(), 0);
  }
  return std::nullopt;
}

inline bool is_pareto_optimal(const PreferenceProfile& profile, const DeterministicAssignment& d) {
  return !find_trading_cycle(profile, d).has_value();
}

/// Checks the structural invariants of a trading cycle against `d`.
inline bool is_valid_trading_cycle(const PreferenceProfile& profile,
                                   const DeterministicAssignment& d, const TradingCycle& c) {
  const std::size_t k = c.entries.size();
  if (k < 2) return false;
  std::vector<bool> agents(profile.size()), objects(profile.size());
  for (std::size_t m = 0; m < k; ++m) {
    const auto& e = c.entries[m];
    const auto& next = c.entries[(m + 1) % k];
    if (e.agent >= profile.size() || e.object >= profile.size()) return false;
    if (agents[e.agent] || objects[e.object]) return false;
    agents[e.agent] = objects[e.object] = true;
    if (d[e.agent] != e.object) return false;
    if (!profile.prefers(e.agent, next.object, e.object)) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultRsdGuard = 9;

/// Random serial dictatorship, computed exactly by averaging serial
/// dictatorship over all n! picking orders.
inline RandomAssignment rsd_assignment(const PreferenceProfile& profile,
                                       std::size_t guard = kDefaultRsdGuard) {
  const std::size_t n = profile.size();
  if (n > guard) {
    throw GuardExceeded("RSD enumerates n! orders; n = " + std::to_string(n) +
                            " exceeds the limit of " + std::to_string(guard),
                        std::to_string(n) + "!");
  }
  std::vector<unsigned long long> counts(n * n, 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  unsigned long long total = 0;
  std::vector<bool> taken(n);
  do {
    std::fill(taken.begin(), taken.end(), false);
    for (std::size_t agent : order) {
      for (std::size_t o : profile.ranking(agent)) {
        if (!taken[o]) {
          taken[o] = true;
          ++counts[agent * n + o];
          break;
        }
      }
    }
    ++total;
  } while (std::next_permutation(order.begin(), order.end()));

  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) m(i, o) = Rational(counts[i * n + o], total);
  }
  return RandomAssignment(std::move(m));
}

/// Every agent receives every object with probability 1/n.
inline RandomAssignment uniform_assignment(std::size_t n) {
  if (n == 0) throw InputError("uniform assignment needs n >= 1");
  RationalMatrix m(n);
  const Rational share(1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) m(i, o) = share;
  }
  return RandomAssignment(std::move(m));
}

}  // namespace randeff
