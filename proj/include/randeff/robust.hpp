#pragma once

#include "randeff/core.hpp"
#include "randeff/enumeration.hpp"
#include "randeff/matching.hpp"
#include "randeff/pareto.hpp"
#include "randeff/sdeff.hpp"

#include <map>
#include <optional>
#include <vector>

namespace randeff {

struct RobustResult {
  bool robust = true;
  /// A consistent assignment that is not Pareto optimal (when !robust).
  std::optional<DeterministicAssignment> witness;
};

/// Robust ex post efficiency by exhaustive search: p is robust iff no
/// consistent deterministic assignment fails Pareto optimality. Stops at
/// the first non-optimal assignment in enumeration order.
inline RobustResult is_robust_ex_post_efficient(const PreferenceProfile& profile,
                                                const RandomAssignment& p,
                                                std::uint64_t guard = kDefaultEnumerationGuard) {
  if (p.size() != profile.size()) throw InputError("assignment size differs from profile size");
  RobustResult result;
  for_each_consistent_assignment(
      support(p),
      [&](const DeterministicAssignment& d) {
        if (!is_pareto_optimal(profile, d)) {
          result.robust = false;
          result.witness = d;
          return false;
        }
        return true;
      },
      guard);
  return result;
}

/// Checks a claimed non-robustness certificate: `d` must be consistent with
/// p and admit a trading cycle.
inline bool verify_non_robust_witness(const PreferenceProfile& profile, const RandomAssignment& p,
                                      const DeterministicAssignment& d) {
  if (d.size() != profile.size() || p.size() != profile.size()) return false;
  return is_consistent(d, p) && !is_pareto_optimal(profile, d);
}

// ---------------------------------------------------------------------------
// Agent types

/// Agents with identical rankings share a type. Type ids are numbered by
/// first appearance in agent order.
struct AgentTypePartition {
  std::vector<std::size_t> type_of;
  std::vector<std::vector<std::size_t>> types;  // ranking of each type
  std::size_t count() const noexcept { return types.size(); }
};

inline AgentTypePartition compute_agent_types(const PreferenceProfile& profile) {
  AgentTypePartition part;
  std::map<std::vector<std::size_t>, std::size_t> ids;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::vector<std::size_t> ranking(profile.ranking(i).begin(), profile.ranking(i).end());
    auto [it, inserted] = ids.emplace(ranking, part.types.size());
    if (inserted) part.types.push_back(std::move(ranking));
    part.type_of.push_back(it->second);
  }
  return part;
}

/// Rough count of candidate cycles examined by is_robust_by_types:
/// sum_{j=1..k} C(k,j) j! n^(2j).
inline BigInt types_search_cost_estimate(const PreferenceProfile& profile) {
  const std::size_t k = compute_agent_types(profile).count();
  const BigInt n2 = BigInt(profile.size()) * profile.size();
  BigInt total = 0, orderings = 1, power = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    orderings *= (k - j + 1);  // k! / (k-j)!
    power *= n2;
    total += orderings * power;
  }
  return total;
}

struct RobustByTypesResult {
  bool robust = true;
  /// Consistent trading cycle with at most one agent per type whose
  /// remaining agents can be matched inside the support (when !robust).
  std::optional<ConsistentTradingCycle> cycle;
  /// The cycle completed to a full consistent assignment; not Pareto optimal.
  std::optional<DeterministicAssignment> witness;
};

/// Robust ex post efficiency in O(n^(2k)) cycle candidates for k agent
/// types. If some consistent assignment has a trading cycle, it has one with
/// at most one agent of each type: among same-type agents on a cycle, the
/// one holding the worst object can point directly to where another one
/// points, and the skipped agents keep their (consistent) objects. So it
/// suffices to enumerate type-distinct consistent cycles and ask whether
/// everyone else can be matched inside the support.
///
/// Cycles are generated once per rotation by starting at the entry with
/// the smallest type id.
inline RobustByTypesResult is_robust_by_types(const PreferenceProfile& profile,
                                              const RandomAssignment& p) {
  const std::size_t n = profile.size();
  if (p.size() != n) throw InputError("assignment size differs from profile size");
  const SupportMask mask = support(p);
  const AgentTypePartition part = compute_agent_types(profile);

  std::vector<bool> type_used(part.count(), false);
  std::vector<bool> free_agent(n, true), free_object(n, true);
  std::vector<std::pair<std::size_t, std::size_t>> path;  // (agent, held)
  RobustByTypesResult result;

  auto try_close = [&]() -> bool {
    const auto [last_agent, last_held] = path.back();
    if (path.size() < 2 || !profile.prefers(last_agent, path.front().second, last_held)) {
      return false;
    }
    auto rest = detail::match_rows(mask, free_agent, free_object);
    if (!rest) return false;
    ConsistentTradingCycle cycle;
    std::vector<std::size_t> object_of = *rest;
    for (std::size_t m = 0; m < path.size(); ++m) {
      cycle.entries.push_back(
          {path[m].first, path[m].second, path[(m + 1) % path.size()].second});
      object_of[path[m].first] = path[m].second;
    }
    result.robust = false;
    result.cycle = std::move(cycle);
    result.witness = DeterministicAssignment(std::move(object_of));
    return true;
  };

  auto extend = [&](auto&& self, std::size_t first_type) -> bool {
    if (try_close()) return true;
    const auto [agent, held] = path.back();
    for (std::size_t o : profile.ranking(agent)) {
      if (o == held) break;
      if (!free_object[o]) continue;
      for (std::size_t next = 0; next < n; ++next) {
        const std::size_t t = part.type_of[next];
        if (!mask(next, o) || type_used[t] || t < first_type) continue;
        type_used[t] = true;
        free_agent[next] = false;
        free_object[o] = false;
        path.emplace_back(next, o);
        if (self(self, first_type)) return true;
        path.pop_back();
        free_object[o] = true;
        free_agent[next] = true;
        type_used[t] = false;
      }
    }
    return false;
  };

  for (std::size_t t = 0; t < part.count(); ++t) {
    for (std::size_t agent = 0; agent < n; ++agent) {
      if (part.type_of[agent] != t) continue;
      for (std::size_t held : profile.ranking(agent)) {
        if (!mask(agent, held)) continue;
        type_used[t] = true;
        free_agent[agent] = false;
        free_object[held] = false;
        path.assign(1, {agent, held});
        if (extend(extend, t)) return result;
        free_object[held] = true;
        free_agent[agent] = true;
        type_used[t] = false;
      }
    }
  }
  return result;
}

/// The uniform assignment is robust ex post efficient iff all agents share
/// one ranking: otherwise two agents disagree on some pair of objects and
/// giving each the object it likes less is a consistent, dominated outcome.
inline bool uniform_is_robust(const PreferenceProfile& profile) {
  return compute_agent_types(profile).count() == 1;
}

}  // namespace randeff
