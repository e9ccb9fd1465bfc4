#pragma once

#include "randeff/core.hpp"
#include "randeff/enumeration.hpp"
#include "randeff/matching.hpp"
#include "randeff/pareto.hpp"
#include "randeff/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace randeff {

// ---------------------------------------------------------------------------
// Hull membership LP

/// Weights lambda >= 0 with sum 1 and sum_k lambda_k P_k = target, where
/// `target` is an n x n matrix flattened row-major. The answer is a basic
/// solution, so at most (n-1)^2 + 1 weights are non-zero.
inline std::optional<std::vector<Rational>> lp_membership(
    std::span<const Rational> target, std::span<const DeterministicAssignment> generators) {
  if (generators.empty()) throw InputError("lp_membership needs at least one generator");
  const std::size_t n = generators.front().size();
  if (target.size() != n * n) throw InputError("target size does not match generators");
  const std::size_t k = generators.size();

  LinearSystem sys;
  sys.rows.assign(n * n + 1, std::vector<Rational>(k));
  sys.rhs.assign(target.begin(), target.end());
  sys.rhs.emplace_back(1);
  for (std::size_t g = 0; g < k; ++g) {
    if (generators[g].size() != n) throw InputError("generators differ in size");
    for (std::size_t i = 0; i < n; ++i) sys.rows[i * n + generators[g][i]][g] = 1;
    sys.rows[n * n][g] = 1;
  }
  return find_nonnegative_solution(sys);
}

// ---------------------------------------------------------------------------
// Ex post efficiency

enum class HullVerdict { member, not_member };

/// Why a random assignment was found outside the hull.
enum class NonMemberReason { none, no_pareto_generators, lp_infeasible };

struct HullMembershipResult {
  HullVerdict verdict = HullVerdict::not_member;
  NonMemberReason reason = NonMemberReason::none;
  /// Present iff verdict == member: Pareto-optimal terms reconstructing p.
  std::optional<Decomposition> decomposition;
  /// Consistent assignments examined and how many of them are Pareto optimal.
  std::uint64_t generators_enumerated = 0;
  std::uint64_t pareto_generators = 0;
};

namespace detail {

inline HullMembershipResult solve_membership(const RandomAssignment& p,
                                             std::vector<DeterministicAssignment> pareto,
                                             std::uint64_t enumerated) {
  HullMembershipResult result;
  result.generators_enumerated = enumerated;
  result.pareto_generators = pareto.size();
  if (pareto.empty()) {
    result.reason = NonMemberReason::no_pareto_generators;
    return result;
  }
  const auto weights = lp_membership(p.matrix().cells(), pareto);
  if (!weights) {
    result.reason = NonMemberReason::lp_infeasible;
    return result;
  }
  Decomposition dec;
  for (std::size_t g = 0; g < pareto.size(); ++g) {
    if ((*weights)[g] > 0) dec.terms.push_back({(*weights)[g], std::move(pareto[g])});
  }
  if (!is_valid_decomposition(dec, p)) {
    throw std::logic_error("LP solution does not reconstruct the assignment");
  }
  result.verdict = HullVerdict::member;
  result.decomposition = std::move(dec);
  return result;
}

}  // namespace detail

/// Decides whether p is a convex combination of Pareto-optimal
/// deterministic assignments. Any decomposition of p only uses assignments
/// consistent with p, so it suffices to enumerate those, keep the Pareto
/// optimal ones and solve the membership LP.
inline HullMembershipResult is_ex_post_efficient(const PreferenceProfile& profile,
                                                 const RandomAssignment& p,
                                                 std::uint64_t guard = kDefaultEnumerationGuard) {
  if (p.size() != profile.size()) throw InputError("assignment size differs from profile size");
  std::vector<DeterministicAssignment> pareto;
  std::uint64_t enumerated = 0;
  for_each_consistent_assignment(
      support(p),
      [&](const DeterministicAssignment& d) {
        ++enumerated;
        if (is_pareto_optimal(profile, d)) pareto.push_back(d);
        return true;
      },
      guard);
  return detail::solve_membership(p, std::move(pareto), enumerated);
}

/// First consistent Pareto-optimal assignment in enumeration order.
inline std::optional<DeterministicAssignment> has_consistent_pareto_optimal(
    const PreferenceProfile& profile, const RandomAssignment& p,
    std::uint64_t guard = kDefaultEnumerationGuard) {
  std::optional<DeterministicAssignment> found;
  for_each_consistent_assignment(
      support(p),
      [&](const DeterministicAssignment& d) {
        if (is_pareto_optimal(profile, d)) {
          found = d;
          return false;
        }
        return true;
      },
      guard);
  return found;
}

/// A consistent assignment in which no agent gets its top object, if any.
/// Such an assignment is never Pareto optimal (nobody could be the first
/// dictator), so it certifies that p is not robust ex post efficient.
/// Found as a perfect matching of the support minus every agent's top cell.
inline std::optional<DeterministicAssignment> no_top_object_certificate(
    const PreferenceProfile& profile, const RandomAssignment& p) {
  SupportMask mask = support(p);
  for (std::size_t i = 0; i < profile.size(); ++i) mask.set(i, profile.top(i), false);
  return find_consistent_matching(mask);
}

// ---------------------------------------------------------------------------
// Pruned search for supports too large to enumerate

struct PrunedSearchOptions {
  std::chrono::milliseconds budget{60000};
  /// Upper limit on columns added to the restricted LP.
  std::uint64_t max_generators = kDefaultEnumerationGuard;
};

struct PrunedSearchOutcome {
  /// Set when the search ran to completion.
  std::optional<HullMembershipResult> result;
  /// Explains an inconclusive run (timeout or column limit).
  std::string inconclusive_reason;
  /// Search nodes over all pricing rounds, and those cut by a partial cycle.
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
  std::uint64_t rounds = 0;
};

namespace detail {

// Is there a cycle through `agent` in the corresponding graph restricted to
// agents that already hold an object? holder[o] == kNone for free objects.
inline bool closes_partial_cycle(const PreferenceProfile& profile,
                                 const std::vector<std::size_t>& object_of,
                                 const std::vector<std::size_t>& holder, std::size_t agent,
                                 std::vector<char>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<std::size_t> stack{agent};
  seen[agent] = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t o : profile.ranking(a)) {
      if (o == object_of[a]) break;
      const std::size_t h = holder[o];
      if (h == kNone) continue;
      if (h == agent) return true;
      if (!seen[h]) {
        seen[h] = 1;
        stack.push_back(h);
      }
    }
  }
  return false;
}

enum class PricingStatus { found, none, timeout };

// Branching order for the pricing search. Agents a and b are linked when a
// ranks some support object of b above a's worst support object, i.e. a
// could point at b in the corresponding graph of a consistent assignment.
// Greedy: start from the most linked agent, then always take the agent with
// the most links into the prefix (ties by degree, then index), so that
// trading cycles among decided agents close as early as possible.
inline std::vector<std::size_t> branching_order(const PreferenceProfile& profile,
                                                const SupportMask& mask) {
  const std::size_t n = profile.size();
  std::vector<std::vector<char>> link(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t worst = 0;
    for (std::size_t o : profile.ranking(a)) {
      if (mask(a, o)) worst = o;
    }
    for (std::size_t o : profile.ranking(a)) {
      if (o == worst) break;
      for (std::size_t b = 0; b < n; ++b) {
        if (b != a && mask(b, o)) link[a][b] = link[b][a] = 1;
      }
    }
  }
  std::vector<std::size_t> degree(n, 0), into(n, 0), order;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) degree[a] += link[a][b];
  }
  std::vector<bool> placed(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = kNone;
    for (std::size_t a = 0; a < n; ++a) {
      if (placed[a]) continue;
      if (pick == kNone || into[a] > into[pick] ||
          (into[a] == into[pick] && degree[a] > degree[pick])) {
        pick = a;
      }
    }
    placed[pick] = true;
    order.push_back(pick);
    for (std::size_t b = 0; b < n; ++b) into[b] += link[pick][b];
  }
  return order;
}

// Maximum of sum w(i, o) over perfect matchings of the free agents to the
// free objects inside `mask` (Hungarian method, 128-bit to keep the
// big-M costs of missing cells exact); nullopt when no such matching exists.
inline std::optional<__int128> best_matching_value(const SupportMask& mask,
                                                   const std::vector<std::int64_t>& weight,
                                                   const std::vector<bool>& free_agent,
                                                   const std::vector<bool>& free_object) {
  const std::size_t n = mask.size();
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (free_agent[i]) rows.push_back(i);
    if (free_object[i]) cols.push_back(i);
  }
  const std::size_t k = rows.size();
  if (k == 0) return __int128(0);
  __int128 max_abs = 1;
  for (std::size_t r : rows) {
    for (std::size_t c : cols) {
      if (mask(r, c)) max_abs += weight[r * n + c] < 0 ? -weight[r * n + c] : weight[r * n + c];
    }
  }
  const __int128 big = max_abs * 2 + 1;  // exceeds any swing of a valid matching
  auto cost = [&](std::size_t a, std::size_t b) -> __int128 {
    const std::size_t r = rows[a - 1], c = cols[b - 1];
    return mask(r, c) ? __int128(-weight[r * n + c]) : big;
  };
  // 1-based potentials u, v; way[] records the augmenting tree.
  std::vector<__int128> u(k + 1, 0), v(k + 1, 0);
  std::vector<std::size_t> match(k + 1, 0), way(k + 1, 0);
  for (std::size_t a = 1; a <= k; ++a) {
    match[0] = a;
    std::size_t b0 = 0;
    std::vector<__int128> minv(k + 1, std::numeric_limits<__int128>::max());
    std::vector<char> used(k + 1, 0);
    do {
      used[b0] = 1;
      const std::size_t a0 = match[b0];
      __int128 delta = std::numeric_limits<__int128>::max();
      std::size_t b1 = 0;
      for (std::size_t b = 1; b <= k; ++b) {
        if (used[b]) continue;
        const __int128 cur = cost(a0, b) - u[a0] - v[b];
        if (cur < minv[b]) {
          minv[b] = cur;
          way[b] = b0;
        }
        if (minv[b] < delta) {
          delta = minv[b];
          b1 = b;
        }
      }
      for (std::size_t b = 0; b <= k; ++b) {
        if (used[b]) {
          u[match[b]] += delta;
          v[b] -= delta;
        } else {
          minv[b] -= delta;
        }
      }
      b0 = b1;
    } while (match[b0] != 0);
    do {
      const std::size_t b1 = way[b0];
      match[b0] = match[b1];
      b0 = b1;
    } while (b0 != 0);
  }
  __int128 total = 0;
  for (std::size_t b = 1; b <= k; ++b) {
    const std::size_t r = rows[match[b] - 1], c = cols[b - 1];
    if (!mask(r, c)) return std::nullopt;
    total += weight[r * n + c];
  }
  return total;
}

// Branch and bound for a consistent Pareto-optimal assignment maximizing
// offset + sum_i weight(i, d[i]) with a strictly positive value. Agents are
// fixed in index order; a node is cut when its decided agents already trade
// in a cycle, when the rest cannot be matched, or when the row-maximum bound
// cannot beat the incumbent.
template <class T>
PricingStatus price_column(const PreferenceProfile& profile, const SupportMask& mask,
                           const std::vector<T>& weight, const T& offset,
                           std::chrono::steady_clock::time_point deadline,
                           PrunedSearchOutcome& stats, std::vector<std::size_t>& best_out) {
  const std::size_t n = profile.size();
  const std::vector<std::size_t> order = branching_order(profile, mask);
  std::vector<T> suffix(n + 1, T(0));
  for (std::size_t pos = n; pos-- > 0;) {
    const std::size_t i = order[pos];
    std::optional<T> row_max;
    for (std::size_t o = 0; o < n; ++o) {
      if (mask(i, o) && (!row_max || weight[i * n + o] > *row_max)) row_max = weight[i * n + o];
    }
    suffix[pos] = suffix[pos + 1] + *row_max;
  }

  std::vector<std::size_t> object_of(n, kNone), holder(n, kNone);
  std::vector<bool> free_agent(n, true), free_object(n, true);
  std::vector<char> seen(n);
  T best = 0;  // only strictly positive columns are of interest
  bool found = false, timed_out = false;

  auto rec = [&](auto&& self, std::size_t pos, const T& value) -> void {
    if ((++stats.nodes & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
    }
    if (timed_out || found) return;
    if (pos == n) {
      if (value > best) {
        best = value;
        best_out = object_of;
        found = true;
      }
      return;
    }
    if (!(value + suffix[pos] > best)) return;
    const std::size_t agent = order[pos];
    // Heavier cells first so good incumbents appear early.
    std::vector<std::size_t> cells;
    for (std::size_t o = 0; o < n; ++o) {
      if (mask(agent, o) && free_object[o]) cells.push_back(o);
    }
    std::stable_sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) {
      return weight[agent * n + a] > weight[agent * n + b];
    });
    free_agent[agent] = false;
    for (std::size_t o : cells) {
      if (timed_out) break;
      const T next = value + weight[agent * n + o];
      if (!(next + suffix[pos + 1] > best)) continue;
      free_object[o] = false;
      object_of[agent] = o;
      holder[o] = agent;
      if (closes_partial_cycle(profile, object_of, holder, agent, seen)) {
        ++stats.pruned;
      } else if constexpr (std::is_same_v<T, std::int64_t>) {
        // Exact matching bound; also fails when the rest cannot be matched.
        const auto rest = best_matching_value(mask, weight, free_agent, free_object);
        if (rest && __int128(next) + *rest > __int128(best)) self(self, pos + 1, next);
      } else if (has_perfect_matching(mask, free_agent, free_object)) {
        self(self, pos + 1, next);
      }
      holder[o] = kNone;
      object_of[agent] = kNone;
      free_object[o] = true;
    }
    free_agent[agent] = true;
  };
  rec(rec, 0, offset);
  if (timed_out && !found) return PricingStatus::timeout;
  return found ? PricingStatus::found : PricingStatus::none;
}

// Scales the duals to integers when they fit comfortably in 64 bits.
inline std::optional<std::vector<std::int64_t>> integer_weights(const std::vector<Rational>& w) {
  BigInt den = 1;
  for (const auto& v : w) den = boost::multiprecision::lcm(den, denominator(v));
  const BigInt limit = BigInt(1) << 52;
  BigInt total = 0;
  std::vector<std::int64_t> out;
  out.reserve(w.size());
  for (const auto& v : w) {
    const BigInt scaled = numerator(v) * (den / denominator(v));
    total += abs(scaled);
    if (total > limit) return std::nullopt;
    out.push_back(scaled.convert_to<std::int64_t>());
  }
  return out;
}

}  // namespace detail

/// Ex post efficiency without enumerating the whole support. Solves the
/// membership LP over a growing set of Pareto-optimal columns: the optimal
/// phase-I duals y price every consistent Pareto-optimal assignment, and a
/// pruned branch and bound looks for one with positive price. When none
/// exists the duals certify that p is outside the hull; when the restricted
/// LP becomes feasible its solution is a decomposition. Runs under a
/// wall-clock budget; a timeout or column overflow leaves `result` empty.
inline PrunedSearchOutcome pruned_ex_post_search(const PreferenceProfile& profile,
                                                 const RandomAssignment& p,
                                                 const PrunedSearchOptions& options = {}) {
  const std::size_t n = profile.size();
  if (p.size() != n) throw InputError("assignment size differs from profile size");
  const SupportMask mask = support(p);
  const auto deadline = std::chrono::steady_clock::now() + options.budget;

  // One row per support cell plus the weight-sum row; cells outside the
  // support are zero in p and in every consistent column.
  std::vector<std::size_t> cell_row(n * n, detail::kNone);
  LinearSystem master;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      if (!mask(i, o)) continue;
      cell_row[i * n + o] = master.rhs.size();
      master.rhs.push_back(p(i, o));
    }
  }
  const std::size_t sum_row = master.rhs.size();
  master.rhs.emplace_back(1);
  master.rows.assign(master.rhs.size(), {});

  PrunedSearchOutcome outcome;
  std::vector<DeterministicAssignment> columns;
  auto give_up = [&](std::string why) {
    outcome.inconclusive_reason = std::move(why);
    return outcome;
  };

  for (;;) {
    ++outcome.rounds;
    PhaseOneResult lp = phase_one(master);
    if (lp.infeasibility == 0) {
      HullMembershipResult result;
      result.generators_enumerated = result.pareto_generators = columns.size();
      Decomposition dec;
      for (std::size_t g = 0; g < columns.size(); ++g) {
        if (lp.x[g] > 0) dec.terms.push_back({lp.x[g], columns[g]});
      }
      std::sort(dec.terms.begin(), dec.terms.end(),
                [](const auto& a, const auto& b) { return a.assignment < b.assignment; });
      if (!is_valid_decomposition(dec, p)) {
        throw std::logic_error("LP solution does not reconstruct the assignment");
      }
      result.verdict = HullVerdict::member;
      result.decomposition = std::move(dec);
      outcome.result = std::move(result);
      return outcome;
    }

    std::vector<Rational> weight(n * n, Rational(0));
    for (std::size_t c = 0; c < n * n; ++c) {
      if (cell_row[c] != detail::kNone) weight[c] = lp.duals[cell_row[c]];
    }
    std::vector<Rational> scaled_input = weight;
    scaled_input.push_back(lp.duals[sum_row]);
    std::vector<std::size_t> best;
    detail::PricingStatus status;
    if (auto ints = detail::integer_weights(scaled_input)) {
      const std::int64_t offset = ints->back();
      ints->pop_back();
      status = detail::price_column(profile, mask, *ints, offset, deadline, outcome, best);
    } else {
      status = detail::price_column(profile, mask, weight, lp.duals[sum_row], deadline, outcome,
                                    best);
    }
    if (status == detail::PricingStatus::timeout) {
      return give_up("time budget of " + std::to_string(options.budget.count()) +
                     " ms exhausted after " + std::to_string(outcome.nodes) + " search nodes");
    }
    if (status == detail::PricingStatus::none) {
      HullMembershipResult result;
      result.generators_enumerated = result.pareto_generators = columns.size();
      result.reason = columns.empty() ? NonMemberReason::no_pareto_generators
                                      : NonMemberReason::lp_infeasible;
      outcome.result = std::move(result);
      return outcome;
    }
    DeterministicAssignment d(std::move(best));
    if (!is_pareto_optimal(profile, d) || !is_consistent(d, mask)) {
      throw std::logic_error("pricing produced an invalid column");
    }
    if (columns.size() >= options.max_generators) {
      return give_up("more than " + std::to_string(options.max_generators) + " LP columns");
    }
    for (std::size_t r = 0; r < master.rows.size(); ++r) master.rows[r].emplace_back(0);
    for (std::size_t i = 0; i < n; ++i) master.rows[cell_row[i * n + d[i]]].back() = 1;
    master.rows[sum_row].back() = 1;
    columns.push_back(std::move(d));
  }
}

}  // namespace randeff
