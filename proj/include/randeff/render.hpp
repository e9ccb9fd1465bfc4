#pragma once

#include "randeff/core.hpp"
#include "randeff/pareto.hpp"
#include "randeff/sdeff.hpp"

#include <string>

namespace randeff {

/// "1↦o1, 2↦o2, ..."
inline std::string render_assignment(const PreferenceProfile& profile,
                                     const DeterministicAssignment& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ", ";
    out += profile.agent_name(i) + "↦" + profile.object_name(d[i]);
  }
  return out;
}

/// One line per term: "5/12: 1↦o1, 2↦o2, ...".
inline std::string render_decomposition(const PreferenceProfile& profile, const Decomposition& dec) {
  std::string out;
  for (const auto& t : dec.terms) {
    out += format_rational(t.weight) + ": " + render_assignment(profile, t.assignment) + "\n";
  }
  return out;
}

/// "1 —holds o2, wants o1→ 3 —holds o1, wants o2→ 1"
inline std::string render_cycle(const PreferenceProfile& profile, const ConsistentTradingCycle& c) {
  std::string out;
  for (const auto& e : c.entries) {
    out += profile.agent_name(e.agent) + " —holds " + profile.object_name(e.held) +
           ", wants " + profile.object_name(e.desired) + "→ ";
  }
  if (!c.entries.empty()) out += profile.agent_name(c.entries.front().agent);
  return out;
}

inline ConsistentTradingCycle as_consistent_cycle(const TradingCycle& c) {
  ConsistentTradingCycle out;
  const std::size_t k = c.entries.size();
  for (std::size_t m = 0; m < k; ++m) {
    out.entries.push_back({c.entries[m].agent, c.entries[m].object, c.entries[(m + 1) % k].object});
  }
  return out;
}

inline std::string render_cycle(const PreferenceProfile& profile, const TradingCycle& c) {
  return render_cycle(profile, as_consistent_cycle(c));
}

}  // namespace randeff
