#pragma once

#include "randeff/core.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace randeff {

struct Literal {
  std::size_t var = 0;  // 1-based
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

/// 3-CNF with exactly three literals per clause over strictly increasing
/// variable indices.
class SatInstance {
 public:
  SatInstance(std::size_t var_count, std::vector<Clause> clauses)
      : var_count_(var_count), clauses_(std::move(clauses)) {
    for (std::size_t j = 0; j < clauses_.size(); ++j) {
      const auto& c = clauses_[j];
      for (std::size_t s = 0; s < 3; ++s) {
        if (c[s].var == 0 || c[s].var > var_count_) {
          throw InputError("clause " + std::to_string(j + 1) + " uses variable " +
                           std::to_string(c[s].var) + " outside 1.." + std::to_string(var_count_));
        }
      }
      if (!(c[0].var < c[1].var && c[1].var < c[2].var)) {
        throw InputError("clause " + std::to_string(j + 1) +
                         " must list three distinct variables in increasing order");
      }
    }
  }

  std::size_t var_count() const noexcept { return var_count_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

  bool satisfied_by(const std::vector<bool>& values) const {
    if (values.size() != var_count_) return false;
    return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
      return std::any_of(c.begin(), c.end(),
                         [&](const Literal& l) { return values[l.var - 1] != l.negated; });
    });
  }

 private:
  std::size_t var_count_;
  std::vector<Clause> clauses_;
};

/// Reads DIMACS CNF ("p cnf <vars> <clauses>", clauses as 0-terminated
/// integer lists, 'c' comment lines) and enforces the 3-literal, ascending
/// variable shape.
inline SatInstance parse_cnf(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::vector<Clause> clauses;
  std::vector<long> current;
  std::size_t current_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first) || first == "c" || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      long vars = -1, count = -1;
      if (header || !(tokens >> fmt >> vars >> count) || fmt != "cnf" || vars < 0 || count < 0) {
        throw InputError("malformed 'p cnf' header", line_no);
      }
      header.emplace(vars, count);
      continue;
    }
    if (!header) throw InputError("clause before 'p cnf' header", line_no);
    tokens.clear();
    tokens.str(line);
    for (std::string tok; tokens >> tok;) {
      long value = 0;
      try {
        std::size_t used = 0;
        value = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw InputError("malformed literal '" + tok + "'", line_no);
      }
      if (current.empty()) current_line = line_no;
      if (value != 0) {
        current.push_back(value);
        continue;
      }
      if (current.size() != 3) {
        throw InputError("clause has " + std::to_string(current.size()) +
                             " literals, expected exactly 3",
                         current_line);
      }
      Clause c;
      for (std::size_t s = 0; s < 3; ++s) {
        c[s] = Literal{static_cast<std::size_t>(current[s] < 0 ? -current[s] : current[s]),
                       current[s] < 0};
      }
      if (!(c[0].var < c[1].var && c[1].var < c[2].var)) {
        throw InputError("clause variables must be distinct and increasing", current_line);
      }
      clauses.push_back(c);
      current.clear();
    }
  }
  if (!header) throw InputError("missing 'p cnf' header");
  if (!current.empty()) throw InputError("last clause is not terminated by 0", current_line);
  if (clauses.size() != header->second) {
    throw InputError("header announces " + std::to_string(header->second) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  return SatInstance(header->first, std::move(clauses));
}

inline std::string format_cnf(const SatInstance& f) {
  std::ostringstream out;
  out << "p cnf " << f.var_count() << ' ' << f.clauses().size() << '\n';
  for (const auto& c : f.clauses()) {
    for (const auto& l : c) out << (l.negated ? "-" : "") << l.var << ' ';
    out << "0\n";
  }
  return out.str();
}

inline constexpr std::size_t kMaxBruteForceVars = 24;

/// Lexicographically smallest satisfying valuation (false < true, x1 most
/// significant), found by trying all 2^k valuations in order.
inline std::optional<std::vector<bool>> brute_force_sat(const SatInstance& f) {
  const std::size_t k = f.var_count();
  if (k > kMaxBruteForceVars) {
    throw GuardExceeded("brute-force SAT limited to " + std::to_string(kMaxBruteForceVars) +
                            " variables",
                        "2^" + std::to_string(k));
  }
  std::vector<bool> values(k);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    for (std::size_t i = 0; i < k; ++i) values[i] = (bits >> (k - 1 - i)) & 1;
    if (f.satisfied_by(values)) return values;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reduction from 3-SAT to ex post efficiency testing

/// Assignment problem built from a 3-CNF F with k variables and t clauses.
///
/// Primary agents N1 are x_i, x_i^j (copies of x_i, one per clause), c and
/// c_j (copies of c); each has a dummy d_x. Each x in N1 owns objects +x and
/// -x, shared half-and-half with its dummy in p. Agent 2m is the m-th
/// member of N1 and agent 2m+1 its dummy; object 2m is +x, 2m+1 is -x.
/// N1 is ordered x_1, x_1^1..x_1^t, x_2, ..., x_k^t, c, c_1..c_t.
struct ReducedInstance {
  SatInstance formula{0, {}};
  std::size_t var_count = 0;
  std::size_t clause_count = 0;
  PreferenceProfile profile;
  RandomAssignment p;
  /// S_i^j as an object index, keyed by (i, j), both 1-based. Missing keys
  /// are the empty set.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> s_sets;
  /// S = { V(l_{j,1}) }, ordered by clause index.
  std::vector<std::size_t> s_head;

  std::size_t member_x(std::size_t i, std::size_t j = 0) const {
    return (i - 1) * (clause_count + 1) + j;
  }
  std::size_t member_c(std::size_t j = 0) const { return var_count * (clause_count + 1) + j; }
  std::size_t member_count() const { return member_c(0) + clause_count + 1; }

  static std::size_t agent(std::size_t member) { return 2 * member; }
  static std::size_t dummy(std::size_t member) { return 2 * member + 1; }
  static std::size_t plus(std::size_t member) { return 2 * member; }
  static std::size_t minus(std::size_t member) { return 2 * member + 1; }
};

namespace detail {

inline std::string member_name(std::size_t k, std::size_t t, std::size_t m) {
  const std::size_t c_base = k * (t + 1);
  if (m >= c_base) {
    const std::size_t j = m - c_base;
    return j == 0 ? "c" : "c_" + std::to_string(j);
  }
  const std::size_t i = m / (t + 1) + 1, j = m % (t + 1);
  return j == 0 ? "x" + std::to_string(i) : "x" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace detail

/// Builds the reduction instance. Rankings start with the prescribed head
/// and finish with every other object in a fixed canonical order: sorted by
/// owner name, '+' before '-'.
inline ReducedInstance build_reduction(const SatInstance& f) {
  ReducedInstance r;
  r.formula = f;
  const std::size_t k = r.var_count = f.var_count();
  const std::size_t t = r.clause_count = f.clauses().size();
  const std::size_t members = r.member_count();
  const std::size_t n = 2 * members;

  std::vector<std::string> agent_names(n), object_names(n), bases(members);
  for (std::size_t m = 0; m < members; ++m) {
    bases[m] = detail::member_name(k, t, m);
    agent_names[ReducedInstance::agent(m)] = bases[m];
    agent_names[ReducedInstance::dummy(m)] = "d_" + bases[m];
    object_names[ReducedInstance::plus(m)] = "+" + bases[m];
    object_names[ReducedInstance::minus(m)] = "-" + bases[m];
  }
  std::vector<std::size_t> canonical(n);
  for (std::size_t o = 0; o < n; ++o) canonical[o] = o;
  std::sort(canonical.begin(), canonical.end(), [&](std::size_t a, std::size_t b) {
    if (bases[a / 2] != bases[b / 2]) return bases[a / 2] < bases[b / 2];
    return a % 2 < b % 2;
  });

  // V(l_{j,s}): the object of x_{j_s}^j matching the value that fails l.
  auto fail_object = [&](std::size_t j, const Literal& l) {
    const std::size_t m = r.member_x(l.var, j);
    return l.negated ? ReducedInstance::plus(m) : ReducedInstance::minus(m);
  };
  std::vector<std::vector<bool>> positive_in(k + 1, std::vector<bool>(t + 1, false));
  for (std::size_t j = 1; j <= t; ++j) {
    const Clause& c = f.clauses()[j - 1];
    r.s_sets[{c[0].var, j}] = fail_object(j, c[1]);
    r.s_sets[{c[1].var, j}] = fail_object(j, c[2]);
    r.s_sets[{c[2].var, j}] = ReducedInstance::plus(r.member_c(j));
    r.s_head.push_back(fail_object(j, c[0]));
    for (const auto& l : c) {
      if (!l.negated) positive_in[l.var][j] = true;
    }
  }

  std::vector<std::vector<std::size_t>> prefs(n);
  auto finish = [&](std::vector<std::size_t> head) {
    std::vector<bool> listed(n, false);
    for (std::size_t o : head) listed[o] = true;
    for (std::size_t o : canonical) {
      if (!listed[o]) head.push_back(o);
    }
    return head;
  };
  using RI = ReducedInstance;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t xi = r.member_x(i);
    std::vector<std::size_t> head{RI::plus(xi)};
    for (std::size_t j = 1; j <= t; ++j) head.push_back(RI::plus(r.member_x(i, j)));
    head.push_back(RI::minus(xi));
    prefs[RI::agent(xi)] = finish(std::move(head));
    prefs[RI::dummy(xi)] = finish({RI::plus(xi), RI::minus(xi)});

    for (std::size_t j = 1; j <= t; ++j) {
      const std::size_t xij = r.member_x(i, j);
      std::vector<std::size_t> s;
      if (auto it = r.s_sets.find({i, j}); it != r.s_sets.end()) s.push_back(it->second);
      std::vector<std::size_t> h;
      if (positive_in[i][j]) {
        h = s;
        h.insert(h.end(), {RI::minus(xij), RI::minus(xi), RI::plus(xij)});
      } else {
        h = {RI::minus(xij), RI::minus(xi)};
        h.insert(h.end(), s.begin(), s.end());
        h.push_back(RI::plus(xij));
      }
      prefs[RI::agent(xij)] = finish(std::move(h));
      prefs[RI::dummy(xij)] = finish({RI::minus(xij), RI::plus(xij)});
    }
  }
  {
    const std::size_t c = r.member_c();
    std::vector<std::size_t> head = r.s_head;
    head.push_back(RI::plus(c));
    for (std::size_t j = 1; j <= t; ++j) head.push_back(RI::plus(r.member_c(j)));
    head.push_back(RI::minus(c));
    prefs[RI::agent(c)] = finish(std::move(head));
    prefs[RI::dummy(c)] = finish({RI::plus(c), RI::minus(c)});
    for (std::size_t j = 1; j <= t; ++j) {
      const std::size_t cj = r.member_c(j);
      prefs[RI::agent(cj)] = finish({RI::minus(cj), RI::minus(c), RI::plus(cj)});
      prefs[RI::dummy(cj)] = finish({RI::minus(cj), RI::plus(cj)});
    }
  }
  r.profile = PreferenceProfile(std::move(agent_names), std::move(object_names), std::move(prefs));

  RationalMatrix m(n);
  const Rational half(1, 2);
  for (std::size_t x = 0; x < members; ++x) {
    for (std::size_t a : {RI::agent(x), RI::dummy(x)}) {
      m(a, RI::plus(x)) = half;
      m(a, RI::minus(x)) = half;
    }
  }
  r.p = RandomAssignment(std::move(m));
  return r;
}

/// The deterministic assignment in which every primary agent x holds +x
/// when positive[x] and -x otherwise, and its dummy holds the other object.
inline DeterministicAssignment assignment_from_signs(const ReducedInstance& r,
                                                     const std::vector<bool>& positive) {
  const std::size_t members = r.member_count();
  std::vector<std::size_t> object_of(2 * members);
  for (std::size_t m = 0; m < members; ++m) {
    const std::size_t mine = positive[m] ? ReducedInstance::plus(m) : ReducedInstance::minus(m);
    const std::size_t other = positive[m] ? ReducedInstance::minus(m) : ReducedInstance::plus(m);
    object_of[ReducedInstance::agent(m)] = mine;
    object_of[ReducedInstance::dummy(m)] = other;
  }
  return DeterministicAssignment(std::move(object_of));
}

/// Sign vector of M1 for valuation v: c and every c_j positive, x_i and
/// every x_i^j carrying v(x_i). No satisfiability check.
inline std::vector<bool> m1_signs(const ReducedInstance& r, const std::vector<bool>& v) {
  std::vector<bool> positive(r.member_count(), true);
  for (std::size_t i = 1; i <= r.var_count; ++i) {
    for (std::size_t j = 0; j <= r.clause_count; ++j) positive[r.member_x(i, j)] = v[i - 1];
  }
  return positive;
}

/// The two Pareto-optimal assignments M1 and M2 (M2 flips every sign of M1)
/// whose average is p. Refuses valuations that do not satisfy the formula.
inline std::pair<DeterministicAssignment, DeterministicAssignment> build_m1_m2(
    const ReducedInstance& r, const std::vector<bool>& v) {
  if (!r.formula.satisfied_by(v)) throw InputError("valuation does not satisfy the formula");
  std::vector<bool> signs = m1_signs(r, v);
  DeterministicAssignment m1 = assignment_from_signs(r, signs);
  signs.flip();
  return {std::move(m1), assignment_from_signs(r, signs)};
}

}  // namespace randeff
