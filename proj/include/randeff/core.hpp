#pragma once

#include "randeff/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace randeff {

/// Malformed or inconsistent input. `line()` is 0 when not tied to a file.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An enumeration or size limit would be exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(const std::string& what, std::string estimate)
      : std::runtime_error(what), estimate_(std::move(estimate)) {}
  const std::string& estimate() const noexcept { return estimate_; }

 private:
  std::string estimate_;
};

inline constexpr std::size_t kDefaultMaxAgents = 64;

// ---------------------------------------------------------------------------
// Preferences

/// Strict preferences of n agents over n objects. prefs[i] lists object
/// indices from most to least preferred.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;

  PreferenceProfile(std::vector<std::string> agent_names, std::vector<std::string> object_names,
                    std::vector<std::vector<std::size_t>> prefs)
      : agent_names_(std::move(agent_names)),
        object_names_(std::move(object_names)),
        prefs_(std::move(prefs)) {
    const std::size_t n = object_names_.size();
    if (n == 0) throw InputError("profile must contain at least one agent");
    if (agent_names_.size() != n || prefs_.size() != n) {
      throw InputError("number of agents (" + std::to_string(prefs_.size()) +
                       ") differs from number of objects (" + std::to_string(n) + ")");
    }
    rank_.assign(n, std::vector<std::size_t>(n, n));
    for (std::size_t i = 0; i < n; ++i) {
      if (prefs_[i].size() != n) {
        throw InputError("agent " + agent_names_[i] + " ranks " + std::to_string(prefs_[i].size()) +
                         " objects, expected " + std::to_string(n));
      }
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t o = prefs_[i][r];
        if (o >= n) throw InputError("agent " + agent_names_[i] + " ranks an unknown object");
        if (rank_[i][o] != n) {
          throw InputError("agent " + agent_names_[i] + " lists object " + object_names_[o] +
                           " twice");
        }
        rank_[i][o] = r;
      }
    }
  }

  /// Profile with agents named "1".."n" and objects "o1".."on".
  static PreferenceProfile with_default_names(std::vector<std::vector<std::size_t>> prefs) {
    std::vector<std::string> agents, objects;
    for (std::size_t i = 0; i < prefs.size(); ++i) {
      agents.push_back(std::to_string(i + 1));
      objects.push_back("o" + std::to_string(i + 1));
    }
    return PreferenceProfile(std::move(agents), std::move(objects), std::move(prefs));
  }

  std::size_t size() const noexcept { return prefs_.size(); }
  const std::string& agent_name(std::size_t agent) const { return agent_names_[agent]; }
  const std::string& object_name(std::size_t object) const { return object_names_[object]; }
  const std::vector<std::string>& agent_names() const noexcept { return agent_names_; }
  const std::vector<std::string>& object_names() const noexcept { return object_names_; }

  std::span<const std::size_t> ranking(std::size_t agent) const { return prefs_[agent]; }
  std::size_t rank(std::size_t agent, std::size_t object) const { return rank_[agent][object]; }
  std::size_t top(std::size_t agent) const { return prefs_[agent].front(); }

  /// a strictly preferred to b by `agent`.
  bool prefers(std::size_t agent, std::size_t a, std::size_t b) const {
    return rank_[agent][a] < rank_[agent][b];
  }

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.agent_names_ == b.agent_names_ && a.object_names_ == b.object_names_ &&
           a.prefs_ == b.prefs_;
  }

 private:
  std::vector<std::string> agent_names_;
  std::vector<std::string> object_names_;
  std::vector<std::vector<std::size_t>> prefs_;
  std::vector<std::vector<std::size_t>> rank_;
};

// ---------------------------------------------------------------------------
// Matrices

/// Dense n x n grid of rationals indexed [agent][object]; no invariants.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t o) { return cells_[i * n_ + o]; }
  const Rational& operator()(std::size_t i, std::size_t o) const { return cells_[i * n_ + o]; }
  std::span<const Rational> row(std::size_t i) const { return {cells_.data() + i * n_, n_}; }
  std::span<const Rational> cells() const noexcept { return cells_; }

  bool is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Rational& v) { return v == 0; });
  }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> cells_;
};

/// Agent -> object bijection (a permutation matrix).
class DeterministicAssignment {
 public:
  DeterministicAssignment() = default;
  explicit DeterministicAssignment(std::vector<std::size_t> object_of)
      : object_of_(std::move(object_of)) {
    const std::size_t n = object_of_.size();
    std::vector<bool> used(n, false);
    for (std::size_t o : object_of_) {
      if (o >= n || used[o]) throw InputError("assignment is not a bijection");
      used[o] = true;
    }
  }

  static DeterministicAssignment identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return DeterministicAssignment(std::move(v));
  }

  std::size_t size() const noexcept { return object_of_.size(); }
  std::size_t operator[](std::size_t agent) const { return object_of_[agent]; }
  const std::vector<std::size_t>& objects() const noexcept { return object_of_; }

  std::vector<std::size_t> agents_by_object() const {
    std::vector<std::size_t> inv(object_of_.size());
    for (std::size_t i = 0; i < object_of_.size(); ++i) inv[object_of_[i]] = i;
    return inv;
  }

  RationalMatrix to_matrix() const {
    RationalMatrix m(size());
    for (std::size_t i = 0; i < size(); ++i) m(i, object_of_[i]) = 1;
    return m;
  }

  friend auto operator<=>(const DeterministicAssignment&, const DeterministicAssignment&) = default;

 private:
  std::vector<std::size_t> object_of_;
};

/// Bistochastic matrix of exact probabilities: entries in [0,1], every row
/// and column summing to exactly 1.
class RandomAssignment {
 public:
  RandomAssignment() = default;

  explicit RandomAssignment(RationalMatrix matrix) : matrix_(std::move(matrix)) {
    const std::size_t n = matrix_.size();
    if (n == 0) throw InputError("assignment matrix is empty");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < n; ++o) {
        const Rational& v = matrix_(i, o);
        if (v < 0 || v > 1) {
          throw InputError("entry (" + std::to_string(i + 1) + "," + std::to_string(o + 1) +
                           ") = " + format_rational(v) + " is outside [0,1]");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rational row = 0, col = 0;
      for (std::size_t o = 0; o < n; ++o) {
        row += matrix_(i, o);
        col += matrix_(o, i);
      }
      if (row != 1) {
        throw InputError("row " + std::to_string(i + 1) + " sums to " + format_rational(row) +
                         ", expected 1");
      }
      if (col != 1) {
        throw InputError("column " + std::to_string(i + 1) + " sums to " + format_rational(col) +
                         ", expected 1");
      }
    }
  }

  explicit RandomAssignment(const DeterministicAssignment& d) : matrix_(d.to_matrix()) {}

  std::size_t size() const noexcept { return matrix_.size(); }
  const Rational& operator()(std::size_t i, std::size_t o) const { return matrix_(i, o); }
  std::span<const Rational> row(std::size_t i) const { return matrix_.row(i); }
  const RationalMatrix& matrix() const noexcept { return matrix_; }

  friend bool operator==(const RandomAssignment&, const RandomAssignment&) = default;

 private:
  RationalMatrix matrix_;
};

// ---------------------------------------------------------------------------
// Support

/// positive(i, o) <=> p(i)(o) > 0. Masks built by support() have at least
/// one true cell per row and column; hand-built masks may not.
class SupportMask {
 public:
  SupportMask() = default;
  explicit SupportMask(std::size_t n, bool value = false) : n_(n), cells_(n * n, value) {}

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t o) const { return cells_[i * n_ + o] != 0; }
  void set(std::size_t i, std::size_t o, bool value = true) { cells_[i * n_ + o] = value; }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
  }
  std::size_t row_degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t o = 0; o < n_; ++o) d += cells_[i * n_ + o];
    return d;
  }
  std::size_t column_degree(std::size_t o) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n_; ++i) d += cells_[i * n_ + o];
    return d;
  }

  friend bool operator==(const SupportMask&, const SupportMask&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> cells_;
};

inline SupportMask support(const RationalMatrix& m) {
  SupportMask mask(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t o = 0; o < m.size(); ++o) {
      if (m(i, o) > 0) mask.set(i, o);
    }
  }
  return mask;
}

inline SupportMask support(const RandomAssignment& p) { return support(p.matrix()); }

/// Every matched cell of `d` is positive in `mask`.
inline bool is_consistent(const DeterministicAssignment& d, const SupportMask& mask) {
  if (d.size() != mask.size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!mask(i, d[i])) return false;
  }
  return true;
}

inline bool is_consistent(const DeterministicAssignment& d, const RandomAssignment& p) {
  return is_consistent(d, support(p));
}

// ---------------------------------------------------------------------------
// Decompositions

struct DecompositionTerm {
  Rational weight;
  DeterministicAssignment assignment;
  friend bool operator==(const DecompositionTerm&, const DecompositionTerm&) = default;
};

/// Convex combination sum_k weight_k * P_k.
struct Decomposition {
  std::vector<DecompositionTerm> terms;

  RationalMatrix reconstruct(std::size_t n) const {
    RationalMatrix m(n);
    for (const auto& t : terms) {
      for (std::size_t i = 0; i < n; ++i) m(i, t.assignment[i]) += t.weight;
    }
    return m;
  }
};

/// Weights positive and summing to 1, every term consistent with p, and the
/// weighted sum reproducing p cell for cell.
inline bool is_valid_decomposition(const Decomposition& dec, const RandomAssignment& p) {
  if (dec.terms.empty()) return false;
  const SupportMask mask = support(p);
  Rational total = 0;
  for (const auto& t : dec.terms) {
    if (t.weight <= 0 || t.weight > 1) return false;
    if (!is_consistent(t.assignment, mask)) return false;
    total += t.weight;
  }
  return total == 1 && dec.reconstruct(p.size()) == p.matrix();
}

// ---------------------------------------------------------------------------
// Stochastic dominance

/// Outcome of comparing two allocations for one agent under the SD relation.
/// With exact sums "all prefix sums >=" is either `equal` or
/// `strictly_prefers`; `strictly_dispreferred` is the mirror case.
enum class SdRelation { equal, strictly_prefers, strictly_dispreferred, incomparable };

inline bool weakly_sd_prefers(SdRelation r) {
  return r == SdRelation::equal || r == SdRelation::strictly_prefers;
}

inline const char* to_string(SdRelation r) {
  switch (r) {
    case SdRelation::equal: return "equal";
    case SdRelation::strictly_prefers: return "strictly_prefers";
    case SdRelation::strictly_dispreferred: return "strictly_dispreferred";
    case SdRelation::incomparable: return "incomparable";
  }
  return "?";
}

/// Compares allocation rows a and b for `agent` by cumulative probability
/// over each upper contour set of the agent's ranking.
inline SdRelation sd_prefers(const PreferenceProfile& profile, std::size_t agent,
                             std::span<const Rational> a, std::span<const Rational> b) {
  const std::size_t n = profile.size();
  auto check = [n](std::span<const Rational> row) {
    if (row.size() != n) throw InputError("allocation row has wrong length");
    Rational sum = 0;
    for (const auto& v : row) {
      if (v < 0 || v > 1) throw InputError("allocation entry outside [0,1]");
      sum += v;
    }
    if (sum != 1) throw InputError("allocation row sums to " + format_rational(sum));
  };
  check(a);
  check(b);
  Rational cum_a = 0, cum_b = 0;
  bool some_greater = false, some_less = false;
  for (std::size_t o : profile.ranking(agent)) {
    cum_a += a[o];
    cum_b += b[o];
    if (cum_a > cum_b) some_greater = true;
    if (cum_a < cum_b) some_less = true;
  }
  if (some_greater && some_less) return SdRelation::incomparable;
  if (some_greater) return SdRelation::strictly_prefers;
  if (some_less) return SdRelation::strictly_dispreferred;
  return SdRelation::equal;
}

}  // namespace randeff
