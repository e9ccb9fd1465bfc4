#pragma once

#include "randeff/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace randeff {

/// Dense system A x = b over the rationals; rows of equal length.
struct LinearSystem {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  std::size_t columns() const { return rows.empty() ? 0 : rows.front().size(); }
};

/// Gaussian elimination on [A|b]. Drops rows that reduce to 0 = 0 and
/// returns nullopt when some row reduces to 0 = c with c != 0. The returned
/// system has full row rank and the same solution set.
inline std::optional<LinearSystem> reduce_rows(LinearSystem sys) {
  const std::size_t m = sys.rows.size();
  const std::size_t n = sys.columns();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && sys.rows[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(sys.rows[pivot], sys.rows[rank]);
    std::swap(sys.rhs[pivot], sys.rhs[rank]);
    const Rational inv = 1 / sys.rows[rank][col];
    for (std::size_t j = col; j < n; ++j) sys.rows[rank][j] *= inv;
    sys.rhs[rank] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || sys.rows[r][col] == 0) continue;
      const Rational f = sys.rows[r][col];
      for (std::size_t j = col; j < n; ++j) sys.rows[r][j] -= f * sys.rows[rank][j];
      sys.rhs[r] -= f * sys.rhs[rank];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < m; ++r) {
    if (sys.rhs[r] != 0) return std::nullopt;
  }
  sys.rows.resize(rank);
  sys.rhs.resize(rank);
  return sys;
}

/// Outcome of phase I on A x = b, x >= 0.
struct PhaseOneResult {
  /// Minimum total artificial slack; zero iff the system is feasible.
  Rational infeasibility;
  /// Basic solution (meaningful when infeasibility == 0).
  std::vector<Rational> x;
  /// Optimal dual multipliers y, one per input row. Every column a of A has
  /// y.a <= 0 and y.b == infeasibility, so y is a Farkas certificate when
  /// the system is infeasible.
  std::vector<Rational> duals;
};

/// Phase-I simplex over exact rationals with Bland's rule: minimizes the
/// sum of artificial variables. Redundant rows are allowed. The solution is
/// basic, so at most rank(A) coordinates of x are non-zero.
///
/// Bland's rule (smallest eligible entering index, ties in the ratio test
/// broken by smallest basic index) guarantees termination without any
/// perturbation or tolerance.
inline PhaseOneResult phase_one(const LinearSystem& sys) {
  const std::size_t m = sys.rows.size();
  const std::size_t n = sys.columns();

  // Columns [0, n) structural, [n, n + m) artificial.
  const std::size_t width = n + m;
  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(width));
  std::vector<Rational> rhs(m);
  std::vector<bool> flipped(m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    flipped[r] = sys.rhs[r] < 0;
    for (std::size_t j = 0; j < n; ++j) {
      tab[r][j] = flipped[r] ? Rational(-sys.rows[r][j]) : sys.rows[r][j];
    }
    rhs[r] = flipped[r] ? Rational(-sys.rhs[r]) : sys.rhs[r];
    tab[r][n + r] = 1;
    basis[r] = n + r;
  }
  // Reduced costs of min sum(artificials); `objective` holds minus its value.
  std::vector<Rational> cost(width);
  Rational objective = 0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tab[r][j];
    objective -= rhs[r];
  }

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t r = 0; r < m; ++r) {
      if (tab[r][enter] <= 0) continue;
      Rational ratio = rhs[r] / tab[r][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = std::move(ratio);
      }
    }
    // Phase I is bounded below by zero.
    if (leave == m) throw std::logic_error("phase-I simplex reported an unbounded direction");

    const Rational inv = 1 / tab[leave][enter];
    for (auto& v : tab[leave]) v *= inv;
    rhs[leave] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || tab[r][enter] == 0) continue;
      const Rational f = tab[r][enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (tab[leave][j] != 0) tab[r][j] -= f * tab[leave][j];
      }
      rhs[r] -= f * rhs[leave];
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (tab[leave][j] != 0) cost[j] -= f * tab[leave][j];
      }
      objective -= f * rhs[leave];
    }
    basis[leave] = enter;
  }

  PhaseOneResult result;
  result.infeasibility = -objective;
  result.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) result.x[basis[r]] = rhs[r];
  }
  // Artificial r has cost 1 and column e_r, so its reduced cost is 1 - pi_r.
  result.duals.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rational pi = 1 - cost[n + r];
    result.duals[r] = flipped[r] ? Rational(-pi) : pi;
  }
  return result;
}

/// x >= 0 with A x = b, or nullopt when none exists. Rows are reduced
/// first, so the returned basic solution has at most rank(A) non-zeros.
inline std::optional<std::vector<Rational>> find_nonnegative_solution(const LinearSystem& input) {
  const std::size_t n = input.columns();
  auto reduced = reduce_rows(input);
  if (!reduced) return std::nullopt;
  if (reduced->rows.empty()) return std::vector<Rational>(n, Rational(0));
  PhaseOneResult r = phase_one(*reduced);
  if (r.infeasibility != 0) return std::nullopt;
  return std::move(r.x);
}

}  // namespace randeff
