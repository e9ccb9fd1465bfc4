#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace randeff;

namespace {

Literal pos(std::size_t v) { return {v, false}; }
Literal neg(std::size_t v) { return {v, true}; }

SatInstance worked_example() {
  // (x2 or not x4 or x5) and (not x2 or x3 or x4)
  return SatInstance(5, {Clause{pos(2), neg(4), pos(5)}, Clause{neg(2), pos(3), pos(4)}});
}

SatInstance unsat3() {
  std::vector<Clause> clauses;
  for (int bits = 0; bits < 8; ++bits) {
    clauses.push_back(Clause{Literal{1, (bits & 4) != 0}, Literal{2, (bits & 2) != 0},
                             Literal{3, (bits & 1) != 0}});
  }
  return SatInstance(3, clauses);
}

std::string obj(const ReducedInstance& r, std::size_t o) { return r.profile.object_name(o); }

std::size_t agent_named(const PreferenceProfile& prof, const std::string& name) {
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (prof.agent_name(i) == name) return i;
  }
  throw std::runtime_error("no agent " + name);
}

std::size_t object_named(const PreferenceProfile& prof, const std::string& name) {
  for (std::size_t o = 0; o < prof.size(); ++o) {
    if (prof.object_name(o) == name) return o;
  }
  throw std::runtime_error("no object " + name);
}

}  // namespace

TEST(Cnf, ParseAndFormat) {
  std::istringstream in("c demo\np cnf 5 2\n2 -4 5 0\n-2 3 4 0\n");
  const SatInstance f = parse_cnf(in);
  EXPECT_EQ(f.var_count(), 5u);
  EXPECT_EQ(f.clauses(), worked_example().clauses());
  std::istringstream again(format_cnf(f));
  EXPECT_EQ(parse_cnf(again).clauses(), f.clauses());
}

TEST(Cnf, Validation) {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(parse_cnf(in), InputError) << text;
  };
  fails("1 2 3 0\n");                  // no header
  fails("p cnf 3 1\n1 2 0\n");         // two literals
  fails("p cnf 3 1\n2 1 3 0\n");       // not ascending
  fails("p cnf 3 1\n1 1 3 0\n");       // repeated variable
  fails("p cnf 3 1\n1 2 4 0\n");       // out of range
  fails("p cnf 3 2\n1 2 3 0\n");       // count mismatch
  fails("p cnf 3 1\n1 2 3\n");         // unterminated
  fails("p cnf 3 1\n1 2 x 0\n");       // junk
  EXPECT_THROW(SatInstance(2, {Clause{pos(1), pos(2), pos(3)}}), InputError);
}

TEST(BruteForceSat, SmallFormulas) {
  const auto v = brute_force_sat(worked_example());
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(worked_example().satisfied_by(*v));
  // x1 most significant, false before true; all-false already works here.
  EXPECT_EQ(*v, (std::vector<bool>(5, false)));
  const auto w = brute_force_sat(SatInstance(3, {Clause{pos(1), pos(2), pos(3)}}));
  EXPECT_EQ(*w, (std::vector<bool>{false, false, true}));
  EXPECT_FALSE(brute_force_sat(unsat3()).has_value());
  EXPECT_TRUE(brute_force_sat(SatInstance(0, {})).has_value());
}

TEST(Reduction, WorkedExampleSets) {
  const auto r = build_reduction(worked_example());
  EXPECT_EQ(r.profile.size(), 36u);
  EXPECT_EQ(obj(r, r.s_sets.at({2, 1})), "+x4_1");
  EXPECT_EQ(obj(r, r.s_sets.at({4, 1})), "-x5_1");
  EXPECT_EQ(obj(r, r.s_sets.at({5, 1})), "+c_1");
  EXPECT_EQ(obj(r, r.s_sets.at({2, 2})), "-x3_2");
  EXPECT_EQ(obj(r, r.s_sets.at({3, 2})), "-x4_2");
  EXPECT_EQ(obj(r, r.s_sets.at({4, 2})), "+c_2");
  EXPECT_EQ(r.s_sets.size(), 6u);
  ASSERT_EQ(r.s_head.size(), 2u);
  EXPECT_EQ(obj(r, r.s_head[0]), "-x2_1");
  EXPECT_EQ(obj(r, r.s_head[1]), "+x2_2");
}

TEST(Reduction, SingleClauseInstance) {
  const auto r = build_reduction(SatInstance(3, {Clause{pos(1), pos(2), pos(3)}}));
  EXPECT_EQ(r.profile.size(), 16u);
  ASSERT_EQ(r.s_head.size(), 1u);
  EXPECT_EQ(obj(r, r.s_head[0]), "-x1_1");
  EXPECT_EQ(obj(r, r.s_sets.at({1, 1})), "-x2_1");
  EXPECT_EQ(obj(r, r.s_sets.at({2, 1})), "-x3_1");
  EXPECT_EQ(obj(r, r.s_sets.at({3, 1})), "+c_1");
  // Ranking heads follow the tables.
  const auto& prof = r.profile;
  auto head = [&](const std::string& agent, std::size_t len) {
    std::vector<std::string> out;
    for (std::size_t o : prof.ranking(agent_named(prof, agent))) {
      if (out.size() == len) break;
      out.push_back(prof.object_name(o));
    }
    return out;
  };
  EXPECT_EQ(head("x1", 3), (std::vector<std::string>{"+x1", "+x1_1", "-x1"}));
  EXPECT_EQ(head("d_x1", 2), (std::vector<std::string>{"+x1", "-x1"}));
  EXPECT_EQ(head("x1_1", 4), (std::vector<std::string>{"-x2_1", "-x1_1", "-x1", "+x1_1"}));
  EXPECT_EQ(head("d_x1_1", 2), (std::vector<std::string>{"-x1_1", "+x1_1"}));
  EXPECT_EQ(head("c", 4), (std::vector<std::string>{"-x1_1", "+c", "+c_1", "-c"}));
  EXPECT_EQ(head("c_1", 3), (std::vector<std::string>{"-c_1", "-c", "+c_1"}));
  EXPECT_EQ(head("d_c_1", 2), (std::vector<std::string>{"-c_1", "+c_1"}));
  // Without the positive literal, S moves behind -x.
  const auto r2 = build_reduction(SatInstance(3, {Clause{neg(1), neg(2), neg(3)}}));
  const auto& p2 = r2.profile;
  std::vector<std::string> got;
  for (std::size_t o : p2.ranking(agent_named(p2, "x1_1"))) {
    if (got.size() == 4) break;
    got.push_back(p2.object_name(o));
  }
  EXPECT_EQ(got, (std::vector<std::string>{"-x1_1", "-x1", "+x2_1", "+x1_1"}));
}

TEST(Reduction, TailOrderIsCanonical) {
  const auto r = build_reduction(SatInstance(3, {Clause{pos(1), pos(2), pos(3)}}));
  const auto& prof = r.profile;
  const auto ranking = prof.ranking(agent_named(prof, "d_c"));
  std::vector<std::string> names;
  for (std::size_t o : ranking) names.push_back(prof.object_name(o));
  EXPECT_EQ(names, (std::vector<std::string>{"+c", "-c", "+c_1", "-c_1", "+x1", "-x1", "+x1_1",
                                             "-x1_1", "+x2", "-x2", "+x2_1", "-x2_1", "+x3",
                                             "-x3", "+x3_1", "-x3_1"}));
}

TEST(Reduction, MatrixIsHalfOnOwnPair) {
  const auto r = build_reduction(worked_example());
  const auto& prof = r.profile;
  const std::size_t x = agent_named(prof, "x3_2"), d = agent_named(prof, "d_x3_2");
  const std::size_t plus = object_named(prof, "+x3_2"), minus = object_named(prof, "-x3_2");
  EXPECT_EQ(r.p(x, plus), Rational(1, 2));
  EXPECT_EQ(r.p(d, minus), Rational(1, 2));
  EXPECT_EQ(support(r.p).count(), 2 * prof.size());
}

// Every sign vector is a consistent assignment and nothing else is.
TEST(Reduction, SupportAdmitsExactlyTheSignVectors) {
  const auto r = build_reduction(SatInstance(3, {Clause{pos(1), pos(2), pos(3)}}));
  const auto all = consistent_assignments(support(r.p));
  EXPECT_EQ(all.size(), std::size_t{1} << r.member_count());
  EXPECT_EQ(permanent_upper_bound(support(r.p)), BigInt(1) << r.member_count());
}

TEST(Reduction, DummiesAndPrimariesHaveOppositeSigns) {
  const auto r = build_reduction(SatInstance(3, {Clause{pos(1), neg(2), pos(3)}}));
  for (const auto& d : consistent_assignments(support(r.p))) {
    if (!is_pareto_optimal(r.profile, d)) continue;
    for (std::size_t m = 0; m < r.member_count(); ++m) {
      const bool primary_plus = d[ReducedInstance::agent(m)] == ReducedInstance::plus(m);
      const bool dummy_plus = d[ReducedInstance::dummy(m)] == ReducedInstance::plus(m);
      EXPECT_NE(primary_plus, dummy_plus);
    }
  }
}

TEST(Reduction, SatisfyingValuationGivesTwoParetoOptimalHalves) {
  const auto f = worked_example();
  const auto r = build_reduction(f);
  const auto v = *brute_force_sat(f);
  const auto [m1, m2] = build_m1_m2(r, v);
  EXPECT_TRUE(is_pareto_optimal(r.profile, m1));
  EXPECT_TRUE(is_pareto_optimal(r.profile, m2));
  Decomposition dec{{{Rational(1, 2), m1}, {Rational(1, 2), m2}}};
  EXPECT_TRUE(is_valid_decomposition(dec, r.p));
  // c holds +c in M1.
  EXPECT_EQ(m1[ReducedInstance::agent(r.member_c())], ReducedInstance::plus(r.member_c()));
}

TEST(Reduction, EverySatisfyingValuationWorks) {
  const auto f = SatInstance(4, {Clause{pos(1), neg(2), pos(4)}, Clause{neg(1), pos(3), neg(4)},
                                 Clause{pos(2), pos(3), pos(4)}});
  const auto r = build_reduction(f);
  int satisfying = 0;
  for (int bits = 0; bits < 16; ++bits) {
    std::vector<bool> v{(bits & 8) != 0, (bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
    if (!f.satisfied_by(v)) {
      EXPECT_THROW(build_m1_m2(r, v), InputError);
      continue;
    }
    ++satisfying;
    const auto [m1, m2] = build_m1_m2(r, v);
    EXPECT_TRUE(is_pareto_optimal(r.profile, m1));
    EXPECT_TRUE(is_pareto_optimal(r.profile, m2));
  }
  EXPECT_GT(satisfying, 0);
}

// With every variable false the clause x1 or x2 or x3 fails, and the
// aligned, c-positive assignment has the cycle through c and the copies.
TEST(Reduction, FalsifiedClauseYieldsTradingCycle) {
  const auto r = build_reduction(SatInstance(3, {Clause{pos(1), pos(2), pos(3)}}));
  const auto& prof = r.profile;
  const std::vector<bool> v{false, false, false};
  const auto d = assignment_from_signs(r, m1_signs(r, v));
  EXPECT_FALSE(is_pareto_optimal(prof, d));
  const TradingCycle cycle{{{agent_named(prof, "c"), object_named(prof, "+c")},
                            {agent_named(prof, "x1_1"), object_named(prof, "-x1_1")},
                            {agent_named(prof, "x2_1"), object_named(prof, "-x2_1")},
                            {agent_named(prof, "x3_1"), object_named(prof, "-x3_1")},
                            {agent_named(prof, "c_1"), object_named(prof, "+c_1")},
                            {agent_named(prof, "d_c"), object_named(prof, "-c")}}};
  EXPECT_TRUE(is_valid_trading_cycle(prof, d, cycle));
}

// Satisfiable reductions are decided by the pruned search without
// enumerating their 2^(members) consistent assignments.
TEST(Reduction, PrunedSearchFindsDecompositionWhenSatisfiable) {
  const auto f = SatInstance(3, {Clause{pos(1), neg(2), pos(3)}, Clause{neg(1), pos(2), neg(3)}});
  const auto r = build_reduction(f);
  const auto out = pruned_ex_post_search(r.profile, r.p);
  ASSERT_TRUE(out.result.has_value());
  EXPECT_EQ(out.result->verdict, HullVerdict::member);
  EXPECT_TRUE(is_valid_decomposition(*out.result->decomposition, r.p));
  for (const auto& t : out.result->decomposition->terms) {
    EXPECT_TRUE(is_pareto_optimal(r.profile, t.assignment));
  }
}

// Soundness on the unsatisfiable side: a short run may time out but must
// never claim membership.
TEST(Reduction, UnsatisfiableNeverReportsMember) {
  const auto r = build_reduction(unsat3());
  EXPECT_EQ(r.profile.size(), 72u);
  EXPECT_THROW(is_ex_post_efficient(r.profile, r.p), GuardExceeded);
  PrunedSearchOptions opt;
  opt.budget = std::chrono::milliseconds(2000);
  const auto out = pruned_ex_post_search(r.profile, r.p, opt);
  if (out.result) {
    EXPECT_EQ(out.result->verdict, HullVerdict::not_member);
  } else {
    EXPECT_FALSE(out.inconclusive_reason.empty());
  }
}
