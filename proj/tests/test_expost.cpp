#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace randeff;

namespace {

void expect_pareto_decomposition(const PreferenceProfile& prof, const RandomAssignment& p,
                                 const HullMembershipResult& r) {
  ASSERT_EQ(r.verdict, HullVerdict::member);
  ASSERT_TRUE(r.decomposition.has_value());
  EXPECT_TRUE(is_valid_decomposition(*r.decomposition, p));
  for (const auto& t : r.decomposition->terms) {
    EXPECT_TRUE(oracle::pareto_optimal(prof, t.assignment.objects()));
  }
  const std::size_t n = p.size();
  EXPECT_LE(r.decomposition->terms.size(), n * n - 2 * n + 2);
}

}  // namespace

TEST(ExPost, RsdMatrixIsMember) {
  const auto prof = oracle::example1_profile();
  const auto p = oracle::example1_p();
  const auto r = is_ex_post_efficient(prof, p);
  expect_pareto_decomposition(prof, p, r);
  EXPECT_EQ(r.generators_enumerated, 24u);
  EXPECT_EQ(r.pareto_generators, 12u);
}

TEST(ExPost, SameSupportMatrixIsNotMember) {
  const auto prof = oracle::example1_profile();
  const auto q = oracle::example1_q();
  const auto r = is_ex_post_efficient(prof, q);
  EXPECT_EQ(r.verdict, HullVerdict::not_member);
  EXPECT_EQ(r.reason, NonMemberReason::lp_infeasible);
  EXPECT_EQ(r.pareto_generators, 12u);
  EXPECT_FALSE(r.decomposition.has_value());
}

TEST(ExPost, InfeasibilityIsOrderInvariant) {
  const auto prof = oracle::example1_profile();
  const auto q = oracle::example1_q();
  std::vector<DeterministicAssignment> po;
  for (const auto& d : consistent_assignments(support(q))) {
    if (is_pareto_optimal(prof, d)) po.push_back(d);
  }
  std::mt19937_64 rng(51);
  for (int round = 0; round < 10; ++round) {
    std::vector<DeterministicAssignment> shuffled;
    for (std::size_t idx : random_permutation(rng, po.size())) shuffled.push_back(po[idx]);
    EXPECT_FALSE(lp_membership(q.matrix().cells(), shuffled).has_value());
  }
}

TEST(ExPost, ExampleThreeLpWeights) {
  const auto p = oracle::example3();
  const std::vector<DeterministicAssignment> gens{DeterministicAssignment::identity(4),
                                                  DeterministicAssignment({2, 3, 0, 1}),
                                                  DeterministicAssignment({1, 0, 2, 3})};
  const auto w = lp_membership(p.matrix().cells(), gens);
  ASSERT_TRUE(w.has_value());
  for (const auto& v : *w) EXPECT_EQ(v, Rational(1, 3));
}

TEST(ExPost, DeterministicParetoOptimalIsSingleTerm) {
  const auto prof = oracle::example1_profile();
  const auto d = serial_dictatorship(prof, AgentPermutation({2, 0, 1, 3}));
  const auto r = is_ex_post_efficient(prof, RandomAssignment(d));
  expect_pareto_decomposition(prof, RandomAssignment(d), r);
  EXPECT_EQ(r.decomposition->terms.size(), 1u);
}

TEST(ExPost, NoParetoGeneratorsReportedDistinctly) {
  const auto prof = PreferenceProfile::with_default_names({{0, 1}, {1, 0}});
  const RandomAssignment p(DeterministicAssignment({1, 0}));
  const auto r = is_ex_post_efficient(prof, p);
  EXPECT_EQ(r.verdict, HullVerdict::not_member);
  EXPECT_EQ(r.reason, NonMemberReason::no_pareto_generators);
  EXPECT_FALSE(has_consistent_pareto_optimal(prof, p).has_value());
  EXPECT_TRUE(has_consistent_pareto_optimal(oracle::example1_profile(), oracle::example1_p()));
}

TEST(ExPost, GuardExceededOnLargeSupport) {
  std::mt19937_64 rng(52);
  const auto prof = random_profile(rng, 12);
  EXPECT_THROW(is_ex_post_efficient(prof, uniform_assignment(12), 1000), GuardExceeded);
  EXPECT_THROW(check_enumeration_guard(support(uniform_assignment(12)), 1000), GuardExceeded);
  EXPECT_NO_THROW(check_enumeration_guard(support(uniform_assignment(6)), 720));
}

TEST(ExPost, PermanentBoundIsAnUpperBound) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + draw_below(rng, 6);
    const auto p = random_convex_assignment(rng, n, 1 + draw_below(rng, 6));
    const SupportMask mask = support(p);
    EXPECT_GE(permanent_upper_bound(mask), BigInt(oracle::consistent(p).size()));
    EXPECT_EQ(consistent_assignments(mask).size(), oracle::consistent(p).size());
  }
  // Full n x n support: n! exactly.
  EXPECT_EQ(permanent_upper_bound(support(uniform_assignment(5))), BigInt(120));
}

TEST(ExPost, MixturesOfParetoOptimalAreMembers) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + draw_below(rng, 4);
    const auto prof = random_profile(rng, n);
    RationalMatrix m(n);
    const std::size_t terms = 1 + draw_below(rng, 4);
    std::uint64_t total = 0;
    std::vector<std::pair<std::uint64_t, DeterministicAssignment>> parts;
    for (std::size_t k = 0; k < terms; ++k) {
      const auto order = random_permutation(rng, n);
      parts.emplace_back(1 + rng() % 5, serial_dictatorship(prof, AgentPermutation(order)));
      total += parts.back().first;
    }
    for (const auto& [w, d] : parts) {
      for (std::size_t i = 0; i < n; ++i) m(i, d[i]) += Rational(static_cast<long>(w), static_cast<long>(total));
    }
    const RandomAssignment p(m);
    expect_pareto_decomposition(prof, p, is_ex_post_efficient(prof, p));
  }
}

// Column generation reaches the same verdict as full enumeration.
TEST(ExPost, PrunedSearchAgreesWithEnumeration) {
  std::mt19937_64 rng(55);
  int members = 0, non_members = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto [prof, p] = oracle::random_case(rng, 2 + draw_below(rng, 4));
    const auto full = is_ex_post_efficient(prof, p);
    const auto pruned = pruned_ex_post_search(prof, p);
    ASSERT_TRUE(pruned.result.has_value());
    EXPECT_EQ(pruned.result->verdict, full.verdict);
    if (full.verdict == HullVerdict::member) {
      ++members;
      expect_pareto_decomposition(prof, p, *pruned.result);
    } else {
      ++non_members;
      EXPECT_EQ(pruned.result->reason, full.reason);
    }
  }
  EXPECT_GT(members, 10);
  EXPECT_GT(non_members, 10);
}

TEST(ExPost, PrunedSearchOnExampleOne) {
  const auto prof = oracle::example1_profile();
  const auto r = pruned_ex_post_search(prof, oracle::example1_p());
  ASSERT_TRUE(r.result.has_value());
  expect_pareto_decomposition(prof, oracle::example1_p(), *r.result);
  const auto rq = pruned_ex_post_search(prof, oracle::example1_q());
  ASSERT_TRUE(rq.result.has_value());
  EXPECT_EQ(rq.result->verdict, HullVerdict::not_member);
}

TEST(ExPost, ImplicationsBetweenNotions) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 150; ++trial) {
    const auto [prof, p] = oracle::random_case(rng, 2 + draw_below(rng, 4));
    const bool member = is_ex_post_efficient(prof, p).verdict == HullVerdict::member;
    const bool robust = is_robust_ex_post_efficient(prof, p).robust;
    if (is_sd_efficient(prof, p)) EXPECT_TRUE(robust);
    if (robust) EXPECT_TRUE(member);
  }
}

TEST(NoTopObject, CertificateCases) {
  const auto prof = oracle::example1_profile();
  const auto cert = no_top_object_certificate(prof, oracle::example1_p());
  ASSERT_TRUE(cert.has_value());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NE((*cert)[i], prof.top(i));
  EXPECT_TRUE(verify_non_robust_witness(prof, oracle::example1_p(), *cert));

  const auto d = serial_dictatorship(prof, AgentPermutation::identity(4));
  EXPECT_FALSE(no_top_object_certificate(prof, RandomAssignment(d)).has_value());
  const auto unanimous = PreferenceProfile::with_default_names({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  EXPECT_FALSE(no_top_object_certificate(unanimous, uniform_assignment(3)).has_value());
}
