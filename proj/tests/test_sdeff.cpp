#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace randeff;

TEST(SdEfficiency, ExampleOneHasCycleBetweenOneAndThree) {
  const auto prof = oracle::example1_profile();
  const auto p = oracle::example1_p();
  const auto c = find_consistent_cycle(prof, p);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(is_valid_consistent_cycle(prof, support(p), *c));
  EXPECT_EQ(render_cycle(prof, *c), "1 —holds o2, wants o1→ 3 —holds o1, wants o2→ 1");
  EXPECT_FALSE(is_sd_efficient(prof, p));
}

TEST(SdEfficiency, UniformTwoAgentSwap) {
  const auto prof = PreferenceProfile::with_default_names({{0, 1}, {1, 0}});
  const auto u = uniform_assignment(2);
  const auto c = find_consistent_cycle(prof, u);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->entries.size(), 2u);
  EXPECT_EQ(max_cycle_shift(u, *c), Rational(1, 2));
  const auto q = execute_cycle(u, *c, Rational(1, 2));
  EXPECT_EQ(q, RandomAssignment(DeterministicAssignment::identity(2)));
  EXPECT_TRUE(is_sd_efficient(prof, q));
}

TEST(SdEfficiency, UniformOnUnanimousProfileIsEfficient) {
  const auto prof = PreferenceProfile::with_default_names({{2, 0, 1}, {2, 0, 1}, {2, 0, 1}});
  EXPECT_TRUE(is_sd_efficient(prof, uniform_assignment(3)));
}

TEST(SdEfficiency, ParetoOptimalDeterministicIsEfficient) {
  const auto prof = oracle::example1_profile();
  const auto d = serial_dictatorship(prof, AgentPermutation({3, 1, 0, 2}));
  EXPECT_TRUE(is_sd_efficient(prof, RandomAssignment(d)));
}

TEST(SdEfficiency, AgreesWithObjectRelationOracle) {
  std::mt19937_64 rng(21);
  int efficient = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto [prof, p] = oracle::random_case(rng, 2 + draw_below(rng, 5));
    const auto c = find_consistent_cycle(prof, p);
    EXPECT_EQ(!c.has_value(), oracle::sd_efficient(prof, p));
    if (c) {
      EXPECT_TRUE(is_valid_consistent_cycle(prof, support(p), *c));
    } else {
      ++efficient;
    }
  }
  EXPECT_GT(efficient, 10);  // both outcomes exercised
}

// Moving epsilon along a found cycle SD-improves every agent on it and
// leaves everyone else unchanged.
TEST(SdEfficiency, ExecutingACycleSdImproves) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [prof, p] = oracle::random_case(rng, 2 + draw_below(rng, 5));
    const auto c = find_consistent_cycle(prof, p);
    if (!c) continue;
    const Rational eps = max_cycle_shift(p, *c) / (1 + draw_below(rng, 3));
    const auto q = execute_cycle(p, *c, eps);
    std::vector<bool> on_cycle(prof.size());
    for (const auto& e : c->entries) on_cycle[e.agent] = true;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      EXPECT_EQ(sd_prefers(prof, i, q.row(i), p.row(i)),
                on_cycle[i] ? SdRelation::strictly_prefers : SdRelation::equal);
    }
  }
}

// The verdict depends only on the support.
TEST(SdEfficiency, Combinatorial) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + draw_below(rng, 4);
    const auto prof = random_profile(rng, n);
    const auto p = random_convex_assignment(rng, n, 3);
    // Same support, different weights: average with the Birkhoff terms
    // reweighted uniformly.
    const auto dec = birkhoff_decompose(p);
    RationalMatrix m(n);
    for (const auto& t : dec.terms) {
      for (std::size_t i = 0; i < n; ++i) {
        m(i, t.assignment[i]) += Rational(1, static_cast<long>(dec.terms.size()));
      }
    }
    const RandomAssignment q(m);
    ASSERT_EQ(support(q).count(), support(p).count());
    EXPECT_EQ(is_sd_efficient(prof, p), is_sd_efficient(prof, q));
  }
}
