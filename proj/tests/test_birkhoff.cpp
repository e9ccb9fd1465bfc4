#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace randeff;

TEST(Birkhoff, PeelIdentityFromExampleThree) {
  const auto p = oracle::example3();
  const auto [lambda, rest] = peel(p, DeterministicAssignment::identity(4));
  EXPECT_EQ(lambda, Rational(1, 3));
  EXPECT_EQ(rest(0, 0), 0);
  EXPECT_EQ(rest(2, 2), Rational(1, 3));
  EXPECT_EQ(support(rest).count(), 8u);
}

TEST(Birkhoff, PeelOutsideSupportThrows) {
  EXPECT_THROW(peel(oracle::example3(), DeterministicAssignment({3, 0, 1, 2})), InputError);
}

TEST(Birkhoff, ExampleThreeHasThreeEqualTerms) {
  const auto p = oracle::example3();
  const auto dec = birkhoff_decompose(p);
  EXPECT_TRUE(is_valid_decomposition(dec, p));
  ASSERT_EQ(dec.terms.size(), 3u);
  for (const auto& t : dec.terms) EXPECT_EQ(t.weight, Rational(1, 3));
}

TEST(Birkhoff, DeterministicInputGivesOneTerm) {
  const DeterministicAssignment d({2, 0, 1});
  const auto dec = birkhoff_decompose(RandomAssignment(d));
  ASSERT_EQ(dec.terms.size(), 1u);
  EXPECT_EQ(dec.terms[0].assignment, d);
  EXPECT_EQ(dec.terms[0].weight, 1);
}

TEST(Birkhoff, RandomMatricesReconstructExactly) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + draw_below(rng, 7);
    const auto p = random_convex_assignment(rng, n, 1 + draw_below(rng, 8));
    const auto dec = birkhoff_decompose(p);
    EXPECT_TRUE(is_valid_decomposition(dec, p));
    EXPECT_LE(dec.terms.size(), n * n - n + 1);
  }
}
