#include <gtest/gtest.h>

#include "couponq/exact_rational.hpp"

using namespace couponq;

TEST(ExactRational, LowestTermsPositiveDenominator) {
  const ExactRational r(BigInt(6), BigInt(-27));
  EXPECT_EQ(r.numerator(), -2);
  EXPECT_EQ(r.denominator(), 9);
  EXPECT_EQ(ExactRational(BigInt(0), BigInt(5)), ExactRational(BigInt(0), BigInt(1)));
  EXPECT_THROW(ExactRational(BigInt(1), BigInt(0)), Error);
}

TEST(ExactRational, ToDouble) {
  EXPECT_EQ(ExactRational(BigInt(1), BigInt(3)).to_double(), 1.0 / 3.0);
  EXPECT_EQ(ExactRational(BigInt(-7), BigInt(8)).to_double(), -0.875);
  BigInt big = 1;
  for (int i = 0; i < 300; ++i) big *= 10;
  EXPECT_DOUBLE_EQ(ExactRational(big + 1, big * 4).to_double(), 0.25);
}

TEST(CdfOracle, Examples) {
  EXPECT_EQ(cdf_oracle(1, 1), ExactRational(BigInt(1), BigInt(1)));
  EXPECT_EQ(cdf_oracle(2, 2), ExactRational(BigInt(1), BigInt(2)));
  EXPECT_EQ(cdf_oracle(3, 3), ExactRational(BigInt(6), BigInt(27)));
  EXPECT_EQ(cdf_oracle(3, 3).str(), "2/9");
  EXPECT_EQ(cdf_oracle(4, 3), ExactRational(BigInt(0), BigInt(1)));
}

TEST(CdfOracle, SurjectionCountsMatchStirlingNumbers) {
  // Surjections from 5 draws onto 3 types: 3! S(5,3) = 6 * 25 = 150.
  EXPECT_EQ(cdf_oracle(3, 5), ExactRational(BigInt(150), BigInt(243)));
  // Onto 4 types from 6 draws: 4! S(6,4) = 24 * 65 = 1560.
  EXPECT_EQ(cdf_oracle(4, 6), ExactRational(BigInt(1560), BigInt(4096)));
}

TEST(CdfOracle, RangeLimits) {
  EXPECT_NO_THROW(cdf_oracle(12, 200));
  try {
    cdf_oracle(13, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::oracle_range);
  }
  try {
    cdf_oracle(5, 201);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::oracle_range);
  }
}
