#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "couponq/asymptotics.hpp"
#include "couponq/coupon_core.hpp"
#include "couponq/exact_rational.hpp"

using namespace couponq;

namespace {

// Brute-force P(Y <= y): enumerate all a^y draw sequences.
double enumerate_cdf(int a, int y) {
  std::vector<int> seq(static_cast<std::size_t>(y), 0);
  std::uint64_t covered = 0, total = 0;
  while (true) {
    std::uint64_t mask = 0;
    for (int s : seq) mask |= 1ULL << s;
    covered += mask == (1ULL << a) - 1 ? 1 : 0;
    ++total;
    std::size_t pos = 0;
    while (pos < seq.size() && seq[pos] == a - 1) seq[pos++] = 0;
    if (pos == seq.size()) break;
    ++seq[pos];
  }
  return static_cast<double>(covered) / static_cast<double>(total);
}

// Var Y as a sum of independent geometric waiting times.
double geometric_sum_variance(int a) {
  double v = 0.0;
  for (int k = 1; k <= a; ++k) {
    const double p = static_cast<double>(a - k + 1) / a;
    v += (1.0 - p) / (p * p);
  }
  return v;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected couponq::Error";
  return ErrorKind::domain_error;
}

}  // namespace

TEST(BankSpec, RejectsInvalidAndOversizedBanks) {
  EXPECT_EQ(kind_of([] { BankSpec(0, 1); }), ErrorKind::invalid_spec);
  EXPECT_EQ(kind_of([] { BankSpec(3, 0); }), ErrorKind::invalid_spec);
  EXPECT_EQ(kind_of([] { BankSpec(65, 1); }), ErrorKind::unsupported_a);
  EXPECT_NO_THROW(BankSpec(1, 1));
  EXPECT_NO_THROW(BankSpec(64, 1'000'000));
}

TEST(TruncationPolicy, Validation) {
  EXPECT_EQ(kind_of([] { TruncationPolicy{0.0, 10, true}.validate(); }), ErrorKind::invalid_spec);
  EXPECT_EQ(kind_of([] { TruncationPolicy{1.0, 10, true}.validate(); }), ErrorKind::invalid_spec);
  EXPECT_EQ(kind_of([] { TruncationPolicy{1e-6, 0, true}.validate(); }), ErrorKind::invalid_spec);
}

TEST(ExpectedSingleBank, Examples) {
  EXPECT_DOUBLE_EQ(expected_single_bank(1), 1.0);
  EXPECT_NEAR(expected_single_bank(10), 29.29, 0.005);
  // 20 H_20 = 71.954793142873..., from exact rational summation.
  EXPECT_NEAR(expected_single_bank(20), 71.95479314287364, 1e-12);
  EXPECT_EQ(kind_of([] { expected_single_bank(0); }), ErrorKind::invalid_spec);
}

TEST(ExpectedSingleBank, GeometricDecomposition) {
  for (int a = 1; a <= 6; ++a) {
    double reindexed = 0.0;
    for (int k = 1; k <= a; ++k) reindexed += static_cast<double>(a) / (a - k + 1);
    EXPECT_NEAR(expected_single_bank(a), reindexed, 1e-13) << "a=" << a;
    EXPECT_NEAR(expected_single_bank(a), expected_tests(BankSpec(a, 1)).value, 1e-9) << "a=" << a;
  }
}

TEST(SingleBankSurvival, Examples) {
  EXPECT_EQ(single_bank_survival(2, 1).p, 1.0);
  EXPECT_NEAR(single_bank_survival(2, 3).p, 0.25, 1e-15);
  EXPECT_NEAR(single_bank_survival(2, 3).p, 1.0 - enumerate_cdf(2, 3), 1e-15);
  for (int y = 200; y <= 600; y += 50) {
    const double dominant = 10.0 * std::pow(0.9, y);
    EXPECT_NEAR(single_bank_survival(10, y).p / dominant, 1.0, 0.01) << "y=" << y;
  }
  EXPECT_NEAR(single_bank_survival(10, 400).p / (10.0 * std::pow(0.9, 400)), 1.0, 1e-3);
}

TEST(SingleBankSurvival, DegenerateAndGate) {
  EXPECT_EQ(single_bank_survival(1, 0).p, 1.0);
  EXPECT_EQ(single_bank_survival(1, 1).p, 0.0);
  EXPECT_EQ(single_bank_survival(1, 7).p, 0.0);
  EXPECT_EQ(kind_of([] { single_bank_survival(65, 100); }), ErrorKind::unsupported_a);
  EXPECT_EQ(kind_of([] { single_bank_survival(0, 1); }), ErrorKind::invalid_spec);
}

TEST(SingleBankCdf, Examples) {
  EXPECT_EQ(single_bank_cdf(3, 2).p, 0.0);
  EXPECT_NEAR(single_bank_cdf(3, 3).p, 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(single_bank_cdf(5, 11).p, cdf_oracle(5, 11).to_double(), 1e-12);
}

TEST(SingleBankCdf, ZeroBelowA) {
  for (int a = 1; a <= 64; ++a)
    for (int y = 0; y < a; ++y) ASSERT_EQ(single_bank_cdf(a, y).p, 0.0) << a << "," << y;
}

TEST(SingleBankCdf, MatchesEnumeration) {
  for (int a = 1; a <= 4; ++a)
    for (int y = 0; y <= 9; ++y)
      EXPECT_NEAR(single_bank_cdf(a, y).p, enumerate_cdf(a, y), 1e-14) << a << "," << y;
}

TEST(SingleBankCdf, OracleEquivalence) {
  for (int a = 1; a <= 8; ++a) {
    SingleBankLaw law(a);
    for (std::int64_t y = a; y <= 60; ++y)
      ASSERT_LE(std::fabs(law.cdf(y).p - cdf_oracle(a, y).to_double()), 1e-12) << a << "," << y;
  }
}

TEST(SingleBankCdf, ExtremeCancellationNearA) {
  // F(20) for a = 20 is 20!/20^20, about 2.3e-8, from terms of order 1e5.
  const ExactRational exact = cdf_oracle(12, 12);
  EXPECT_NEAR(single_bank_cdf(12, 12).p, exact.to_double(), 1e-15);
  const double f20 = single_bank_cdf(20, 20).p;
  double expected = 1.0;
  for (int k = 1; k <= 20; ++k) expected *= k / 20.0;
  EXPECT_NEAR(f20, expected, 1e-15);
}

TEST(SingleBankCdf, CertifiedErrorBelowBudget) {
  for (int a : {2, 5, 10, 20, 33, 50, 64}) {
    SingleBankLaw law(a);
    for (std::int64_t y = a; y <= 40LL * a; y += 1 + a / 8) {
      ASSERT_LT(law.cdf(y).abs_err, 1e-9) << a << "," << y;
      ASSERT_LT(law.survival(y).abs_err, 1e-9) << a << "," << y;
      ASSERT_GE(law.cdf(y).p, 0.0);
      ASSERT_LE(law.cdf(y).p, 1.0);
    }
  }
}

TEST(SingleBankCdf, ErrorBoundCoversTrueErrorAtA12) {
  SingleBankLaw law(12);
  for (std::int64_t y = 12; y <= 200; ++y) {
    const double err = std::fabs(law.cdf(y).p - cdf_oracle(12, y).to_double());
    ASSERT_LE(err, law.cdf(y).abs_err + 1e-17) << "y=" << y;
  }
}

TEST(SingleBankCdf, MonotoneInY) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> pick_a(1, 64);
  for (int trial = 0; trial < 40; ++trial) {
    const int a = pick_a(gen);
    SingleBankLaw law(a);
    double prev = 0.0;
    for (std::int64_t y = 0; y <= 30LL * a; ++y) {
      const double f = law.cdf(y).p;
      ASSERT_GE(f, prev - law.cdf(y).abs_err) << a << "," << y;
      prev = f;
    }
  }
}

TEST(TestCountCdf, Examples) {
  for (int a : {2, 5, 10, 64}) EXPECT_EQ(test_count_cdf(BankSpec(a, 3), a - 1).p, 0.0);
  EXPECT_EQ(test_count_cdf(BankSpec(1, 5), 1).p, 1.0);
  const double f = single_bank_cdf(5, 20).p;
  EXPECT_NEAR(test_count_cdf(BankSpec(5, 3), 20).p, f * f * f, 1e-15);
}

TEST(TestCountCdf, ErrorPropagation) {
  const ProbValue f = single_bank_cdf(10, 40);
  const ProbValue g = test_count_cdf(BankSpec(10, 7), 40);
  EXPECT_DOUBLE_EQ(g.abs_err, 7 * f.abs_err);
}

TEST(TestCountCdf, MonotoneInNAndQ) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> pick_a(1, 40);
  std::uniform_int_distribution<std::int64_t> pick_q(1, 100'000);
  for (int trial = 0; trial < 30; ++trial) {
    const int a = pick_a(gen);
    const std::int64_t q = pick_q(gen);
    SingleBankLaw law(a);
    double prev = 0.0;
    for (std::int64_t n = 0; n <= 40LL * a; ++n) {
      const double p = detail::test_count_cdf(law, q, n).p;
      ASSERT_GE(p, prev) << a << "," << q << "," << n;
      ASSERT_LE(p, detail::test_count_cdf(law, std::max<std::int64_t>(1, q / 2), n).p + 1e-15);
      prev = p;
    }
  }
}

TEST(TestCountPmf, Examples) {
  EXPECT_EQ(test_count_pmf(BankSpec(1, 3), 1).p, 1.0);
  EXPECT_NEAR(test_count_pmf(BankSpec(2, 1), 2).p, 0.5, 1e-15);
  EXPECT_EQ(kind_of([] { test_count_pmf(BankSpec(2, 1), 0); }), ErrorKind::invalid_spec);
}

TEST(TestCountPmf, Normalization) {
  const BankSpec spec(10, 10);
  const SeriesValue e = expected_tests(spec);
  SingleBankLaw law(10);
  double total = 0.0;
  for (std::int64_t n = 1; n <= e.terms; ++n) total += detail::test_count_pmf(law, 10, n).p;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(TestCountPmf, NonNegative) {
  for (int a : {3, 10, 30})
    for (std::int64_t q : {1, 100, 1'000'000}) {
      SingleBankLaw law(a);
      for (std::int64_t n = 1; n <= 60LL * a; ++n) ASSERT_GE(detail::test_count_pmf(law, q, n).p, 0.0);
    }
}

TEST(ExpectedTests, Examples) {
  for (std::int64_t q : {1, 7, 1'000'000}) EXPECT_EQ(expected_tests(BankSpec(1, q)).value, 1.0);
  EXPECT_NEAR(expected_tests(BankSpec(10, 10)).value, 49.9, 0.05);
  EXPECT_NEAR(expected_tests(BankSpec(20, 200)).value, 173.5, 0.05);
}

TEST(ExpectedTests, CarriesCertificate) {
  const TruncationPolicy policy;
  for (int a : {2, 5, 20, 64})
    for (std::int64_t q : {1, 50, 1'000'000}) {
      const SeriesValue v = expected_tests(BankSpec(a, q), policy);
      EXPECT_LE(v.tail_bound, 10 * policy.eps_term) << a << "," << q;
      EXPECT_GT(v.terms, a);
    }
}

TEST(ExpectedTests, CapExceeded) {
  TruncationPolicy policy;
  policy.n_cap = 30;
  EXPECT_EQ(kind_of([&] { expected_tests(BankSpec(10, 10), policy); }), ErrorKind::cap_exceeded);
  EXPECT_EQ(kind_of([&] { variance_tests(BankSpec(10, 10), policy); }), ErrorKind::cap_exceeded);
}

TEST(ExpectedTests, UncertifiedStopsEarlier) {
  TruncationPolicy loose;
  loose.tail_bound_required = false;
  const SeriesValue fast = expected_tests(BankSpec(10, 100), loose);
  const SeriesValue certified = expected_tests(BankSpec(10, 100));
  EXPECT_LE(fast.terms, certified.terms);
  EXPECT_NEAR(fast.value, certified.value, 1e-9);
}

TEST(ExpectedTests, IncreasingInQ) {
  for (int a : {2, 5, 10}) {
    double prev = 0.0;
    for (std::int64_t q = 1; q <= 300; q += 7) {
      const double v = expected_tests(BankSpec(a, q)).value;
      ASSERT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(ExpectedTestsMultisum, Examples) {
  EXPECT_NEAR(expected_tests_multisum(BankSpec(2, 1)), 3.0, 1e-12);
  EXPECT_NEAR(expected_tests_multisum(BankSpec(2, 1)), expected_single_bank(2), 1e-12);
  EXPECT_NEAR(expected_tests_multisum(BankSpec(5, 1)), 11.42, 0.005);
  EXPECT_NEAR(expected_tests_multisum(BankSpec(5, 3)), expected_tests(BankSpec(5, 3)).value, 1e-9);
}

TEST(ExpectedTestsMultisum, AgreesWithSeriesOnWholeRange) {
  for (std::int64_t q = 1; q <= 4; ++q)
    for (int a = 1; a <= 6; ++a) {
      if (!multisum_admissible(a, q)) continue;
      const BankSpec spec(a, q);
      EXPECT_NEAR(expected_tests_multisum(spec), expected_tests(spec).value, 1e-9) << a << "," << q;
    }
}

TEST(ExpectedTestsMultisum, RangeLimits) {
  EXPECT_EQ(kind_of([] { expected_tests_multisum(BankSpec(7, 1)); }), ErrorKind::oracle_range);
  EXPECT_EQ(kind_of([] { expected_tests_multisum(BankSpec(6, 2)); }), ErrorKind::oracle_range);
  EXPECT_EQ(kind_of([] { expected_tests_multisum(BankSpec(5, 4)); }), ErrorKind::oracle_range);
  EXPECT_EQ(kind_of([] { expected_tests_multisum(BankSpec(2, 5)); }), ErrorKind::oracle_range);
}

TEST(VarianceTests, Examples) {
  for (std::int64_t q : {1, 9}) EXPECT_EQ(variance_tests(BankSpec(1, q)).value, 0.0);
  EXPECT_NEAR(variance_tests(BankSpec(2, 1)).value, 2.0, 1e-10);
}

TEST(VarianceTests, SingleBankMatchesGeometricSum) {
  for (int a : {2, 3, 5, 10, 20, 40})
    EXPECT_NEAR(variance_tests(BankSpec(a, 1)).value, geometric_sum_variance(a),
                1e-9 * geometric_sum_variance(a))
        << "a=" << a;
}

TEST(VarianceTests, WithinAsymptoticBandAtLargeQ) {
  const VarianceBoundSummary band = variance_bounds(10);
  const double v = variance_tests(BankSpec(10, 10'000)).value;
  EXPECT_GE(v, band.var_lo);
  EXPECT_LE(v, band.var_hi);
}
