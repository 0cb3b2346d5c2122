#pragma once

// Reference-value and cross-path checks shared by the `validate` command and
// the acceptance suite. Each check records target, tolerance and observation.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "couponq/asymptotics.hpp"
#include "couponq/coupon_core.hpp"
#include "couponq/exact_rational.hpp"
#include "couponq/json_io.hpp"
#include "couponq/report.hpp"
#include "couponq/simulator.hpp"

namespace couponq {

/// Published reference values, rows a = 5, 10, 20 by q = 1, 5, 10, 20, 50, 100, 200.
namespace reference {

inline constexpr std::array<std::array<double, 7>, 3> kExpectedTests = {{
    {11.4, 17.8, 20.8, 23.8, 27.9, 31.0, 34.1},
    {29.3, 43.5, 49.9, 56.4, 65.0, 71.6, 78.1},
    {72.0, 102.0, 115.3, 128.7, 146.5, 160.0, 173.5},
}};

inline constexpr std::array<std::array<double, 7>, 3> kCentredMean = {{
    {9.8, 17.0, 20.1, 23.2, 27.3, 30.4, 33.5},
    {27.3, 42.6, 49.2, 55.8, 64.5, 71.0, 77.6},
    {68.7, 101.0, 114.5, 128.1, 145.9, 159.4, 173.0},
}};

// a = 2, 3, 4, 5, 10, 20
inline constexpr std::array<double, 6> kSdMin = {0.641, 2.323, 3.697, 5.024, 11.507, 24.362};
inline constexpr std::array<double, 6> kSdMax = {2.537, 3.823, 5.107, 6.390, 12.804, 25.630};

// a = 5, 10, 15, 20
inline constexpr std::array<int, 4> kSingleBankA = {5, 10, 15, 20};
inline constexpr std::array<double, 4> kSingleBankMean = {11.42, 29.29, 49.77, 71.96};

inline constexpr double kE1AtOne = 0.2194;

}  // namespace reference

struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string target;
  double tolerance = 0.0;
  double observed = 0.0;
  bool pass = false;
};

enum class ValidationLevel { quick, full };

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::quick;
  double euler_gamma = kEulerGamma;
  int workers = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
};

namespace detail {

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

inline CheckResult within(int criterion, std::string name, double target, double tol,
                          double observed) {
  return {criterion, std::move(name), fmt(target, 10), tol, observed,
          std::fabs(observed - target) <= tol};
}

inline CheckResult in_range(int criterion, std::string name, double lo, double hi,
                            double observed, double slack = 0.0) {
  return {criterion, std::move(name), "[" + fmt(lo, 8) + ", " + fmt(hi, 8) + "]", slack, observed,
          observed >= lo - slack && observed <= hi + slack};
}

inline CheckResult at_most(int criterion, std::string name, double limit, double observed) {
  return {criterion, std::move(name), "<= " + fmt(limit), limit, observed, observed <= limit};
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string cell(int a, std::int64_t q) {
  return "a=" + std::to_string(a) + " q=" + std::to_string(q);
}

// P(N_q - b_q <= x) = F(floor(x + b_q))^q.
inline double centred_cdf(SingleBankLaw& law, std::int64_t q, double b_q, double x) {
  const auto n = static_cast<std::int64_t>(std::floor(x + b_q));
  if (n < 0) return 0.0;
  return detail::test_count_cdf(law, q, n).p;
}

}  // namespace detail

/// 1: E Y = a H_a against the single-bank reference row.
inline std::vector<CheckResult> check_single_bank_mean() {
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < reference::kSingleBankA.size(); ++i) {
    const int a = reference::kSingleBankA[i];
    out.push_back(detail::within(1, "E Y a=" + std::to_string(a), reference::kSingleBankMean[i],
                                 0.005, expected_single_bank(a)));
  }
  return out;
}

/// 2: series E N_q against the 21-cell reference table.
inline std::vector<CheckResult> check_expected_tests_table() {
  std::vector<CheckResult> out;
  TableArtifact t;
  const double elapsed = detail::seconds([&] { t = build_table(TableName::en_q); });
  for (std::size_t i = 0; i < kTableAlternatives.size(); ++i)
    for (std::size_t j = 0; j < kTableQuestions.size(); ++j) {
      const int a = kTableAlternatives[i];
      const std::int64_t q = kTableQuestions[j];
      out.push_back(detail::within(2, "E N_q " + detail::cell(a, q),
                                   reference::kExpectedTests[i][j], 0.05, *t.lookup(a, q)));
    }
  out.push_back(detail::at_most(2, "runtime seconds (21 cells)", 1.0, elapsed));
  return out;
}

/// 3: b_q + gamma/alpha against its reference table, and E N_q minus that
/// prediction in [0.45, 0.65] for q >= 20.
inline std::vector<CheckResult> check_centred_table(double euler_gamma = kEulerGamma) {
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < kTableAlternatives.size(); ++i)
    for (std::size_t j = 0; j < kTableQuestions.size(); ++j) {
      const int a = kTableAlternatives[i];
      const std::int64_t q = kTableQuestions[j];
      out.push_back(detail::within(3, "b_q+gamma/alpha " + detail::cell(a, q),
                                   reference::kCentredMean[i][j], 0.05,
                                   centred_mean_prediction(a, q, euler_gamma)));
    }
  for (int a : kTableAlternatives)
    for (std::int64_t q : kTableQuestions) {
      if (q < 20) continue;
      const double excess =
          expected_tests(BankSpec(a, q)).value - centred_mean_prediction(a, q, euler_gamma);
      out.push_back(detail::in_range(3, "E N_q - prediction " + detail::cell(a, q), 0.45, 0.65,
                                     excess));
    }
  return out;
}

/// 4: asymptotic sd band against its reference table, plus E1(1).
inline std::vector<CheckResult> check_sd_bounds_table() {
  std::vector<CheckResult> out;
  out.push_back(detail::within(4, "E1(1)", reference::kE1AtOne, 1e-4, exp_integral_E1(1.0)));
  for (std::size_t i = 0; i < kSdAlternatives.size(); ++i) {
    const int a = kSdAlternatives[i];
    const VarianceBoundSummary v = variance_bounds(a);
    out.push_back(detail::within(4, "sd min a=" + std::to_string(a), reference::kSdMin[i], 0.002,
                                 v.sd_lo));
    out.push_back(detail::within(4, "sd max a=" + std::to_string(a), reference::kSdMax[i], 0.002,
                                 v.sd_hi));
  }
  return out;
}

/// 5: floating-point cdf against the exact surjection count.
inline std::vector<CheckResult> check_oracle_equivalence() {
  double worst = 0.0;
  const double elapsed = detail::seconds([&] {
    for (int a = 1; a <= 8; ++a) {
      SingleBankLaw law(a);
      for (std::int64_t y = a; y <= 60; ++y)
        worst = std::max(worst, std::fabs(law.cdf(y).p - cdf_oracle(a, y).to_double()));
    }
  });
  return {detail::at_most(5, "max |cdf - exact| a=1..8 y=a..60", 1e-12, worst),
          detail::at_most(5, "runtime seconds", 5.0, elapsed)};
}

/// 6: infinite series against the closed multi-sum wherever the latter is admissible.
inline std::vector<CheckResult> check_series_vs_multisum() {
  double worst = 0.0;
  for (std::int64_t q = 1; q <= 4; ++q)
    for (int a = 1; a <= 6; ++a) {
      if (!multisum_admissible(a, q)) continue;
      const BankSpec spec(a, q);
      worst = std::max(worst,
                       std::fabs(expected_tests_multisum(spec) - expected_tests(spec).value));
    }
  return {detail::at_most(6, "max |series - multisum|", 1e-9, worst)};
}

/// 7: Monte Carlo means against exact E N_q, and byte-identical output for
/// one and many workers.
inline std::vector<CheckResult> check_monte_carlo(int workers) {
  std::vector<CheckResult> out;
  constexpr std::int64_t reps = 100'000;
  constexpr std::array<std::pair<int, std::int64_t>, 4> configs = {
      {{10, 1}, {10, 10}, {5, 50}, {20, 20}}};
  std::uint64_t seed = 20240611;
  for (const auto& [a, q] : configs) {
    const BankSpec spec(a, q);
    const SimulationResult many = run_experiment({spec, reps, seed, std::max(workers, 2)});
    const SimulationResult one = run_experiment({spec, reps, seed, 1});
    const double exact = expected_tests(spec).value;
    out.push_back(detail::at_most(7, "|mean - exact| / SE " + detail::cell(a, q), 3.0,
                                  std::fabs(many.mean - exact) / many.std_error_mean));
    const bool same = to_json_line(many, true) == to_json_line(one, true);
    out.push_back({7, "identical bytes workers 1 vs " + std::to_string(std::max(workers, 2)) + " " +
                          detail::cell(a, q),
                   "identical", 0.0, same ? 1.0 : 0.0, same});
    ++seed;
  }
  return out;
}

/// 8: exact centred cdf inside the widened Gumbel envelope at q = 10^6, and
/// the sequence over q approaching both envelope ends at x = 0.
inline std::vector<CheckResult> check_sandwich() {
  std::vector<CheckResult> out;
  constexpr std::int64_t q = 1'000'000;
  const double elapsed = detail::seconds([&] {
    for (int a : kTableAlternatives) {
      SingleBankLaw law(a);
      const CentringData c = centring(a, q);
      double worst = -1.0;  // largest excursion outside the envelope; <= 0.02 passes
      for (int step = 0; step <= 52; ++step) {
        const double x = -3.0 + 0.25 * step;
        const double p = detail::centred_cdf(law, q, c.b_q, x);
        const SandwichBounds s = sandwich_bounds(a, x);
        worst = std::max({worst, s.lower - p, p - s.upper});
      }
      out.push_back(detail::at_most(8, "envelope excursion a=" + std::to_string(a) + " q=1e6",
                                    0.02, worst));
    }

    const int a = 10;
    SingleBankLaw law(a);
    const double al = alpha(a);
    const double low_end = gumbel_cdf(-al);
    const double high_end = gumbel_cdf(0.0);
    double near_low = 1.0, near_high = 1.0;
    for (std::int64_t qq = 2; qq <= q; ++qq) {
      const double p = detail::centred_cdf(law, qq, centring(a, qq).b_q, 0.0);
      near_low = std::min(near_low, std::fabs(p - low_end));
      near_high = std::min(near_high, std::fabs(p - high_end));
    }
    out.push_back(detail::at_most(8, "witness: min |P - Lambda(-alpha)| a=10 x=0", 0.01, near_low));
    out.push_back(detail::at_most(8, "witness: min |P - Lambda(0)| a=10 x=0", 0.01, near_high));
  });
  out.push_back(detail::at_most(8, "runtime seconds", 30.0, elapsed));
  return out;
}

/// 9: exact variance at q = 10^4 inside the asymptotic band widened by 0.5.
inline std::vector<CheckResult> check_variance_band() {
  std::vector<CheckResult> out;
  for (int a : kTableAlternatives) {
    const VarianceBoundSummary b = variance_bounds(a);
    const double var = variance_tests(BankSpec(a, 10'000)).value;
    out.push_back(detail::in_range(9, "Var N_q a=" + std::to_string(a) + " q=1e4", b.var_lo,
                                   b.var_hi, var, 0.5));
  }
  return out;
}

/// Largest |P(N_q - ceil(b_q) = n) - local approximation| over n.
inline double local_limit_error(int a, std::int64_t q) {
  SingleBankLaw law(a);
  const CentringData c = centring(a, q);
  const double al = c.alpha;
  double worst = 0.0;
  // Beyond n = 40/alpha both the exact pmf and the approximation are below 1e-17.
  const auto n_hi = static_cast<std::int64_t>(std::ceil(40.0 / al));
  for (std::int64_t n = 1 - c.b_q_ceil; n <= n_hi; ++n) {
    const double exact = detail::test_count_pmf(law, q, n + c.b_q_ceil).p;
    worst = std::max(worst, std::fabs(exact - local_pmf_approx(a, q, n)));
  }
  return worst;
}

/// 10: local-limit error shrinking along q = 10^2, 10^4, 10^6 at a = 10.
inline std::vector<CheckResult> check_local_limit() {
  std::vector<CheckResult> out;
  const double e2 = local_limit_error(10, 100);
  const double e4 = local_limit_error(10, 10'000);
  const double e6 = local_limit_error(10, 1'000'000);
  out.push_back(detail::at_most(10, "local error q=1e4 vs 1.1 x (q=1e2: " + detail::fmt(e2) + ")",
                                1.1 * e2, e4));
  out.push_back(detail::at_most(10, "local error q=1e6 vs 1.1 x (q=1e4: " + detail::fmt(e4) + ")",
                                1.1 * e4, e6));
  return out;
}

inline constexpr int kCriterionCount = 10;

inline std::string criterion_title(int criterion) {
  switch (criterion) {
    case 1: return "single-bank mean closed form";
    case 2: return "E N_q table reproduction";
    case 3: return "centred-mean table reproduction";
    case 4: return "sd-bound table reproduction";
    case 5: return "exact-oracle equivalence";
    case 6: return "series vs multi-sum";
    case 7: return "Monte Carlo concordance";
    case 8: return "Gumbel sandwich property";
    case 9: return "variance-band capture";
    case 10: return "local-limit check";
  }
  return "unknown";
}

inline std::vector<CheckResult> run_criterion(int criterion, const ValidationOptions& opts = {}) {
  switch (criterion) {
    case 1: return check_single_bank_mean();
    case 2: return check_expected_tests_table();
    case 3: return check_centred_table(opts.euler_gamma);
    case 4: return check_sd_bounds_table();
    case 5: return check_oracle_equivalence();
    case 6: return check_series_vs_multisum();
    case 7: return check_monte_carlo(opts.workers);
    case 8: return check_sandwich();
    case 9: return check_variance_band();
    case 10: return check_local_limit();
  }
  throw Error(ErrorKind::invalid_spec, "no criterion " + std::to_string(criterion));
}

/// quick: E N_q table and exact-oracle equivalence. full: every criterion.
inline std::vector<int> criteria_for(ValidationLevel level) {
  if (level == ValidationLevel::quick) return {2, 5};
  std::vector<int> all;
  for (int c = 1; c <= kCriterionCount; ++c) all.push_back(c);
  return all;
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  for (int c : criteria_for(opts.level)) {
    auto part = run_criterion(c, opts);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

inline void print_check(std::ostream& os, const CheckResult& c) {
  os << (c.pass ? "PASS" : "FAIL") << "  [" << c.criterion << "] " << c.name
     << "  target=" << c.target << "  tol=" << detail::fmt(c.tolerance)
     << "  observed=" << detail::fmt(c.observed, 10) << '\n';
}

}  // namespace couponq
