#pragma once

// Exact finite-a distribution of the single-bank completion time Y and of
// N_q = max(Y_1, ..., Y_q) for q independent banks.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "couponq/bank_spec.hpp"
#include "couponq/compensated_sum.hpp"

namespace couponq {

static_assert(std::numeric_limits<long double>::digits >= 64,
              "inclusion-exclusion error budget assumes an extended long double");

namespace detail {

// C(n, k) for n <= 64 fits comfortably in 128 bits.
inline unsigned __int128 binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

inline double ulp_half() { return std::numeric_limits<double>::epsilon() / 2; }

}  // namespace detail

/// E Y = a * H_a by direct summation of 1/k.
inline double expected_single_bank(int a) {
  if (a < 1) throw Error(ErrorKind::invalid_spec, "a must be >= 1");
  CompensatedSum<double> h;
  for (int k = 1; k <= a; ++k) h += 1.0 / k;
  return a * h.value();
}

/// Distribution of Y for one bank size. Survival values are computed on
/// demand and memoised inside the instance; instances are not shared.
class SingleBankLaw {
 public:
  explicit SingleBankLaw(int a) : a_(a) {
    require_alternatives(a);
    for (int k = 0; k <= a; ++k) {
      binom_[k] = static_cast<long double>(detail::binomial_exact(a, k));
      base_[k] = static_cast<long double>(a - k) / static_cast<long double>(a);
    }
  }

  int a() const noexcept { return a_; }

  /// Decay rate log(a/(a-1)) of the survival tail; +inf for a = 1.
  double decay_rate() const {
    return a_ == 1 ? std::numeric_limits<double>::infinity() : -std::log1p(-1.0 / a_);
  }

  /// P(Y > y) via the alternating inclusion-exclusion sum.
  const ProbValue& survival(std::int64_t y) {
    if (y < 0) throw Error(ErrorKind::invalid_spec, "y must be >= 0");
    while (static_cast<std::int64_t>(cache_.size()) <= y)
      cache_.push_back(evaluate(static_cast<std::int64_t>(cache_.size())));
    return cache_[static_cast<std::size_t>(y)].survival;
  }

  /// P(Y <= y); exactly 0 below a.
  const ProbValue& cdf(std::int64_t y) {
    survival(y);
    return cache_[static_cast<std::size_t>(y)].cdf;
  }

  /// Stateless single-point evaluation.
  ProbValue survival_at(std::int64_t y) const { return evaluate(y).survival; }
  ProbValue cdf_at(std::int64_t y) const { return evaluate(y).cdf; }

 private:
  struct Point {
    ProbValue survival;
    ProbValue cdf;
  };

  Point evaluate(std::int64_t y) const {
    if (y < 0) throw Error(ErrorKind::invalid_spec, "y must be >= 0");
    if (y < a_) return {{1.0, 0.0}, {0.0, 0.0}};
    if (a_ == 1) return {{0.0, 0.0}, {1.0, 0.0}};

    // The k = a term vanishes for y > 0.
    CompensatedSum<long double> s;
    for (int k = 1; k < a_; ++k) {
      const long double term = binom_[k] * std::pow(base_[k], static_cast<long double>(y));
      s += (k % 2 == 1) ? term : -term;
    }
    const long double u = LDBL_EPSILON;
    // Each term carries relative error about (y + 2) u from the rounded base
    // raised to the y-th power; the compensated sum adds a couple of u.
    const long double err_ld = static_cast<long double>(y + 4) * u * s.magnitude() +
                               2 * u * std::fabs(s.value());
    const long double surv_ld = std::clamp(s.value(), 0.0L, 1.0L);
    const long double cdf_ld = std::clamp(1.0L - s.value(), 0.0L, 1.0L);
    const double surv = static_cast<double>(surv_ld);
    const double cdf = static_cast<double>(cdf_ld);
    const double err = static_cast<double>(err_ld + u);
    return {{surv, err + detail::ulp_half() * surv}, {cdf, err + detail::ulp_half() * cdf}};
  }

  int a_;
  std::array<long double, kMaxAlternatives + 1> binom_{};
  std::array<long double, kMaxAlternatives + 1> base_{};
  std::vector<Point> cache_;
};

inline ProbValue single_bank_survival(int a, std::int64_t y) {
  return SingleBankLaw(a).survival_at(y);
}

inline ProbValue single_bank_cdf(int a, std::int64_t y) { return SingleBankLaw(a).cdf_at(y); }

namespace detail {

// F^q from the survival value s = 1 - F; log1p keeps F close to 1 accurate.
inline double cdf_power(double s, double cdf, std::int64_t q) {
  if (cdf <= 0.0) return 0.0;
  if (s <= 0.0) return 1.0;
  const auto qd = static_cast<double>(q);
  return s < 0.5 ? std::exp(qd * std::log1p(-s)) : std::pow(cdf, qd);
}

// 1 - F^q, without cancellation when F is close to 1.
inline double exceed_power(double s, double cdf, std::int64_t q) {
  if (cdf <= 0.0) return 1.0;
  if (s <= 0.0) return 0.0;
  const auto qd = static_cast<double>(q);
  return s < 0.5 ? -std::expm1(qd * std::log1p(-s)) : 1.0 - std::pow(cdf, qd);
}

inline ProbValue test_count_cdf(SingleBankLaw& law, std::int64_t q, std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::invalid_spec, "n must be >= 0");
  const ProbValue s = law.survival(n);
  const ProbValue f = law.cdf(n);
  const double p = cdf_power(s.p, f.p, q);
  const double err = std::min(1.0, static_cast<double>(q) * f.abs_err);
  return {p, err};
}

inline ProbValue test_count_pmf(SingleBankLaw& law, std::int64_t q, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_spec, "n must be >= 1");
  const ProbValue hi = test_count_cdf(law, q, n);
  const ProbValue lo = test_count_cdf(law, q, n - 1);
  double p = hi.p - lo.p;
  if (p < 0.0) {
    if (p < -1e-14)
      throw Error(ErrorKind::domain_error,
                  "cdf decreased between n-1 and n beyond round-off: " + std::to_string(p));
    p = 0.0;
  }
  return {p, hi.abs_err + lo.abs_err};
}

// Tail certificates use P(Y > y) <= 2a exp(-alpha (y - 1)), valid for every
// y >= 0 (the union bound already gives a exp(-alpha y)).
struct TailCertificate {
  double q2a_e;  // q * 2a * e^alpha
  double r;      // e^-alpha

  TailCertificate(int a, std::int64_t q, double alpha)
      : q2a_e(static_cast<double>(q) * 2.0 * a * std::exp(alpha)), r(std::exp(-alpha)) {}

  // Bound on sum_{m >= n} P(N_q > m).
  double first_moment(std::int64_t n) const {
    return q2a_e * std::pow(r, static_cast<double>(n)) / (1.0 - r);
  }

  // Bound on sum_{m >= n} (2m + 1) P(N_q > m).
  double second_moment(std::int64_t n) const {
    const double omr = 1.0 - r;
    const double nd = static_cast<double>(n);
    return q2a_e * std::pow(r, nd) * ((2.0 * nd + 1.0) / omr + 2.0 * r / (omr * omr));
  }
};

}  // namespace detail

/// P(N_q <= n) = F(n)^q.
inline ProbValue test_count_cdf(const BankSpec& spec, std::int64_t n) {
  SingleBankLaw law(spec.a());
  return detail::test_count_cdf(law, spec.q(), n);
}

/// P(N_q = n) = F(n)^q - F(n-1)^q.
inline ProbValue test_count_pmf(const BankSpec& spec, std::int64_t n) {
  SingleBankLaw law(spec.a());
  return detail::test_count_pmf(law, spec.q(), n);
}

/// E N_q = sum_{n >= 0} (1 - (1 - P(Y > n))^q), stopped when the current term
/// is below eps_term and (if required) the certified tail is below 10 eps_term.
inline SeriesValue expected_tests(const BankSpec& spec, const TruncationPolicy& policy = {}) {
  policy.validate();
  if (spec.a() == 1) return {1.0, 0.0, 2};

  SingleBankLaw law(spec.a());
  const detail::TailCertificate cert(spec.a(), spec.q(), law.decay_rate());
  CompensatedSum<double> sum;
  for (std::int64_t n = 0; n < policy.n_cap; ++n) {
    const double term = detail::exceed_power(law.survival(n).p, law.cdf(n).p, spec.q());
    sum += term;
    if (term < policy.eps_term) {
      const double tail = cert.first_moment(n + 1);
      if (!policy.tail_bound_required) return {sum.value(), tail, n + 1};
      if (tail <= 10 * policy.eps_term) return {sum.value(), tail, n + 1};
    }
  }
  throw Error(ErrorKind::cap_exceeded,
              "expected_tests did not certify within n_cap = " + std::to_string(policy.n_cap));
}

/// Var N_q from E N_q^2 = sum (2n + 1) P(N_q > n) and the first-moment series,
/// both truncated at the same n.
inline SeriesValue variance_tests(const BankSpec& spec, const TruncationPolicy& policy = {}) {
  policy.validate();
  if (spec.a() == 1) return {0.0, 0.0, 2};

  SingleBankLaw law(spec.a());
  const detail::TailCertificate cert(spec.a(), spec.q(), law.decay_rate());
  CompensatedSum<double> m1;
  CompensatedSum<double> m2;
  for (std::int64_t n = 0; n < policy.n_cap; ++n) {
    const double term = detail::exceed_power(law.survival(n).p, law.cdf(n).p, spec.q());
    m1 += term;
    m2 += (2.0 * static_cast<double>(n) + 1.0) * term;
    if ((2.0 * static_cast<double>(n) + 1.0) * term < policy.eps_term) {
      const double t1 = cert.first_moment(n + 1);
      const double t2 = cert.second_moment(n + 1);
      const double mean = m1.value();
      // Var = m2 - m1^2 is increasing in m2 and decreasing in m1.
      const double tail = t2 + t1 * (2.0 * mean + t1);
      const double var = m2.value() - mean * mean;
      if (!policy.tail_bound_required || tail <= 10 * policy.eps_term) return {var, tail, n + 1};
    }
  }
  throw Error(ErrorKind::cap_exceeded,
              "variance_tests did not certify within n_cap = " + std::to_string(policy.n_cap));
}

/// True when (a, q) is inside the range where the multi-sum is tractable.
inline bool multisum_admissible(int a, std::int64_t q) {
  if (a < 1 || q < 1) return false;
  if (q == 1) return a <= 6;
  if (q <= 3) return a <= 5;
  if (q == 4) return a <= 4;
  return false;
}

/// Closed multi-sum for E N_q:
///   -sum_m C(q,m) sum_{j_1..j_m} (-1)^{sum j} prod C(a,j_i) / (1 - prod(1 - j_i/a)).
/// Term count grows like a^q, so only tiny instances are accepted.
inline double expected_tests_multisum(const BankSpec& spec) {
  const int a = spec.a();
  const auto q = static_cast<int>(spec.q());
  if (!multisum_admissible(a, spec.q()))
    throw Error(ErrorKind::oracle_range, "multi-sum limited to a<=6 (q=1), a<=5 (q<=3), a<=4 (q=4)");

  CompensatedSum<long double> total;
  std::vector<int> j;
  for (int m = 1; m <= q; ++m) {
    const auto cqm = static_cast<long double>(detail::binomial_exact(q, m));
    j.assign(static_cast<std::size_t>(m), 1);
    while (true) {
      long double coef = cqm;
      long double prod = 1.0L;
      int sign_sum = 0;
      for (int ji : j) {
        coef *= static_cast<long double>(detail::binomial_exact(a, ji));
        prod *= static_cast<long double>(a - ji) / static_cast<long double>(a);
        sign_sum += ji;
      }
      const long double term = coef / (1.0L - prod);
      total += (sign_sum % 2 == 0) ? -term : term;

      // Odometer over j in {1..a}^m.
      std::size_t pos = 0;
      while (pos < j.size() && j[pos] == a) j[pos++] = 1;
      if (pos == j.size()) break;
      ++j[pos];
    }
  }
  return static_cast<double>(total.value());
}

}  // namespace couponq
