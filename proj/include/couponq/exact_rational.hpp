#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "couponq/bank_spec.hpp"

namespace couponq {

using BigInt = boost::multiprecision::cpp_int;

/// Rational number in lowest terms with a positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(BigInt numerator, BigInt denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_ == 0) throw Error(ErrorKind::domain_error, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  const BigInt& numerator() const noexcept { return num_; }
  const BigInt& denominator() const noexcept { return den_; }

  // Correctly rounded for the magnitudes used here: scale to 2^80 before
  // converting so the quotient keeps more bits than a double holds.
  double to_double() const {
    if (num_ == 0) return 0.0;
    const BigInt scaled = (num_ << 80) / den_;
    return std::ldexp(scaled.convert_to<double>(), -80);
  }

  std::string str() const { return num_.str() + "/" + den_.str(); }

  friend bool operator==(const ExactRational&, const ExactRational&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

 private:
  BigInt num_{0};
  BigInt den_{1};
};

inline constexpr int kOracleMaxAlternatives = 12;
inline constexpr std::int64_t kOracleMaxDraws = 200;

/// Exact P(Y <= y): surjections from y draws onto a types, divided by a^y.
/// counts[j] tracks sequences that have used exactly j of the a types.
inline ExactRational cdf_oracle(int a, std::int64_t y) {
  if (a < 1 || y < 0) throw Error(ErrorKind::invalid_spec, "cdf_oracle needs a >= 1, y >= 0");
  if (a > kOracleMaxAlternatives || y > kOracleMaxDraws)
    throw Error(ErrorKind::oracle_range, "cdf_oracle limited to a <= 12, y <= 200");

  std::vector<BigInt> counts(static_cast<std::size_t>(a) + 1, 0);
  counts[0] = 1;
  for (std::int64_t step = 0; step < y; ++step) {
    for (int j = a; j >= 1; --j)
      counts[j] = counts[j] * j + counts[j - 1] * (a - j + 1);
    counts[0] = 0;
  }
  BigInt total = 1;
  for (std::int64_t step = 0; step < y; ++step) total *= a;
  return {counts[static_cast<std::size_t>(a)], total};
}

}  // namespace couponq
