#pragma once

#include <cmath>
#include <limits>

#include "couponq/bank_spec.hpp"

namespace couponq {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

/// Standard Gumbel law, Lambda(x) = exp(-e^{-x}).
struct GumbelStd {
  static constexpr double mean = kEulerGamma;
  static constexpr double variance = kPi * kPi / 6.0;

  static double cdf(double x) { return std::exp(-std::exp(-x)); }
  static double pdf(double x) { return std::exp(-x - std::exp(-x)); }
  // Inverse cdf, for sampling.
  static double quantile(double u) { return -std::log(-std::log(u)); }
};

/// Exponential integral E1(x) = int_1^inf e^{-xt}/t dt for x > 0.
/// Power series up to x = 1, Lentz continued fraction beyond.
inline double exp_integral_E1(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::domain_error, "E1 requires x > 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_iter = 1000;

  if (x <= 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0;
    double fact_term = 1.0;  // (-x)^k / k!
    for (int k = 1; k < max_iter; ++k) {
      fact_term *= -x / k;
      const double del = fact_term / k;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    return -kEulerGamma - std::log(x) - sum;
  }

  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h * std::exp(-x);
  }
  throw Error(ErrorKind::domain_error, "E1 continued fraction failed to converge");
}

}  // namespace couponq
