#pragma once

// Extreme-value description of N_q for large q at fixed a >= 2: centring by
// b_q = log(aq)/alpha, Gumbel envelopes, local pmf, and moment bands.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "couponq/bank_spec.hpp"
#include "couponq/quadrature.hpp"
#include "couponq/special.hpp"

namespace couponq {

namespace detail {
inline void require_asymptotic_a(int a) {
  if (a < 2) throw Error(ErrorKind::invalid_spec, "asymptotics need a >= 2, got " + std::to_string(a));
}
}  // namespace detail

/// alpha = log(a/(a-1)), the decay rate of P(Y > y).
inline double alpha(int a) {
  detail::require_asymptotic_a(a);
  return -std::log1p(-1.0 / a);
}

struct CentringData {
  double alpha = 0.0;
  double b_q = 0.0;
  std::int64_t b_q_ceil = 0;  // floor(b_q) + 1, also when b_q is an integer
  double b_q_frac = 0.0;      // b_q - floor(b_q)
};

inline CentringData centring(int a, std::int64_t q) {
  detail::require_asymptotic_a(a);
  if (q < 1) throw Error(ErrorKind::invalid_spec, "q must be >= 1");
  CentringData c;
  c.alpha = alpha(a);
  c.b_q = std::log(static_cast<double>(a) * static_cast<double>(q)) / c.alpha;
  const double fl = std::floor(c.b_q);
  c.b_q_ceil = static_cast<std::int64_t>(fl) + 1;
  c.b_q_frac = c.b_q - fl;
  return c;
}

inline double gumbel_cdf(double x) { return GumbelStd::cdf(x); }

struct SandwichBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Envelope [Lambda(alpha (x - 1)), Lambda(alpha x)] for P(N_q - b_q <= x).
inline SandwichBounds sandwich_bounds(int a, double x) {
  const double al = alpha(a);
  return {gumbel_cdf(al * (x - 1.0)), gumbel_cdf(al * x)};
}

/// Approximation to P(N_q - ceil(b_q) = n).
inline double local_pmf_approx(int a, std::int64_t q, std::int64_t n) {
  const CentringData c = centring(a, q);
  const auto nd = static_cast<double>(n);
  return gumbel_cdf(c.alpha * (nd + 1.0 - c.b_q_frac)) - gumbel_cdf(c.alpha * (nd - c.b_q_frac));
}

struct MomentBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Band for lim E N_q - log(q)/alpha.
inline MomentBounds mean_bounds(int a) {
  const double al = alpha(a);
  const double lower = (kEulerGamma + std::log(static_cast<double>(a))) / al;
  return {lower, lower + 1.0};
}

/// theta(alpha) = E[(1 + Z/alpha)^2 ; 0 < 1 + Z/alpha <= 1] for Z standard
/// Gumbel, i.e. the integral over z in (-alpha, 0] against the Gumbel density.
inline double theta(int a, double abs_tol = 1e-10) {
  const double al = alpha(a);
  auto integrand = [al](double z) {
    const double w = 1.0 + z / al;
    return w * w * GumbelStd::pdf(z);
  };
  return integrate_adaptive(integrand, -al, 0.0, abs_tol).value;
}

struct VarianceBoundSummary {
  double center = 0.0;  // pi^2 / (6 alpha^2)
  double theta = 0.0;
  double delta = 0.0;
  double var_lo = 0.0;
  double var_hi = 0.0;
  double sd_lo = 0.0;
  double sd_hi = 0.0;
};

/// Asymptotic band center +- delta for Var N_q, with
/// delta = theta + 1 - 1/e + 2 (gamma + E1(1)) / alpha.
inline VarianceBoundSummary variance_bounds(int a) {
  const double al = alpha(a);
  VarianceBoundSummary v;
  v.center = kPi * kPi / (6.0 * al * al);
  v.theta = theta(a);
  v.delta = v.theta + 1.0 - std::exp(-1.0) + 2.0 * (kEulerGamma + exp_integral_E1(1.0)) / al;
  v.var_lo = v.center - v.delta;
  v.var_hi = v.center + v.delta;
  v.sd_lo = v.var_lo > 0.0 ? std::sqrt(v.var_lo) : 0.0;
  v.sd_hi = std::sqrt(v.var_hi);
  return v;
}

/// b_q + E Z / alpha. The Gumbel mean is a parameter only so that callers can
/// perturb it in sensitivity checks.
inline double centred_mean_prediction(int a, std::int64_t q, double euler_gamma = kEulerGamma) {
  const CentringData c = centring(a, q);
  return c.b_q + euler_gamma / c.alpha;
}

}  // namespace couponq
