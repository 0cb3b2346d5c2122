#pragma once

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "couponq/bank_spec.hpp"

namespace couponq {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel kronrod15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the finite interval
/// [lo, hi]: the panel with the largest error estimate is bisected until the
/// summed estimate falls below abs_tol.
template <typename F>
QuadratureResult integrate_adaptive(F f, double lo, double hi, double abs_tol,
                                    int max_intervals = 2000) {
  if (!(lo < hi)) {
    if (lo == hi) return {0.0, 0.0, 0};
    throw Error(ErrorKind::domain_error, "integration bounds reversed");
  }
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::kronrod15(f, lo, hi));
  double value = panels.top().value;
  double error = panels.top().error;
  while (error > abs_tol) {
    if (static_cast<int>(panels.size()) >= max_intervals)
      throw Error(ErrorKind::quadrature_failure,
                  "tolerance " + std::to_string(abs_tol) + " not met; estimate " +
                      std::to_string(error));
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Panel left = detail::kronrod15(f, worst.lo, mid);
    const detail::Panel right = detail::kronrod15(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum from the leaves to shed the drift of the running updates.
  QuadratureResult out{0.0, 0.0, static_cast<int>(panels.size())};
  while (!panels.empty()) {
    out.value += panels.top().value;
    out.error += panels.top().error;
    panels.pop();
  }
  return out;
}

}  // namespace couponq
