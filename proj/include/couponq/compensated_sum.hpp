#pragma once

#include <cmath>

namespace couponq {

// Neumaier's variant of Kahan summation. Also tracks sum |x| so callers can
// turn per-term rounding into an absolute error bound.
template <typename Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    magnitude_ += std::fabs(x);
  }

  CompensatedSum& operator+=(Real x) {
    add(x);
    return *this;
  }

  Real value() const { return sum_ + comp_; }
  Real magnitude() const { return magnitude_; }

 private:
  Real sum_{};
  Real comp_{};
  Real magnitude_{};
};

}  // namespace couponq
