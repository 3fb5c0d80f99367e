#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bebold/core/error.hpp"

namespace bebold {

/// phi(n) = alpha * sum_{i=1..n} (1-alpha)^(n-i) / i, the expected-value
/// factor of an exponential moving average of rewards 1/i. Integer values are
/// memoized through phi(n) = (1-alpha) phi(n-1) + alpha/n; real arguments
/// interpolate linearly between neighbouring integers.
class PhiSeries {
 public:
  explicit PhiSeries(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("phi: alpha must be in (0, 1)");
    table_ = {0.0, alpha_};  // index 0 unused
  }

  double alpha() const { return alpha_; }

  double at(std::size_t n) {
    if (n < 1) throw DomainError("phi: n must be >= 1");
    while (table_.size() <= n) {
      const auto k = static_cast<double>(table_.size());
      table_.push_back((1.0 - alpha_) * table_.back() + alpha_ / k);
    }
    return table_[n];
  }

  double operator()(double n) {
    if (!(n >= 1.0)) throw DomainError("phi: n must be >= 1");
    const double fl = std::floor(n);
    const auto k = static_cast<std::size_t>(fl);
    const double frac = n - fl;
    const double lo = at(k);
    return frac == 0.0 ? lo : lo + frac * (at(k + 1) - lo);
  }

 private:
  double alpha_;
  std::vector<double> table_;
};

/// Direct summation, independent of the memoized recurrence.
inline double phi_direct(std::size_t n, double alpha) {
  if (n < 1) throw DomainError("phi: n must be >= 1");
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) s += std::pow(1.0 - alpha, static_cast<double>(n - i)) / static_cast<double>(i);
  return alpha * s;
}

inline double phi(double n, double alpha) { return PhiSeries(alpha)(n); }

}  // namespace bebold
