#pragma once

#include <cmath>
#include <span>

#include "bebold/core/error.hpp"

namespace bebold {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw Misuse("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
inline double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  bool single_seed = false;  // std reported as 0 by convention
};

inline Summary summarize(std::span<const double> xs) {
  return {xs.size(), mean(xs), sample_std(xs), xs.size() == 1};
}

}  // namespace bebold
