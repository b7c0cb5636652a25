#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace zrp {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

// log(e^a + e^b), safe for -inf arguments
inline double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// log(e^a - e^b) for a >= b; returns -inf on exact cancellation
inline double log_sub(double a, double b) {
  if (b == neg_inf) return a;
  if (a <= b) return neg_inf;
  return a + std::log1p(-std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> v) {
  double hi = neg_inf;
  for (double x : v) hi = std::max(hi, x);
  if (hi == neg_inf) return neg_inf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

// Running log-space accumulator
struct LogAccumulator {
  double value = neg_inf;
  void add(double log_term) { value = log_add(value, log_term); }
};

// log of the rising factorial (a)_n = a (a+1) ... (a+n-1)
inline double log_pochhammer(double a, double n) {
  return std::lgamma(a + n) - std::lgamma(a);
}

// log n!; integer arguments are served from a table since factorials sit in
// every weight evaluation
inline double log_factorial(double n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(1 << 16);
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = std::lgamma(double(i) + 1.0);
    return t;
  }();
  if (n >= 0 && n < double(table.size()) && n == std::floor(n))
    return table[std::size_t(n)];
  return std::lgamma(n + 1.0);
}

}  // namespace zrp
