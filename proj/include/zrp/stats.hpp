#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace zrp {

namespace detail {

// regularized lower incomplete gamma P(a,x) by series
inline double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma Q(a,x) by continued fraction
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Q(a,x) = 1 - P(a,x)
inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// upper tail p-value of a chi-square statistic
inline double chi_square_pvalue(double chi2, double dof) {
  return gamma_q(0.5 * dof, 0.5 * chi2);
}

// Pearson chi-square against a uniform expectation
inline double chi_square_uniform_pvalue(const std::vector<long>& counts) {
  double total = 0;
  for (long c : counts) total += double(c);
  double expected = total / double(counts.size());
  double chi2 = 0;
  for (long c : counts) {
    double d = double(c) - expected;
    chi2 += d * d / expected;
  }
  return chi_square_pvalue(chi2, double(counts.size()) - 1.0);
}

struct MeanVar {
  double mean = 0, sd = 0, ci95 = 0;
  long n = 0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.n = long(xs.size());
  if (mv.n == 0) return mv;
  for (double x : xs) mv.mean += x;
  mv.mean /= double(mv.n);
  double ss = 0;
  for (double x : xs) ss += (x - mv.mean) * (x - mv.mean);
  mv.sd = mv.n > 1 ? std::sqrt(ss / double(mv.n - 1)) : 0.0;
  mv.ci95 = mv.n > 1 ? 1.96 * mv.sd / std::sqrt(double(mv.n)) : 0.0;
  return mv;
}

}  // namespace zrp
