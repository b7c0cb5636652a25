#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"
#include "zrp/types.hpp"

namespace zrp {

// ---------------------------------------------------------------------------
// Pochhammer-type power series  G_b(x) = sum_k  k!/(1+b)_k x^k  and its
// first-moment companion sum_k k t_k.  Coefficients are the single-species
// stationary weights of the rate g(k) = 1 + b/k.  Values stay O(1) on [0,1],
// so plain double arithmetic is fine.  Tail bounds: the term ratio
// (k+1)x/(k+1+b) is < x for all k, giving a geometric bound for x < 1; at
// x = 1 the terms decay like Gamma(1+b) k^{-b} and the exact Gauss values
//   G_b(1) = b/(b-1),  sum k t_k |_{x=1} = b/((b-1)(b-2))
// apply when the series converges.
// ---------------------------------------------------------------------------
struct PochSeries {
  double b;

  explicit PochSeries(double b_) : b(b_) {
    if (!(b > 0.0)) throw InvalidParam("b must be positive");
  }

  // sum of t_k x^k, within rel_tol; nullopt if divergent / not certifiable
  std::optional<double> value(double x, double rel_tol = 1e-14) const {
    if (x < 0) return std::nullopt;
    if (x > 1.0 + 1e-12) return std::nullopt;
    if (std::abs(x - 1.0) <= 1e-12) {
      if (b <= 1.0 + 1e-9) return std::nullopt;
      return b / (b - 1.0);
    }
    double t = 1.0, acc = 1.0;
    for (long k = 0; k < 20'000'000; ++k) {
      t *= x * double(k + 1) / (double(k + 1) + b);
      acc += t;
      if (t / (1.0 - x) < rel_tol * acc) return acc;
    }
    return std::nullopt;
  }

  // sum of k t_k x^k
  std::optional<double> moment(double x, double rel_tol = 1e-14) const {
    if (x < 0) return std::nullopt;
    if (x > 1.0 + 1e-12) return std::nullopt;
    if (std::abs(x - 1.0) <= 1e-12) {
      if (b <= 2.0 + 1e-9) return std::nullopt;
      return b / ((b - 1.0) * (b - 2.0));
    }
    double t = 1.0, acc = 0.0;
    for (long k = 0; k < 20'000'000; ++k) {
      t *= x * double(k + 1) / (double(k + 1) + b);
      double term = double(k + 1) * t;
      acc += term;
      double q = x * double(k + 2) / double(k + 1);
      if (q < 1.0 && acc > 0.0 && term * q / (1.0 - q) < rel_tol * acc)
        return acc;
    }
    return std::nullopt;
  }

  // sum of k^2 t_k x^k
  std::optional<double> second_moment(double x, double rel_tol = 1e-14) const {
    if (x < 0) return std::nullopt;
    if (x > 1.0 + 1e-12) return std::nullopt;
    if (std::abs(x - 1.0) <= 1e-12) {
      if (b <= 3.0 + 1e-9) return std::nullopt;
      // x^2 G'' + x G' at x = 1 via the Gauss values
      return 4.0 * b / ((b - 1.0) * (b - 2.0) * (b - 3.0)) +
             b / ((b - 1.0) * (b - 2.0));
    }
    double t = 1.0, acc = 0.0;
    for (long k = 0; k < 20'000'000; ++k) {
      t *= x * double(k + 1) / (double(k + 1) + b);
      double kk = double(k + 1);
      double term = kk * kk * t;
      acc += term;
      double q = x * (kk + 1.0) * (kk + 1.0) / (kk * kk);
      if (q < 1.0 && acc > 0.0 && term * q / (1.0 - q) < rel_tol * acc)
        return acc;
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Single-site stationary weight of a two-species zero-range process together
// with the analytic metadata the numerics rely on:
//   - exp_bound_xi:  w(k) <= xi^{|k|_2}  (Euclidean norm)
//   - tail_exponent: per-species power-law decay, w ~ k_i^{-b} along axis i
//   - optional closed forms for z, the density map and the domain boundary
//     in rotated coordinates t = mu1 - mu2  ->  u = mu1 + mu2.
// All arithmetic is done on log values; eval is a convenience wrapper.
// Weights are immutable value objects and safe to share.
// ---------------------------------------------------------------------------
struct TwoSpeciesWeight {
  std::string name;
  std::function<double(long, long)> log_eval_fn;
  double exp_bound_xi = 1.0;
  std::array<std::optional<double>, 2> tail_exponent{};

  // log z(psi); nullopt where the formula does not apply
  std::function<std::optional<double>(const Fugacity&)> closed_form_log_z;
  // density map R(psi); nullopt where moments diverge / formula invalid
  std::function<std::optional<std::array<double, 2>>(const Fugacity&)>
      closed_form_density;
  // tilde-mu2(tilde-mu1); empty function when no closed boundary is known
  std::function<double(double)> closed_form_boundary;

  double log_eval(long k1, long k2) const {
    if (k1 < 0 || k2 < 0) throw OutOfRange("weight argument must be in N^2");
    return log_eval_fn(k1, k2);
  }
  double eval(long k1, long k2) const { return std::exp(log_eval(k1, k2)); }

  bool has_closed_z() const { return bool(closed_form_log_z); }
  bool has_closed_boundary() const { return bool(closed_form_boundary); }

  // gauge change w -> c w
  TwoSpeciesWeight scaled(double c) const {
    if (!(c > 0)) throw InvalidParam("scale factor must be positive");
    TwoSpeciesWeight out = *this;
    double lc = std::log(c);
    auto base = log_eval_fn;
    out.name = name + "*" + std::to_string(c);
    out.log_eval_fn = [base, lc](long a, long b2) { return base(a, b2) + lc; };
    // the xi bound only keeps the pure form w <= xi^{|k|} for c <= 1; inflate
    // xi enough to absorb the constant at |k| >= 1 and accept slack at k = 0
    if (c > 1.0) out.exp_bound_xi = exp_bound_xi * c;
    if (closed_form_log_z) {
      auto cz = closed_form_log_z;
      out.closed_form_log_z = [cz, lc](const Fugacity& psi) {
        auto v = cz(psi);
        if (v) return std::optional<double>(*v + lc);
        return std::optional<double>();
      };
    }
    return out;  // density and boundary are gauge invariant
  }

  // tilt w -> w e^{theta . k}, shifting the domain by -theta
  TwoSpeciesWeight tilted(double th1, double th2) const {
    TwoSpeciesWeight out = *this;
    auto base = log_eval_fn;
    out.name = name + "+tilt";
    out.log_eval_fn = [base, th1, th2](long a, long b2) {
      return base(a, b2) + th1 * double(a) + th2 * double(b2);
    };
    double m = std::max({th1, th2, 0.0});
    out.exp_bound_xi = exp_bound_xi * std::exp(m * std::sqrt(2.0));
    if (closed_form_log_z) {
      auto cz = closed_form_log_z;
      out.closed_form_log_z = [cz, th1, th2](const Fugacity& psi) {
        return cz(Fugacity(psi.psi1 * std::exp(th1), psi.psi2 * std::exp(th2)));
      };
    }
    if (closed_form_density) {
      auto cd = closed_form_density;
      out.closed_form_density = [cd, th1, th2](const Fugacity& psi) {
        return cd(Fugacity(psi.psi1 * std::exp(th1), psi.psi2 * std::exp(th2)));
      };
    }
    if (closed_form_boundary) {
      auto cb = closed_form_boundary;
      out.closed_form_boundary = [cb, th1, th2](double t) {
        return cb(t + (th1 - th2)) - (th1 + th2);
      };
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Jump rates.  g_i(k) is the rate at which a site with occupation k loses a
// particle of species i; g_i(k) = 0 exactly when k_i = 0 keeps the process
// irreducible on each X_{L,N}.
// ---------------------------------------------------------------------------
struct JumpRates {
  std::string name;
  std::function<double(long, long)> g1;
  std::function<double(long, long)> g2;
};

// g_i from the stationary weight: g1(k) = w(k1-1,k2)/w(k1,k2), same for g2
inline JumpRates rates_from_weight(const TwoSpeciesWeight& w) {
  auto lw = w.log_eval_fn;
  JumpRates r;
  r.name = w.name;
  r.g1 = [lw](long k1, long k2) {
    if (k1 <= 0) return 0.0;
    return std::exp(lw(k1 - 1, k2) - lw(k1, k2));
  };
  r.g2 = [lw](long k1, long k2) {
    if (k2 <= 0) return 0.0;
    return std::exp(lw(k1, k2 - 1) - lw(k1, k2));
  };
  return r;
}

namespace detail {

inline void check_rate_support(const JumpRates& g, long radius) {
  for (long k1 = 0; k1 <= radius; ++k1)
    for (long k2 = 0; k2 <= radius; ++k2) {
      if ((g.g1(k1, k2) > 0) != (k1 > 0) || (g.g2(k1, k2) > 0) != (k2 > 0))
        throw InvalidParam("g_i(k) must vanish exactly when k_i = 0");
    }
}

}  // namespace detail

// Inverts the rate relation along the staircase path from the origin, with
// the gauge w(0,0) = 1.  Throws CocycleViolation when the two path orders
// disagree beyond 1e-10 relative, which signals that no stationary product
// measure exists for these rates.
inline TwoSpeciesWeight weight_from_rates(const JumpRates& g, long radius,
                                          double tol = 1e-10) {
  if (radius < 1) throw InvalidParam("radius must be >= 1");
  detail::check_rate_support(g, radius);
  for (long k1 = 1; k1 <= radius; ++k1)
    for (long k2 = 1; k2 <= radius; ++k2) {
      double lhs = g.g1(k1, k2) * g.g2(k1 - 1, k2);
      double rhs = g.g2(k1, k2) * g.g1(k1, k2 - 1);
      double rel = std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-300});
      if (rel > tol) throw CocycleViolation(k1, k2, rel);
    }

  auto table = std::make_shared<std::vector<double>>(
      std::size_t((radius + 1) * (radius + 1)), 0.0);
  auto at = [radius](long k1, long k2) -> std::size_t {
    return std::size_t(k1 * (radius + 1) + k2);
  };
  for (long k1 = 1; k1 <= radius; ++k1)
    (*table)[at(k1, 0)] = (*table)[at(k1 - 1, 0)] - std::log(g.g1(k1, 0));
  for (long k1 = 0; k1 <= radius; ++k1)
    for (long k2 = 1; k2 <= radius; ++k2)
      (*table)[at(k1, k2)] =
          (*table)[at(k1, k2 - 1)] - std::log(g.g2(k1, k2));

  TwoSpeciesWeight w;
  w.name = g.name.empty() ? "from-rates" : g.name + "-weight";
  w.log_eval_fn = [table, at, radius](long k1, long k2) {
    if (k1 > radius || k2 > radius)
      throw OutOfRange("weight_from_rates table covers [0," +
                       std::to_string(radius) + "]^2 only");
    return (*table)[at(k1, k2)];
  };
  double mx = 0.0;
  for (long k1 = 0; k1 <= radius; ++k1)
    for (long k2 = 0; k2 <= radius; ++k2)
      if (k1 + k2 > 0)
        mx = std::max(mx, (*table)[at(k1, k2)] /
                              std::hypot(double(k1), double(k2)));
  w.exp_bound_xi = std::exp(mx);
  return w;
}

// ---------------------------------------------------------------------------
// Builtin catalog
// ---------------------------------------------------------------------------
namespace detail {

// Tabulated 1D coefficient, read-only after construction so weight copies
// can share it across threads.  Arguments beyond the table fall back to the
// generating function.
class CoeffTable {
 public:
  CoeffTable(std::function<double(long)> f, long n = 32768)
      : f_(std::move(f)), v_(std::size_t(n)) {
    for (long i = 0; i < n; ++i) v_[std::size_t(i)] = f_(i);
  }
  double operator()(long k) const {
    return k < long(v_.size()) ? v_[std::size_t(k)] : f_(k);
  }

 private:
  std::function<double(long)> f_;
  std::vector<double> v_;
};

inline std::shared_ptr<CoeffTable> poch_coeffs(double b) {
  // log k!/(1+b)_k
  return std::make_shared<CoeffTable>([b](long k) {
    return log_factorial(double(k)) - log_pochhammer(1.0 + b, double(k));
  });
}

// coupled-species weight  w(k) = k1!/(1+b)_{k1} ((k1+1)/(k1+2))^{k2}
inline TwoSpeciesWeight make_evans_hanney(double b) {
  TwoSpeciesWeight w;
  w.name = "evans-hanney";
  auto A = poch_coeffs(b);
  auto Q = std::make_shared<CoeffTable>([](long k) {
    return std::log(double(k + 1)) - std::log(double(k + 2));
  });
  w.log_eval_fn = [A, Q](long k1, long k2) {
    return (*A)(k1) + double(k2) * (*Q)(k1);
  };
  w.exp_bound_xi = 1.0;
  w.tail_exponent = {b, std::nullopt};
  w.closed_form_boundary = [](double t) { return -std::abs(t); };
  // The k2-geometric sum collapses each column:
  //   z = sum_k A_k psi1^k (k+2) / ((k+2) - psi2 (k+1)),  A_k = k!/(1+b)_k.
  // On the psi2 = 1 edge the denominator is exactly 1 and everything reduces
  // to moments of the A_k series, which have exact values at psi1 = 1.
  auto series = std::make_shared<PochSeries>(b);
  auto edge2_sums = [series](double x) {
    // (z, m1, m2) on the psi2 = 1 edge from S_j = sum k^j A_k x^k
    struct Sums { bool ok; double z, m1, m2; };
    auto s0 = series->value(x);
    auto s1 = series->moment(x);
    auto s2 = series->second_moment(x);
    if (!s0 || !s1) return Sums{false, 0, 0, 0};
    double z = *s1 + 2.0 * *s0;  // sum A_k x^k (k+2)
    if (!s2) return Sums{true, z, pos_inf, pos_inf};
    return Sums{true, z, *s2 + 2.0 * *s1, *s2 + 3.0 * *s1 + 2.0 * *s0};
  };
  w.closed_form_log_z =
      [b, edge2_sums](const Fugacity& psi) -> std::optional<double> {
    double p1 = psi.psi1, p2 = psi.psi2;
    if (p2 > 1.0 + 1e-12 || p1 > 1.0 + 1e-12) return std::nullopt;
    if (std::abs(p2 - 1.0) <= 1e-12) {
      auto s = edge2_sums(std::min(p1, 1.0));
      if (!s.ok) return std::nullopt;
      return std::log(s.z);
    }
    bool edge1 = std::abs(p1 - 1.0) <= 1e-12;
    if (edge1) {
      p1 = 1.0;
      if (b <= 1.0 + 1e-9) return std::nullopt;
    }
    double A = 1.0, acc = 0.0;
    for (long k = 0; k < 20'000'000; ++k) {
      double kk = double(k);
      double denom = (kk + 2.0) - p2 * (kk + 1.0);  // >= (1-p2)(k+1) + 1
      acc += A * (kk + 2.0) / denom;
      A *= p1 * (kk + 1.0) / (kk + 1.0 + b);
      double head = A * (kk + 3.0) / ((1.0 - p2) * (kk + 2.0));
      if (edge1) {
        // A_j decays like j^{-b}: integral comparison for the tail
        if (head * (kk + 2.0) / (b - 1.0) < 1e-14 * acc)
          return std::log(acc);
      } else {
        double q = p1 * (kk + 3.0) / (kk + 2.0);
        if (q < 1.0 && head * (kk + 2.0) / (1.0 - q) < 1e-14 * acc)
          return std::log(acc);
      }
    }
    return std::nullopt;
  };
  w.closed_form_density =
      [b, edge2_sums](
          const Fugacity& psi) -> std::optional<std::array<double, 2>> {
    double p1 = psi.psi1, p2 = psi.psi2;
    if (p2 > 1.0 + 1e-12 || p1 > 1.0 + 1e-12) return std::nullopt;
    if (std::abs(p2 - 1.0) <= 1e-12) {
      auto s = edge2_sums(std::min(p1, 1.0));
      if (!s.ok || s.m1 == pos_inf) return std::nullopt;
      return std::array<double, 2>{s.m1 / s.z, s.m2 / s.z};
    }
    bool edge1 = std::abs(p1 - 1.0) <= 1e-12;
    if (edge1) {
      p1 = 1.0;
      if (b <= 2.0 + 1e-9) return std::nullopt;
    }
    double A = 1.0, z = 0.0, m1 = 0.0, m2 = 0.0;
    for (long k = 0; k < 20'000'000; ++k) {
      double kk = double(k);
      double denom = (kk + 2.0) - p2 * (kk + 1.0);
      double zk = A * (kk + 2.0) / denom;
      z += zk;
      m1 += kk * zk;
      m2 += zk * p2 * (kk + 1.0) / denom;  // sum k2 (p2 q)^{k2} per column
      A *= p1 * (kk + 1.0) / (kk + 1.0 + b);
      double head = A * (kk + 3.0) * (kk + 3.0) /
                    ((1.0 - p2) * (1.0 - p2) * (kk + 2.0));
      if (edge1) {
        if (head * (kk + 2.0) / (b - 2.0) < 1e-11 * std::max(z, 1.0))
          return std::array<double, 2>{m1 / z, m2 / z};
      } else {
        double q = p1 * (kk + 4.0) * (kk + 4.0) / ((kk + 3.0) * (kk + 3.0));
        if (q < 1.0 && head * (kk + 2.0) / (1.0 - q) < 1e-12 * std::max(z, 1.0))
          return std::array<double, 2>{m1 / z, m2 / z};
      }
    }
    return std::nullopt;
  };
  return w;
}

// slowed free species 2:  w(k) = k1!/(1+b)_{k1} (k1+1)^{k2}/k2!
// z(mu) = e^{e^{mu2}} 2F1(1,1;1+b; e^{e^{mu2}+mu1})
inline TwoSpeciesWeight make_slowed_free(double b) {
  TwoSpeciesWeight w;
  w.name = "slowed-free";
  auto A = poch_coeffs(b);
  auto L = std::make_shared<CoeffTable>(
      [](long k) { return std::log(double(k + 1)); });
  w.log_eval_fn = [A, L](long k1, long k2) {
    return (*A)(k1) + double(k2) * (*L)(k1) - log_factorial(double(k2));
  };
  w.exp_bound_xi = std::exp(2.0);
  w.tail_exponent = {b, std::nullopt};
  w.closed_form_boundary = [](double t) {
    // solve e^{mu2} + mu2 + t = 0, monotone in mu2
    double lo = -std::abs(t) - 60.0, hi = std::abs(t) + 60.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (std::exp(mid) + mid + t > 0)
        hi = mid;
      else
        lo = mid;
    }
    double mu2 = 0.5 * (lo + hi);
    // one Newton polish
    for (int it = 0; it < 4; ++it)
      mu2 -= (std::exp(mu2) + mu2 + t) / (std::exp(mu2) + 1.0);
    return t + 2.0 * mu2;
  };
  auto series = std::make_shared<PochSeries>(b);
  w.closed_form_log_z = [series](const Fugacity& psi) -> std::optional<double> {
    double x = psi.psi1 * std::exp(psi.psi2);
    auto g = series->value(x);
    if (!g) return std::nullopt;
    return psi.psi2 + std::log(*g);
  };
  w.closed_form_density =
      [series](const Fugacity& psi) -> std::optional<std::array<double, 2>> {
    double x = psi.psi1 * std::exp(psi.psi2);
    auto g = series->value(x);
    auto m = series->moment(x);
    if (!g || !m) return std::nullopt;
    double r1 = *m / *g;
    return std::array<double, 2>{r1, psi.psi2 * (1.0 + r1)};
  };
  return w;
}

// symmetrized variant, (w_sf(k1,k2) + w_sf(k2,k1)) / 2; the 1/2 keeps
// w(0,0) = 1 so the pure exponential bound form still holds
inline TwoSpeciesWeight make_symmetrized(double b) {
  TwoSpeciesWeight base = make_slowed_free(b);
  TwoSpeciesWeight w;
  w.name = "symmetrized";
  auto lw = base.log_eval_fn;
  w.log_eval_fn = [lw](long k1, long k2) {
    return log_add(lw(k1, k2), lw(k2, k1)) - std::log(2.0);
  };
  w.exp_bound_xi = std::exp(2.0);
  w.tail_exponent = {b, b};
  auto cb = base.closed_form_boundary;
  w.closed_form_boundary = [cb](double t) {
    return std::min(cb(t), cb(-t));
  };
  auto cz = base.closed_form_log_z;
  w.closed_form_log_z = [cz](const Fugacity& psi) -> std::optional<double> {
    auto a = cz(psi);
    auto bb = cz(Fugacity(psi.psi2, psi.psi1));
    if (!a || !bb) return std::nullopt;
    return log_add(*a, *bb) - std::log(2.0);
  };
  auto cd = base.closed_form_density;
  w.closed_form_density =
      [cz, cd](const Fugacity& psi) -> std::optional<std::array<double, 2>> {
    Fugacity swapped(psi.psi2, psi.psi1);
    auto za = cz(psi), zb = cz(swapped);
    auto ra = cd(psi), rb = cd(swapped);
    if (!za || !zb || !ra || !rb) return std::nullopt;
    double wa = std::exp(*za), wb = std::exp(*zb);
    return std::array<double, 2>{
        (wa * (*ra)[0] + wb * (*rb)[1]) / (wa + wb),
        (wa * (*ra)[1] + wb * (*rb)[0]) / (wa + wb)};
  };
  return w;
}

// single condensing species plus a free Poisson species:
// w(k) = k1!/(1+b)_{k1} / k2!
inline TwoSpeciesWeight make_single_species(double b) {
  TwoSpeciesWeight w;
  w.name = "single-species-b";
  auto A = poch_coeffs(b);
  w.log_eval_fn = [A](long k1, long k2) {
    return (*A)(k1) - log_factorial(double(k2));
  };
  w.exp_bound_xi = 1.0;
  w.tail_exponent = {b, std::nullopt};
  w.closed_form_boundary = [](double t) { return -t; };  // mu1 <= 0
  auto series = std::make_shared<PochSeries>(b);
  w.closed_form_log_z = [series](const Fugacity& psi) -> std::optional<double> {
    auto g = series->value(psi.psi1);
    if (!g) return std::nullopt;
    return psi.psi2 + std::log(*g);
  };
  w.closed_form_density =
      [series](const Fugacity& psi) -> std::optional<std::array<double, 2>> {
    auto g = series->value(psi.psi1);
    auto m = series->moment(psi.psi1);
    if (!g || !m) return std::nullopt;
    return std::array<double, 2>{*m / *g, psi.psi2};
  };
  return w;
}

// independent species, each with its own Pochhammer tail
inline TwoSpeciesWeight make_factorized(double b1, double b2) {
  TwoSpeciesWeight w;
  w.name = "factorized";
  auto A1 = poch_coeffs(b1);
  auto A2 = poch_coeffs(b2);
  w.log_eval_fn = [A1, A2](long k1, long k2) {
    return (*A1)(k1) + (*A2)(k2);
  };
  w.exp_bound_xi = 1.0;
  w.tail_exponent = {b1, b2};
  w.closed_form_boundary = [](double t) { return -std::abs(t); };
  auto s1 = std::make_shared<PochSeries>(b1);
  auto s2 = std::make_shared<PochSeries>(b2);
  w.closed_form_log_z = [s1, s2](const Fugacity& psi) -> std::optional<double> {
    auto g1 = s1->value(psi.psi1);
    auto g2 = s2->value(psi.psi2);
    if (!g1 || !g2) return std::nullopt;
    return std::log(*g1) + std::log(*g2);
  };
  w.closed_form_density =
      [s1, s2](const Fugacity& psi) -> std::optional<std::array<double, 2>> {
    auto g1 = s1->value(psi.psi1), m1 = s1->moment(psi.psi1);
    auto g2 = s2->value(psi.psi2), m2 = s2->moment(psi.psi2);
    if (!g1 || !g2 || !m1 || !m2) return std::nullopt;
    return std::array<double, 2>{*m1 / *g1, *m2 / *g2};
  };
  return w;
}

}  // namespace detail

inline TwoSpeciesWeight builtin(const std::string& name,
                                const std::map<std::string, double>& params = {}) {
  auto get = [&](const std::string& key,
                 std::optional<double> dflt = std::nullopt) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (dflt) return *dflt;
    throw InvalidParam("builtin '" + name + "' needs parameter '" + key + "'");
  };
  auto need_b = [&](const std::string& key) {
    double b = get(key);
    if (!(b > 0)) throw InvalidParam("parameter " + key + " must be > 0");
    return b;
  };
  if (name == "evans-hanney") return detail::make_evans_hanney(need_b("b"));
  if (name == "slowed-free") return detail::make_slowed_free(need_b("b"));
  if (name == "symmetrized") return detail::make_symmetrized(need_b("b"));
  if (name == "single-species-b")
    return detail::make_single_species(need_b("b"));
  if (name == "factorized") {
    double b1 = params.count("b1") ? need_b("b1") : need_b("b");
    double b2 = params.count("b2") ? need_b("b2") : b1;
    return detail::make_factorized(b1, b2);
  }
  throw UnknownName(name);
}

}  // namespace zrp
