#pragma once

// Grand-canonical quantities of a two-species weight: the single-site
// partition function z(mu), the pressure p = log z, the density map R and
// the occupation covariance, all with a certified relative truncation bound.
//
// Everything is summed over shells k1 + k2 = m in log space.  Three tail
// certificates are attempted, in this order:
//   geometric   -- trailing shell ratios stay below 1 with non-increasing
//                  drift; tail bounded by a geometric series
//   power-law   -- trailing ratios are ~1 and the declared tail metadata
//                  admits a power-law fit of the shell sums; tail bounded by
//                  an integral comparison (boundary points)
//   divergence  -- shell sums grow; the point is outside dom z
// Membership in D_mu is decided geometrically when the weight has a closed
// boundary and otherwise from the same shell diagnostics.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"
#include "zrp/types.hpp"
#include "zrp/weights.hpp"

namespace zrp::gc {

struct EvalOptions {
  double tol = 1e-10;       // certified relative truncation target
  long max_shells = 100000; // shell budget, m <= max_shells
  bool need_second_moments = true;
  bool best_effort = false; // at budget, return achieved bound instead of
                            // throwing NoCertificate
};

struct GrandCanonicalState {
  Fugacity psi;
  double log_z = neg_inf;
  double p = neg_inf;  // = log_z
  double z = 0;
  std::array<double, 2> R{0, 0};
  std::array<std::array<double, 2>, 2> covariance{{{0, 0}, {0, 0}}};
  double trunc_error = 0;
  Membership membership = Membership::Interior;
  std::string route;
  long shells_used = 0;
};

namespace detail {

// indices of the tracked series
enum Series { Z = 0, M1, M2, S11, S12, S22, NSERIES };

struct PowerFit {
  double a = 0;       // estimated decay exponent of the shell sums
  double a_lo = 0;    // pessimistic exponent used for the tail bound
  bool usable = false;
};

inline PowerFit fit_exponent(const std::vector<double>& shell_log, long m) {
  PowerFit out;
  long lo = m / 2;
  if (lo < 8) return out;
  auto slope = [&](long a, long b) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (long j = a; j <= b; ++j) {
      if (shell_log[std::size_t(j)] == neg_inf) continue;
      double x = std::log(double(j)), y = shell_log[std::size_t(j)];
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
    if (n < 6) return std::numeric_limits<double>::quiet_NaN();
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
  };
  double s_all = slope(lo, m);
  double s_a = slope(lo, (lo + m) / 2);
  double s_b = slope((lo + m) / 2, m);
  if (std::isnan(s_all) || std::isnan(s_a) || std::isnan(s_b)) return out;
  out.a = -s_all;
  double jitter = std::abs(s_a - s_b);
  out.a_lo = out.a - jitter - 0.05;
  out.usable = jitter < 0.5;
  return out;
}

}  // namespace detail

// Evaluator caches log-weight shells so repeated evaluations of the same
// weight at different fugacities (solver iterations, phase-diagram grids)
// stay cheap.  Not safe to share one instance across threads.
class Evaluator {
 public:
  explicit Evaluator(TwoSpeciesWeight w) : w_(std::move(w)) {}

  const TwoSpeciesWeight& weight() const { return w_; }

  GrandCanonicalState evaluate(const Fugacity& psi,
                               const EvalOptions& opt = {}) const {
    if (psi.psi1 == 0.0 && psi.psi2 == 0.0) {
      GrandCanonicalState st;
      st.psi = psi;
      st.log_z = st.p = w_.log_eval(0, 0);
      st.z = std::exp(st.log_z);
      st.membership = Membership::Interior;
      st.route = "trivial";
      return st;
    }

    // geometric pre-classification from the closed-form boundary
    std::optional<Membership> geo;
    if (w_.has_closed_boundary() && psi.psi1 > 0 && psi.psi2 > 0) {
      ChemicalPotential mu = ChemicalPotential::from_fugacity(psi);
      double du = mu.tilde2() - w_.closed_form_boundary(mu.tilde1());
      if (du > 1e-9)
        throw Diverged("fugacity (" + std::to_string(psi.psi1) + "," +
                       std::to_string(psi.psi2) +
                       ") lies outside the domain boundary");
      if (du >= -1e-9) geo = Membership::BoundaryInDomain;  // refined below
      else geo = Membership::Interior;
    }
    return sum_shells(psi, opt, geo);
  }

  GrandCanonicalState evaluate(const Fugacity& psi, double tol) const {
    EvalOptions opt;
    opt.tol = tol;
    return evaluate(psi, opt);
  }

  Membership classify(const Fugacity& psi) const {
    EvalOptions opt;
    opt.tol = 5e-3;
    opt.max_shells = 8000;
    opt.need_second_moments = false;
    opt.best_effort = true;
    try {
      return evaluate(psi, opt).membership;
    } catch (const Diverged&) {
      return Membership::Exterior;
    }
  }

 private:
  TwoSpeciesWeight w_;
  // rows_[m][k1] = log w(k1, m-k1); cached only up to a cap so that deep
  // boundary evaluations cannot exhaust memory
  static constexpr long cache_cap_ = 6000;
  mutable std::vector<std::vector<double>> rows_;

  const std::vector<double>& row(long m) const {
    while (long(rows_.size()) <= m) {
      long mm = long(rows_.size());
      std::vector<double> r(std::size_t(mm) + 1);
      for (long k1 = 0; k1 <= mm; ++k1)
        r[std::size_t(k1)] = w_.log_eval_fn(k1, mm - k1);
      rows_.push_back(std::move(r));
    }
    return rows_[std::size_t(m)];
  }

  GrandCanonicalState sum_shells(const Fugacity& psi, const EvalOptions& opt,
                                 std::optional<Membership> geo) const {
    using namespace detail;
    const double lp1 = psi.log_psi(0), lp2 = psi.log_psi(1);
    const int ns = opt.need_second_moments ? NSERIES : S11;

    std::array<LogAccumulator, NSERIES> acc;
    std::array<std::vector<double>, NSERIES> shells;
    for (int i = 0; i < ns; ++i) shells[i].reserve(1024);

    const long W = 16;          // ratio window
    const long decide_every = 16;
    const double margin = 0.1;  // exponent margin around 1 for moment sums

    std::array<double, NSERIES> prev_dmax;
    prev_dmax.fill(pos_inf);
    std::array<bool, NSERIES> converged{};   // certified below tol
    std::array<bool, NSERIES> divergent{};   // certified divergent (power law)
    std::array<double, NSERIES> rel_tail;
    rel_tail.fill(pos_inf);
    std::string route = "none";
    bool power_regime = false;

    auto finish = [&](long m_used) {
      GrandCanonicalState st;
      st.psi = psi;
      st.shells_used = m_used;
      st.route = route;
      st.log_z = acc[Z].value;
      st.p = st.log_z;
      st.z = std::exp(st.log_z);
      double worst = 0;
      for (int i = 0; i < ns; ++i)
        if (!divergent[i] && acc[i].value != neg_inf)
          worst = std::max(worst, rel_tail[i] == pos_inf ? 1.0 : rel_tail[i]);
      st.trunc_error = worst;
      st.R[0] = divergent[M1] ? pos_inf : std::exp(acc[M1].value - acc[Z].value);
      st.R[1] = divergent[M2] ? pos_inf : std::exp(acc[M2].value - acc[Z].value);
      if (opt.need_second_moments) {
        auto second = [&](int sij, int i, int j) {
          if (divergent[sij] || divergent[M1] || divergent[M2]) return pos_inf;
          return std::exp(acc[sij].value - acc[Z].value) - st.R[i] * st.R[j];
        };
        st.covariance[0][0] = second(S11, 0, 0);
        st.covariance[0][1] = st.covariance[1][0] = second(S12, 0, 1);
        st.covariance[1][1] = second(S22, 1, 1);
      }
      // membership: geometry wins when available; otherwise the series
      // diagnostics decide
      bool moments_ok = !divergent[Z] && !divergent[M1] && !divergent[M2];
      if (geo) {
        if (*geo == Membership::Interior)
          st.membership = Membership::Interior;
        else
          st.membership = moments_ok ? Membership::BoundaryInDomain
                                     : Membership::BoundaryOutside;
      } else if (power_regime) {
        st.membership = moments_ok ? Membership::BoundaryInDomain
                                   : Membership::BoundaryOutside;
      } else {
        st.membership = Membership::Interior;
      }
      if (divergent[Z]) {
        st.log_z = st.p = pos_inf;
        st.z = pos_inf;
        st.R = {pos_inf, pos_inf};
      }
      return st;
    };

    std::vector<double> scratch;
    for (long m = 0; m <= opt.max_shells; ++m) {
      long k1_lo = (psi.psi2 == 0.0) ? m : 0;
      long k1_hi = (psi.psi1 == 0.0) ? 0 : m;
      if (k1_lo > k1_hi) {  // only possible when both psi are zero and m > 0
        for (int i = 0; i < ns; ++i) shells[i].push_back(neg_inf);
        continue;
      }
      scratch.resize(std::size_t(k1_hi - k1_lo + 1));
      const double* rw = nullptr;
      if (k1_lo == 0 && k1_hi == m && m <= cache_cap_) rw = row(m).data();
      double mx = neg_inf;
      for (long k1 = k1_lo; k1 <= k1_hi; ++k1) {
        double lt = rw ? rw[std::size_t(k1)] : w_.log_eval_fn(k1, m - k1);
        if (k1 > 0) lt += double(k1) * lp1;
        if (m - k1 > 0) lt += double(m - k1) * lp2;
        scratch[std::size_t(k1 - k1_lo)] = lt;
        mx = std::max(mx, lt);
      }
      std::array<double, NSERIES> s{};
      s.fill(0.0);
      if (mx != neg_inf) {
        for (long k1 = k1_lo; k1 <= k1_hi; ++k1) {
          double e = std::exp(scratch[std::size_t(k1 - k1_lo)] - mx);
          double a = double(k1), b = double(m - k1);
          s[Z] += e;
          s[M1] += a * e;
          s[M2] += b * e;
          if (opt.need_second_moments) {
            s[S11] += a * a * e;
            s[S12] += a * b * e;
            s[S22] += b * b * e;
          }
        }
      }
      for (int i = 0; i < ns; ++i) {
        double sl = (mx == neg_inf || s[i] <= 0) ? neg_inf : mx + std::log(s[i]);
        shells[i].push_back(sl);
        acc[i].add(sl);
      }
      if (acc[Z].value > 700.0)
        throw Diverged("z exceeded exp(700) after " + std::to_string(m) +
                       " shells");

      if (m < 3 * W || m % decide_every != 0) continue;

      // trailing log-ratios of the z shells steer the route
      auto window_stats = [&](int i) {
        double dmax = neg_inf, dmin = pos_inf;
        for (long j = m - W + 1; j <= m; ++j) {
          double d = shells[i][std::size_t(j)] - shells[i][std::size_t(j - 1)];
          dmax = std::max(dmax, d);
          dmin = std::min(dmin, d);
        }
        return std::pair<double, double>(dmax, dmin);
      };
      auto [zmax, zmin] = window_stats(Z);

      if (std::isfinite(zmin) && zmin > std::log(1.001) &&
          shells[Z][std::size_t(m)] > shells[Z][std::size_t(m - W)])
        throw Diverged("z shell sums grow at shell " + std::to_string(m));

      if (zmax < std::log(0.98)) {
        // geometric regime; project the observed drift forward so a slowly
        // rising ratio cannot invalidate the bound
        bool ok = true;
        double worst_rel = 0;
        for (int i = 0; i < ns; ++i) {
          if (acc[i].value == neg_inf) { rel_tail[i] = 0; continue; }
          auto [dmax, dmin] = window_stats(i);
          (void)dmin;
          double drift = prev_dmax[i] == pos_inf
                             ? 0.0
                             : std::max(0.0, (dmax - prev_dmax[i]));
          prev_dmax[i] = dmax;
          double dhat = dmax + 8.0 * drift;
          if (dhat > std::log(1.0 - 1e-7)) { ok = false; continue; }
          double q = std::exp(dhat);
          double tail_log =
              shells[i][std::size_t(m)] + std::log(q / (1.0 - q));
          rel_tail[i] = std::exp(tail_log - acc[i].value);
          worst_rel = std::max(worst_rel, rel_tail[i]);
          converged[i] = rel_tail[i] <= opt.tol;
        }
        if (ok && worst_rel <= opt.tol) {
          route = "geometric";
          return finish(m);
        }
        continue;
      }

      // ratios near one: power-law regime on the boundary.  When geometry
      // already certifies the point as interior the ratios merely sit close
      // to one and a power-law verdict would be spurious; keep summing and
      // let the geometric certificate finish.
      if (zmax <= std::log(1.02) && m >= 512) {
        if (geo && *geo == Membership::Interior) continue;
        if (!w_.tail_exponent[0] && !w_.tail_exponent[1]) {
          if (m >= opt.max_shells - decide_every) break;  // -> NoCertificate
          continue;
        }
        power_regime = true;
        route = "power-law";
        bool all_done = true;
        for (int i = 0; i < ns; ++i) {
          if (acc[i].value == neg_inf) { rel_tail[i] = 0; continue; }
          auto fit = detail::fit_exponent(shells[i], m);
          if (!fit.usable) { all_done = false; continue; }
          if (fit.a_lo <= 1.0 + margin) {
            divergent[i] = true;
            continue;
          }
          divergent[i] = false;
          double tail_log = shells[i][std::size_t(m)] +
                            std::log(double(m) / (fit.a_lo - 1.0));
          rel_tail[i] = std::exp(tail_log - acc[i].value);
          converged[i] = rel_tail[i] <= opt.tol;
          if (!converged[i]) all_done = false;
        }
        if (all_done && m >= 1024) return finish(m);
      }
    }

    if (opt.best_effort && route != "none") return finish(opt.max_shells);
    if (power_regime) {
      // classification is solid but the tolerance was not reached
      double worst = 0;
      for (int i = 0; i < detail::NSERIES; ++i)
        if (!divergent[i] && rel_tail[i] != pos_inf)
          worst = std::max(worst, rel_tail[i]);
      throw NoCertificate(
          "power-law tail bound reached " + std::to_string(worst) +
          " > tol within " + std::to_string(opt.max_shells) + " shells");
    }
    throw NoCertificate("no geometric or power-law tail bound applies within " +
                        std::to_string(opt.max_shells) + " shells");
  }
};

// One-shot convenience wrapper
inline GrandCanonicalState evaluate(const TwoSpeciesWeight& w,
                                    const Fugacity& psi,
                                    const EvalOptions& opt = {}) {
  return Evaluator(w).evaluate(psi, opt);
}

inline GrandCanonicalState evaluate(const TwoSpeciesWeight& w,
                                    const Fugacity& psi, double tol) {
  EvalOptions opt;
  opt.tol = tol;
  return Evaluator(w).evaluate(psi, opt);
}

inline Membership classify(const TwoSpeciesWeight& w, const Fugacity& psi) {
  return Evaluator(w).classify(psi);
}

// ---------------------------------------------------------------------------
// Domain boundary in rotated coordinates
// ---------------------------------------------------------------------------

struct CornerInfo {
  double t = 0, u = 0;
  double slope_left = 0, slope_right = 0;
};

struct DomainBoundary {
  std::function<double(double)> boundary_fn;  // tilde-mu2(tilde-mu1)
  std::vector<CornerInfo> corner_list;
  std::vector<std::array<double, 2>> samples;  // (t, u) on the request grid
};

struct BoundaryOptions {
  long radius_budget = 3000;   // shells used for the limsup estimate
  double corner_tol = 1e-3;    // one-sided slope difference that flags a corner
  double stabilization_tol = 1e-3;
};

namespace detail {

inline double one_sided_slope(const std::function<double(double)>& f, double t,
                              double h) {
  return (f(t + h) - f(t)) / h;
}

// Locate a kink of the concave graph u(t) inside [lo,hi] by bisecting on the
// derivative level; u' is decreasing, so the crossing of the mid-slope is
// exactly the corner when one exists.
inline CornerInfo refine_corner(const std::function<double(double)>& f,
                                double lo, double hi) {
  double h0 = 1e-7 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  double sL = one_sided_slope(f, lo, h0);             // just right of lo
  double sR = (f(hi) - f(hi - h0)) / h0;              // just left of hi
  double target = 0.5 * (sL + sR);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    double h = std::max(1e-9, (hi - lo) * 1e-3);
    double s = (f(mid + h) - f(mid - h)) / (2 * h);
    if (s > target)
      lo = mid;
    else
      hi = mid;
  }
  CornerInfo c;
  c.t = 0.5 * (lo + hi);
  c.u = f(c.t);
  double h = 1e-7 * std::max(1.0, std::abs(c.t));
  c.slope_left = (f(c.t) - f(c.t - h)) / h;
  c.slope_right = (f(c.t + h) - f(c.t)) / h;
  return c;
}

}  // namespace detail

inline DomainBoundary domain_boundary(const TwoSpeciesWeight& w,
                                      const std::vector<double>& t_grid,
                                      const BoundaryOptions& opt = {}) {
  if (t_grid.size() < 2) throw InvalidParam("boundary grid needs >= 2 points");
  DomainBoundary out;

  if (w.has_closed_boundary()) {
    out.boundary_fn = w.closed_form_boundary;
  } else {
    // Estimate the limsup of (2 log w + t (k1-k2))/(k1+k2).  One streaming
    // pass over the shells m in [M/2, M] records running maxima on four
    // trailing windows for every grid point; the running maximum is then
    // extrapolated with the model  s(m) = b - (c log m + d loglog m + e)/m,
    // which is linear in the unknowns.  The estimates from the two
    // overlapping window triples must agree (stabilization check).
    const long M = opt.radius_budget;
    const std::size_t nt = t_grid.size();
    std::vector<std::array<double, 4>> smax(
        nt, {neg_inf, neg_inf, neg_inf, neg_inf});
    std::array<long, 5> edges{M / 2, 5 * M / 8, 3 * M / 4, 7 * M / 8, M};
    std::vector<double> rw;
    for (long m = edges[0]; m <= M; ++m) {
      int win = 3;
      while (m < edges[std::size_t(win) + 1] - (win == 3 ? -1 : 0) &&
             m < edges[std::size_t(win)])
        --win;
      rw.resize(std::size_t(m) + 1);
      for (long k1 = 0; k1 <= m; ++k1)
        rw[std::size_t(k1)] = 2.0 * w.log_eval_fn(k1, m - k1) / double(m);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        double t = t_grid[ti] / double(m);
        double mx = neg_inf;
        for (long k1 = 0; k1 <= m; ++k1)
          mx = std::max(mx, rw[std::size_t(k1)] + t * double(2 * k1 - m));
        smax[ti][std::size_t(win)] = std::max(smax[ti][std::size_t(win)], mx);
      }
    }
    auto samples = std::make_shared<std::vector<std::array<double, 2>>>();
    for (std::size_t ti = 0; ti < nt; ++ti) {
      // accumulate the running maximum across windows
      std::array<double, 4> s = smax[ti];
      for (int i = 1; i < 4; ++i) s[std::size_t(i)] =
          std::max(s[std::size_t(i)], s[std::size_t(i - 1)]);
      std::array<double, 4> g{}, gg{}, u{};
      for (int i = 0; i < 4; ++i) {
        double mend = double(edges[std::size_t(i) + 1]);
        g[std::size_t(i)] = std::log(mend) / mend;
        gg[std::size_t(i)] = std::log(std::log(mend)) / mend;
        u[std::size_t(i)] = 1.0 / mend;
      }
      auto solve3 = [&](int i0) {
        // differences eliminate b: solve for (c, d) from the g and gg
        // columns, absorbing e into the residual via the u column
        double a11 = g[std::size_t(i0)] - g[std::size_t(i0 + 1)];
        double a12 = u[std::size_t(i0)] - u[std::size_t(i0 + 1)];
        double a21 = g[std::size_t(i0 + 1)] - g[std::size_t(i0 + 2)];
        double a22 = u[std::size_t(i0 + 1)] - u[std::size_t(i0 + 2)];
        double r1 = s[std::size_t(i0 + 1)] - s[std::size_t(i0)];
        double r2 = s[std::size_t(i0 + 2)] - s[std::size_t(i0 + 1)];
        double det = a11 * a22 - a12 * a21;
        double c = (r1 * a22 - r2 * a12) / det;
        double d = (a11 * r2 - a21 * r1) / det;
        return s[std::size_t(i0 + 2)] + c * g[std::size_t(i0 + 2)] +
               d * u[std::size_t(i0 + 2)];
      };
      auto solve4 = [&]() {
        // full 3x3 system for (c, d, e) from successive differences
        double A[3][3], r[3];
        for (int i = 0; i < 3; ++i) {
          A[i][0] = g[std::size_t(i)] - g[std::size_t(i + 1)];
          A[i][1] = gg[std::size_t(i)] - gg[std::size_t(i + 1)];
          A[i][2] = u[std::size_t(i)] - u[std::size_t(i + 1)];
          r[i] = s[std::size_t(i + 1)] - s[std::size_t(i)];
        }
        // Cramer
        auto det3 = [](double M3[3][3]) {
          return M3[0][0] * (M3[1][1] * M3[2][2] - M3[1][2] * M3[2][1]) -
                 M3[0][1] * (M3[1][0] * M3[2][2] - M3[1][2] * M3[2][0]) +
                 M3[0][2] * (M3[1][0] * M3[2][1] - M3[1][1] * M3[2][0]);
        };
        double D = det3(A);
        double C[3];
        for (int j = 0; j < 3; ++j) {
          double T[3][3];
          for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) T[i][k] = A[i][k];
          for (int i = 0; i < 3; ++i) T[i][j] = r[i];
          C[j] = det3(T) / D;
        }
        return s[3] + C[0] * g[3] + C[1] * gg[3] + C[2] * u[3];
      };
      double b3 = solve3(1);
      double b4 = solve4();
      double t = t_grid[ti];
      if (std::abs(b4 - b3) >
          opt.stabilization_tol * std::max(1.0, std::abs(b4)))
        throw RadiusExhausted(
            "boundary limsup not stabilized at t=" + std::to_string(t) +
            " (estimates " + std::to_string(b3) + " vs " + std::to_string(b4) +
            ")");
      samples->push_back({t, -b4});
    }
    out.boundary_fn = [samples](double t) {
      const auto& s = *samples;
      if (t <= s.front()[0])
        return s.front()[1] +
               (s[1][1] - s[0][1]) / (s[1][0] - s[0][0]) * (t - s.front()[0]);
      if (t >= s.back()[0]) {
        auto& a = s[s.size() - 2];
        auto& b = s.back();
        return b[1] + (b[1] - a[1]) / (b[0] - a[0]) * (t - b[0]);
      }
      for (std::size_t i = 1; i < s.size(); ++i)
        if (t <= s[i][0]) {
          double f = (t - s[i - 1][0]) / (s[i][0] - s[i - 1][0]);
          return (1 - f) * s[i - 1][1] + f * s[i][1];
        }
      return s.back()[1];
    };
  }

  for (double t : t_grid) out.samples.push_back({t, out.boundary_fn(t)});

  // corner scan: one-sided secant slopes on consecutive grid cells
  for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
    double tl = t_grid[i - 1], tm = t_grid[i], tr = t_grid[i + 1];
    double sl = (out.boundary_fn(tm) - out.boundary_fn(tl)) / (tm - tl);
    double sr = (out.boundary_fn(tr) - out.boundary_fn(tm)) / (tr - tm);
    if (sl - sr > opt.corner_tol) {
      if (w.has_closed_boundary()) {
        auto c = detail::refine_corner(out.boundary_fn, tl, tr);
        if (c.slope_left - c.slope_right > opt.corner_tol) {
          // deduplicate corners found from neighbouring cells
          if (out.corner_list.empty() ||
              std::abs(out.corner_list.back().t - c.t) > 1e-9)
            out.corner_list.push_back(c);
        }
      } else {
        CornerInfo c;
        c.t = tm;
        c.u = out.boundary_fn(tm);
        c.slope_left = sl;
        c.slope_right = sr;
        if (out.corner_list.empty() ||
            std::abs(out.corner_list.back().t - c.t) > 1e-9)
          out.corner_list.push_back(c);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subexponential tail rates along a direction (Lemma-style diagnostics):
// -log nu^1_mu(k_r)/|k_r| with k_r = round(r * direction), computed on the
// un-normalized weight * fugacity mass (the normalization shifts every
// estimate by log z / |k|, irrelevant in the limit).
// ---------------------------------------------------------------------------

struct TailRatePoint {
  double radius;
  std::array<long, 2> k;
  double estimate;
};

inline std::vector<TailRatePoint> tail_rate(const TwoSpeciesWeight& w,
                                            const Fugacity& psi,
                                            std::array<double, 2> direction,
                                            const std::vector<double>& radii) {
  Membership ms = classify(w, psi);
  if (ms != Membership::BoundaryInDomain && ms != Membership::BoundaryOutside)
    throw NotInDomain("tail_rate needs a fugacity on the domain boundary, got " +
                      to_string(ms));
  double nrm = std::hypot(direction[0], direction[1]);
  if (nrm <= 0) throw InvalidParam("direction must be nonzero");
  std::array<double, 2> e{direction[0] / nrm, direction[1] / nrm};
  std::vector<TailRatePoint> out;
  for (double r : radii) {
    TailRatePoint p;
    p.radius = r;
    p.k = {std::lround(r * e[0]), std::lround(r * e[1])};
    if (p.k[0] == 0 && p.k[1] == 0) continue;
    double lmass = w.log_eval(p.k[0], p.k[1]);
    if (p.k[0] > 0) lmass += double(p.k[0]) * psi.log_psi(0);
    if (p.k[1] > 0) lmass += double(p.k[1]) * psi.log_psi(1);
    p.estimate = -lmass / std::hypot(double(p.k[0]), double(p.k[1]));
    out.push_back(p);
  }
  return out;
}

// Max absolute deviation between the covariance matrix and a central
// finite-difference Jacobian of R in mu (independent of the moment sums)
inline double covariance_check(const TwoSpeciesWeight& w, const Fugacity& psi,
                               double h = 1e-4, double tol = 1e-11) {
  Evaluator ev(w);
  EvalOptions opt;
  opt.tol = tol;
  auto center = ev.evaluate(psi, opt);
  if (center.membership != Membership::Interior)
    throw InvalidParam("covariance_check needs an interior fugacity");
  double dev = 0;
  for (int j = 0; j < 2; ++j) {
    Fugacity up(psi.psi1 * (j == 0 ? std::exp(h) : 1.0),
                psi.psi2 * (j == 1 ? std::exp(h) : 1.0));
    Fugacity dn(psi.psi1 * (j == 0 ? std::exp(-h) : 1.0),
                psi.psi2 * (j == 1 ? std::exp(-h) : 1.0));
    auto su = ev.evaluate(up, opt);
    auto sd = ev.evaluate(dn, opt);
    for (int i = 0; i < 2; ++i) {
      double fd = (su.R[std::size_t(i)] - sd.R[std::size_t(i)]) / (2 * h);
      dev = std::max(dev, std::abs(fd - center.covariance[std::size_t(i)][std::size_t(j)]));
    }
  }
  return dev;
}

}  // namespace zrp::gc
