#pragma once

// Exact canonical ensembles for finite systems: Z_{L,N} by site-wise
// convolution in log space, single-site marginals, the specific relative
// entropy h_{L,N}(mu) between canonical and grand-canonical measures, and
// the equivalence-of-ensembles scan over system sizes.

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/grand_canonical.hpp"
#include "zrp/legendre.hpp"
#include "zrp/logspace.hpp"
#include "zrp/types.hpp"
#include "zrp/weights.hpp"

namespace zrp::canonical {

// log Z_{l,n} for l <= L and n <= cap.  Conservation bounds occupations by
// the total, so entries with n <= cap are exact regardless of cap.  Only the
// last two layers are kept unless keep_all is requested (marginals for
// intermediate l).
class CanonicalTable {
 public:
  CanonicalTable(const TwoSpeciesWeight& w, long L, std::array<long, 2> cap,
                 bool keep_all = false)
      : L_(L), cap_(cap), keep_all_(keep_all) {
    if (L < 1) throw InvalidParam("L must be >= 1");
    if (cap[0] < 0 || cap[1] < 0) throw InvalidParam("cap must be nonnegative");
    n1_ = cap[0] + 1;
    n2_ = cap[1] + 1;
    std::vector<double> lw(std::size_t(n1_ * n2_));
    for (long a = 0; a < n1_; ++a)
      for (long b = 0; b < n2_; ++b)
        lw[idx(a, b)] = w.log_eval(a, b);
    std::vector<double> prev, cur = lw;
    if (keep_all_) layers_.push_back(cur);
    for (long l = 2; l <= L; ++l) {
      std::vector<double> nxt(std::size_t(n1_ * n2_), neg_inf);
      for (long a = 0; a < n1_; ++a)
        for (long b = 0; b < n2_; ++b) {
          double mx = neg_inf;
          for (long i = 0; i <= a; ++i)
            for (long j = 0; j <= b; ++j)
              mx = std::max(mx, lw[idx(i, j)] + cur[idx(a - i, b - j)]);
          double s = 0;
          for (long i = 0; i <= a; ++i)
            for (long j = 0; j <= b; ++j)
              s += std::exp(lw[idx(i, j)] + cur[idx(a - i, b - j)] - mx);
          nxt[idx(a, b)] = mx + std::log(s);
        }
      prev = std::move(cur);
      cur = std::move(nxt);
      if (keep_all_) layers_.push_back(cur);
    }
    if (!keep_all_) {
      // keep only the layers marginals need: L-1 (when it exists) and L
      if (L >= 2) layers_.push_back(std::move(prev));
      layers_.push_back(std::move(cur));
    }
  }

  long L() const { return L_; }
  std::array<long, 2> cap() const { return cap_; }

  double log_Z(long l, std::array<long, 2> n) const {
    if (n[0] > cap_[0] || n[1] > cap_[1] || n[0] < 0 || n[1] < 0)
      throw OutOfRange("N outside table cap");
    return layer(l)[idx(n[0], n[1])];
  }

  // pi_{L,N}(eta(x) = k) = w(k) Z_{L-1,N-k} / Z_{L,N}, independent of x
  double site_marginal(const TwoSpeciesWeight& w, std::array<long, 2> N,
                       std::array<long, 2> k) const {
    if (L_ < 2) throw InvalidParam("site_marginal needs L >= 2");
    if (k[0] > N[0] || k[1] > N[1] || k[0] < 0 || k[1] < 0)
      throw OutOfRange("k must satisfy k <= N componentwise");
    double lz = log_Z(L_, N);
    double lzm = log_Z(L_ - 1, {N[0] - k[0], N[1] - k[1]});
    return std::exp(w.log_eval(k[0], k[1]) + lzm - lz);
  }

 private:
  long L_, n1_, n2_;
  std::array<long, 2> cap_;
  bool keep_all_;
  std::vector<std::vector<double>> layers_;

  std::size_t idx(long a, long b) const { return std::size_t(a * n2_ + b); }

  const std::vector<double>& layer(long l) const {
    if (l < 1 || l > L_) throw OutOfRange("layer index");
    if (keep_all_) return layers_[std::size_t(l - 1)];
    if (l == L_) return layers_.back();
    if (l == L_ - 1 && layers_.size() >= 2)
      return layers_[layers_.size() - 2];
    throw OutOfRange("layer " + std::to_string(l) +
                     " was not kept; build with keep_all");
  }
};

inline CanonicalTable build_table(const TwoSpeciesWeight& w, long L,
                                  std::array<long, 2> cap,
                                  bool keep_all = false) {
  return CanonicalTable(w, L, cap, keep_all);
}

// mu . N with the convention that an absent species (N_i = 0) contributes
// nothing even at mu_i = -infinity
inline double mu_dot_N(const ChemicalPotential& mu, std::array<long, 2> N) {
  double s = 0;
  if (N[0] != 0) s += mu.mu1 * double(N[0]);
  if (N[1] != 0) s += mu.mu2 * double(N[1]);
  if (std::isnan(s)) throw InvalidParam("mu_i = -inf with N_i > 0");
  return s;
}

// h_{L,N}(mu) = p(mu) - mu.N/L - (1/L) log Z_{L,N}
inline double specific_relative_entropy(const CanonicalTable& table,
                                        const TwoSpeciesWeight& w, long L,
                                        std::array<long, 2> N,
                                        const ChemicalPotential& mu,
                                        double tol = 1e-11) {
  if (L != table.L()) throw InvalidParam("table was built for a different L");
  gc::EvalOptions eo;
  eo.tol = tol;
  eo.best_effort = true;
  eo.need_second_moments = false;  // only p enters h
  auto st = gc::evaluate(w, mu.fugacity(), eo);
  if (st.membership == Membership::Exterior || st.p == pos_inf)
    throw Diverged("mu outside the domain of p");
  return st.p - mu_dot_N(mu, N) / double(L) -
         table.log_Z(L, N) / double(L);
}

// ---------------------------------------------------------------------------
// Equivalence-of-ensembles scan
// ---------------------------------------------------------------------------

struct ScanRow {
  long L = 0;
  std::array<long, 2> N{0, 0};
  double h = 0;                 // h_{L,N_L}(mbar)
  double log_Z_per_site = 0;    // (1/L) log Z_{L,N_L}
  double cor_residual = 0;      // (1/L) log Z + s(rho)
};

struct ScanResult {
  ChemicalPotential mbar;
  double p = 0;
  double s = 0;
  std::vector<ScanRow> rows;
};

namespace detail {

// 1D solve on the face psi_j = 0 (species j absent): either the density is
// reachable and M is interior in mu_i, or the face series saturates first
// and the maximizer sits at the critical fugacity.
inline ChemicalPotential face_maximizer(const TwoSpeciesWeight& w, int species,
                                        double rho_i,
                                        const legendre::SolveOptions& opt) {
  legendre::Solver solver(w, opt);
  const auto& ub = solver.boundary();
  // critical mu_i on the face from the boundary graph: mu1 = (u(t)+t)/2 as
  // t -> +inf (species 1), mu2 = (u(t)-t)/2 as t -> -inf (species 2)
  double T = 60.0;
  double mu_crit = species == 0 ? 0.5 * (ub(T) + T) : 0.5 * (ub(-T) + T);
  auto R_face = [&](double m) {
    Fugacity psi = species == 0 ? Fugacity(std::exp(m), 0.0)
                                : Fugacity(0.0, std::exp(m));
    gc::EvalOptions eo;
    eo.tol = 1e-9;
    eo.best_effort = true;
    eo.need_second_moments = false;
    auto st = solver.evaluator().evaluate(psi, eo);
    return st.R[std::size_t(species)];
  };
  double r_max = R_face(mu_crit);
  if (rho_i >= r_max - opt.grad_tol) {
    return species == 0 ? ChemicalPotential(mu_crit, neg_inf)
                        : ChemicalPotential(neg_inf, mu_crit);
  }
  double lo = mu_crit - 60.0, hi = mu_crit;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (R_face(mid) < rho_i ? lo : hi) = mid;
  }
  double m = 0.5 * (lo + hi);
  return species == 0 ? ChemicalPotential(m, neg_inf)
                      : ChemicalPotential(neg_inf, m);
}

}  // namespace detail

// N_L = round(rho L) componentwise; cap = N_L (exact, no truncation error on
// the canonical side).  rho may have one zero component, in which case the
// maximizer is computed on the corresponding face.
inline ScanResult equivalence_scan(const TwoSpeciesWeight& w,
                                   const DensityPair& rho,
                                   std::vector<long> L_list,
                                   const legendre::SolveOptions& opt = {}) {
  if (L_list.empty()) throw InvalidParam("empty L list");
  for (std::size_t i = 1; i < L_list.size(); ++i)
    if (L_list[i] <= L_list[i - 1])
      throw InvalidParam("L list must be increasing");

  ScanResult out;
  if (rho.rho1 > 0 && rho.rho2 > 0) {
    auto sol = legendre::solve(w, rho, opt);
    out.mbar = sol.mbar;
    out.p = sol.state.p;
    out.s = sol.s_value;
  } else if (rho.rho1 > 0 || rho.rho2 > 0) {
    int species = rho.rho1 > 0 ? 0 : 1;
    out.mbar = detail::face_maximizer(w, species, rho[species], opt);
    gc::EvalOptions eo;
    eo.tol = opt.boundary_tol;
    eo.best_effort = true;
    eo.need_second_moments = false;
    auto st = gc::evaluate(w, out.mbar.fugacity(), eo);
    out.p = st.p;
    out.s = rho[species] * out.mbar[species] - st.p;
  } else {
    throw InvalidParam("rho must have a positive component");
  }

  long Lmax = L_list.back();
  std::array<long, 2> cap{std::lround(rho.rho1 * double(Lmax)),
                          std::lround(rho.rho2 * double(Lmax))};
  // one incremental pass up to Lmax; entries with N_l <= cap are exact at
  // every intermediate layer since occupations cannot exceed the total
  std::vector<ScanRow> rows;
  long n1 = cap[0] + 1, n2 = cap[1] + 1;
  auto idx = [&](long a, long b) { return std::size_t(a * n2 + b); };
  std::vector<double> lw(std::size_t(n1 * n2));
  for (long a = 0; a < n1; ++a)
    for (long b = 0; b < n2; ++b) lw[idx(a, b)] = w.log_eval(a, b);
  std::vector<double> cur = lw;
  std::size_t next = 0;
  for (long l = 1; l <= Lmax && next < L_list.size(); ++l) {
    if (l > 1) {
      std::vector<double> nxt(std::size_t(n1 * n2), neg_inf);
      for (long a = 0; a < n1; ++a)
        for (long b = 0; b < n2; ++b) {
          double mx = neg_inf;
          for (long i = 0; i <= a; ++i)
            for (long j = 0; j <= b; ++j)
              mx = std::max(mx, lw[idx(i, j)] + cur[idx(a - i, b - j)]);
          if (mx == neg_inf) continue;
          double s = 0;
          for (long i = 0; i <= a; ++i)
            for (long j = 0; j <= b; ++j)
              s += std::exp(lw[idx(i, j)] + cur[idx(a - i, b - j)] - mx);
          nxt[idx(a, b)] = mx + std::log(s);
        }
      cur = std::move(nxt);
    }
    if (l == L_list[next]) {
      ScanRow row;
      row.L = l;
      row.N = {std::lround(rho.rho1 * double(l)),
               std::lround(rho.rho2 * double(l))};
      double lz = cur[idx(row.N[0], row.N[1])];
      row.log_Z_per_site = lz / double(l);
      row.h = out.p - mu_dot_N(out.mbar, row.N) / double(l) - row.log_Z_per_site;
      row.cor_residual = row.log_Z_per_site + out.s;
      rows.push_back(row);
      ++next;
    }
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace zrp::canonical
