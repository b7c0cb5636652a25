// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zrp/canonical.hpp"
#include "zrp/enumeration.hpp"
#include "zrp/grand_canonical.hpp"
#include "zrp/legendre.hpp"
#include "zrp/simulator.hpp"
#include "zrp/stats.hpp"
#include "zrp/weights.hpp"

using namespace zrp;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(int id, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// 1. build_table vs brute-force enumeration
void criterion1() {
  Timer tm;
  double worst = 0;
  for (const char* name : {"evans-hanney", "slowed-free"}) {
    auto w = builtin(name, {{"b", 4.0}});
    for (long L : {2L, 3L, 4L}) {
      auto table = canonical::build_table(w, L, {5, 5});
      for (long n1 = 0; n1 <= 5; ++n1)
        for (long n2 = 0; n2 <= 5; ++n2) {
          double a = table.log_Z(L, {n1, n2});
          double b = brute_force_log_Z(w, L, {n1, n2});
          worst = std::max(worst, std::abs(std::expm1(a - b)));
        }
    }
  }
  report(1, worst < 1e-12 && tm.seconds() < 60,
         "canonical table vs brute-force enumeration",
         "max rel err " + fmt(worst) + ", " + fmt(tm.seconds()) + " s");
}

// 2. duality round trip on an interior grid
void criterion2() {
  Timer tm;
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  legendre::Solver solver(w);
  gc::Evaluator ev(w);
  double worst = 0;
  int count = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 5; ++j) {
      ChemicalPotential mu(-2.2 + 1.8 * double(i) / 9.0,
                           -2.0 + 1.5 * double(j) / 4.0);
      auto st = ev.evaluate(mu.fugacity(), 1e-12);
      auto sol = solver.solve(DensityPair(st.R[0], st.R[1]));
      worst = std::max({worst, std::abs(sol.mbar.mu1 - mu.mu1),
                        std::abs(sol.mbar.mu2 - mu.mu2)});
      ++count;
    }
  report(2, worst < 1e-6 && count == 50 && tm.seconds() < 60,
         "solve(R(mu)) recovers mu on a 50-point interior grid",
         "max |dmu| " + fmt(worst) + ", " + fmt(tm.seconds()) + " s");
}

// 3. closed-form spot values of the hypergeometric-type weight
void criterion3() {
  Timer tm;
  auto w = builtin("slowed-free", {{"b", 4.0}});
  gc::EvalOptions opt;
  opt.tol = 1e-6;
  opt.need_second_moments = false;
  auto st = gc::evaluate(w, ChemicalPotential(-1.0, 0.0).fugacity(), opt);
  bool ok1 = std::abs(st.R[0] - 0.5) < 1e-3;
  auto sol = legendre::solve(w, DensityPair(2.0, 3.0));
  bool ok2 = std::abs(sol.rc.rho1 - 0.5) < 1e-3 &&
             std::abs(sol.rc.rho2 - 1.5) < 1e-3 &&
             std::abs(sol.mbar.mu1 + 1.0) < 1e-3 &&
             std::abs(sol.mbar.mu2) < 1e-3;
  report(3, ok1 && ok2 && tm.seconds() < 10,
         "boundary density R1 = 0.5 and R_c(2,3) = (0.5, 1.5)",
         "R1 " + fmt(st.R[0]) + ", rc (" + fmt(sol.rc.rho1) + "," +
             fmt(sol.rc.rho2) + "), " + fmt(tm.seconds()) + " s");
}

// 4. domain membership classification across the b cases
void criterion4() {
  Timer tm;
  Fugacity corner(1.0, 1.0), edge(1.0, std::exp(-0.5));
  auto cls = [](double b, const Fugacity& psi) {
    return gc::classify(builtin("evans-hanney", {{"b", b}}), psi);
  };
  bool ok = cls(4.0, corner) == Membership::BoundaryInDomain &&
            cls(4.0, edge) == Membership::BoundaryInDomain &&
            cls(2.5, corner) == Membership::BoundaryOutside &&
            cls(2.5, edge) == Membership::BoundaryInDomain &&
            cls(2.0, corner) == Membership::BoundaryOutside &&
            cls(2.0, edge) == Membership::BoundaryOutside;
  report(4, ok, "domain classification matches the three-case list",
         fmt(tm.seconds()) + " s");
}

// 5. equivalence of ensembles at an interior density
void criterion5() {
  Timer tm;
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  auto scan =
      canonical::equivalence_scan(w, DensityPair(0.2, 0.3), {8, 16, 32, 64});
  auto& r = scan.rows;
  bool dec = r[0].h > r[1].h && r[1].h > r[2].h && r[2].h > r[3].h;
  bool ratio = r[3].h < r[0].h / 3.0;
  bool res = std::abs(r[1].cor_residual) < std::abs(r[0].cor_residual) &&
             std::abs(r[2].cor_residual) < std::abs(r[1].cor_residual) &&
             std::abs(r[3].cor_residual) < std::abs(r[2].cor_residual);
  report(5, dec && ratio && res && tm.seconds() < 300,
         "h_L decreasing with h_64 < h_8/3 and shrinking residual",
         "h = {" + fmt(r[0].h) + ", " + fmt(r[1].h) + ", " + fmt(r[2].h) +
             ", " + fmt(r[3].h) + "}, " + fmt(tm.seconds()) + " s");
}

// 6. condensed-case equivalence for the embedded single species
void criterion6() {
  Timer tm;
  auto w = builtin("single-species-b", {{"b", 5.0}});
  auto scan = canonical::equivalence_scan(w, DensityPair(1.0, 0.0), {16, 32, 64});
  auto& r = scan.rows;
  bool dec = r[0].h > r[1].h && r[1].h > r[2].h;
  // rho_c derived from the boundary series must sit at 1/(b-2) = 1/3
  auto st = gc::evaluate(w, Fugacity(1.0, 0.0),
                         gc::EvalOptions{1e-6, 100000, false, true});
  bool rc_ok = std::abs(st.R[0] - 1.0 / 3.0) < 1e-3;
  report(6, dec && rc_ok && tm.seconds() < 300,
         "condensed h_L decreasing (rho = 1 > rho_c = 1/3)",
         "h = {" + fmt(r[0].h) + ", " + fmt(r[1].h) + ", " + fmt(r[2].h) +
             "}, rho_c " + fmt(st.R[0]) + ", " + fmt(tm.seconds()) + " s");
}

// 7. simulator stationarity against the exact canonical measure
void criterion7() {
  Timer tm;
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  long L = 3;
  std::array<long, 2> N{2, 2};
  auto exact = enumerate_canonical(w, L, N);
  auto tv_for = [&](const sim::JumpDist& d, std::uint64_t seed) {
    sim::SimParams p;
    p.L = L;
    p.N = N;
    p.p1 = d;
    p.p2 = d;
    p.events = 1000000;
    p.seed = seed;
    p.track_configs = true;
    auto t = sim::run(w, p);
    double tv = 0;
    for (auto& [eta, prob] : exact) {
      std::vector<long> key;
      for (auto& k : eta) {
        key.push_back(k[0]);
        key.push_back(k[1]);
      }
      auto it = t.config_time.find(key);
      tv += std::abs(prob - (it == t.config_time.end() ? 0.0 : it->second));
    }
    return 0.5 * tv;
  };
  double tv_sym = tv_for(sim::JumpDist::symmetric(), 101);
  double tv_asym = tv_for(sim::JumpDist::totally_asymmetric(), 102);
  report(7, tv_sym < 0.05 && tv_asym < 0.05 && tm.seconds() < 120,
         "empirical distribution within TV 0.05 of pi for sym and asym jumps",
         "TV sym " + fmt(tv_sym) + ", asym " + fmt(tv_asym) + ", " +
             fmt(tm.seconds()) + " s");
}

// 8. law of large numbers for the maximum occupation
void criterion8() {
  Timer tm;
  auto w = builtin("single-species-b", {{"b", 5.0}});
  auto rates = rates_from_weight(w);
  sim::SimParams p;
  p.L = 100;
  p.N = {100, 0};
  p.events = 4000000;
  p.burn_in = 0.5;
  p.seed = 2024;
  auto stats = sim::max_occupation_stats(rates, p, 0, 60, 10);
  double target = 2.0 / 3.0;
  bool mean_ok = std::abs(stats.max_frac.mean - target) < 0.15;
  bool chi_ok = stats.location_chi2_p > 0.01;
  report(8, mean_ok && chi_ok && tm.seconds() < 300,
         "M_L/L near 2/3 with uniform condensate location",
         "mean " + fmt(stats.max_frac.mean) + " +- " +
             fmt(stats.max_frac.ci95) + ", chi2 p " +
             fmt(stats.location_chi2_p) + ", " + fmt(tm.seconds()) + " s");
}

// 9. subexponential decay along the boundary normal only
void criterion9() {
  Timer tm;
  auto w = builtin("slowed-free", {{"b", 4.0}});
  double mu2 = 2.0;
  Fugacity psi = ChemicalPotential(-std::exp(mu2), mu2).fugacity();
  std::vector<double> radii{50, 100, 150, 200};
  auto along = gc::tail_rate(w, psi, {1.0, std::exp(mu2)}, radii);
  auto off = gc::tail_rate(w, psi, {1.0, 0.0}, radii);
  bool dec = true;
  for (std::size_t i = 1; i < along.size(); ++i)
    dec = dec && along[i].estimate < along[i - 1].estimate;
  bool ok = dec && along.back().estimate < 0.05 && off.back().estimate > 0.1;
  report(9, ok && tm.seconds() < 60,
         "normal-direction decay rate < 0.05 at r=200, off-normal > 0.1",
         "normal " + fmt(along.back().estimate) + ", off-normal " +
             fmt(off.back().estimate) + ", " + fmt(tm.seconds()) + " s");
}

// 10. gauge/tilt invariance, covariance Jacobian, subgradient rays
void criterion10() {
  Timer tm;
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  long L = 3;
  std::array<long, 2> N{2, 2};
  ChemicalPotential mu(-0.9, -0.7);

  auto ta = canonical::build_table(w, L, N);
  double ha = canonical::specific_relative_entropy(ta, w, L, N, mu, 1e-13);

  auto wg = w.scaled(2.5);
  auto tg = canonical::build_table(wg, L, N);
  double hg = canonical::specific_relative_entropy(tg, wg, L, N, mu, 1e-13);
  double gauge_err = std::abs(hg - ha);
  for (long k1 = 0; k1 <= N[0]; ++k1)
    for (long k2 = 0; k2 <= N[1]; ++k2)
      gauge_err = std::max(gauge_err,
                           std::abs(tg.site_marginal(wg, N, {k1, k2}) -
                                    ta.site_marginal(w, N, {k1, k2})));

  double th1 = 0.4, th2 = -0.3;
  auto wt = w.tilted(th1, th2);
  auto tt = canonical::build_table(wt, L, N);
  ChemicalPotential mu_t(mu.mu1 - th1, mu.mu2 - th2);
  double ht = canonical::specific_relative_entropy(tt, wt, L, N, mu_t, 1e-13);
  double tilt_err = std::abs(ht - ha);
  for (long k1 = 0; k1 <= N[0]; ++k1)
    for (long k2 = 0; k2 <= N[1]; ++k2)
      tilt_err = std::max(tilt_err,
                          std::abs(tt.site_marginal(wt, N, {k1, k2}) -
                                   ta.site_marginal(w, N, {k1, k2})));

  double cov_dev =
      gc::covariance_check(w, ChemicalPotential(-1.0, -1.0).fugacity(), 1e-4);

  auto sf = builtin("slowed-free", {{"b", 4.0}});
  legendre::Solver solver(sf);
  auto base = solver.solve(DensityPair(2.0, 3.0));
  auto n = base.normal_cone.at(0);
  double ray_err = 0;
  for (double lam : {0.1, 1.0, 10.0}) {
    auto sol = solver.solve(DensityPair(base.rc.rho1 + lam * n[0],
                                        base.rc.rho2 + lam * n[1]));
    ray_err = std::max({ray_err, std::abs(sol.mbar.mu1 - base.mbar.mu1),
                        std::abs(sol.mbar.mu2 - base.mbar.mu2),
                        std::abs(sol.rc.rho1 - base.rc.rho1),
                        std::abs(sol.rc.rho2 - base.rc.rho2)});
  }

  bool ok = gauge_err < 1e-12 && tilt_err < 1e-12 && cov_dev < 1e-5 &&
            ray_err < 1e-6;
  report(10, ok, "gauge/tilt invariance, covariance Jacobian, ray constancy",
         "gauge " + fmt(gauge_err) + ", tilt " + fmt(tilt_err) + ", cov " +
             fmt(cov_dev) + ", ray " + fmt(ray_err) + ", " +
             fmt(tm.seconds()) + " s");
}

// 11. corner of the symmetrized weight and its phase-diagram wedge
void criterion11() {
  Timer tm;
  auto w = builtin("symmetrized", {{"b", 4.0}});
  std::vector<double> grid;
  for (int i = -8; i <= 8; ++i) grid.push_back(0.25 * double(i));
  auto bd = gc::domain_boundary(w, grid);
  bool corner_ok = false;
  double mustar = 0, slope_gap = 0;
  if (bd.corner_list.size() == 1) {
    mustar = 0.5 * bd.corner_list[0].u;
    slope_gap = bd.corner_list[0].slope_left - bd.corner_list[0].slope_right;
    corner_ok = std::abs(mustar + std::exp(mustar)) < 1e-8 && slope_gap > 1e-3;
  }

  // wedge: cells whose maximizer is the corner sit between the two
  // smooth-branch regions along anti-diagonal sweeps
  auto pd = legendre::phase_diagram(w, {3.0, 3.0}, 24);
  long wedge = 0, left = 0, right = 0;
  bool wedge_both = true;
  bool ordered = true;
  for (long j = 0; j < 24; ++j) {
    int state = 0;  // expect branch(t<0) -> corner -> branch(t>0) in i
    for (long i = 0; i < 24; ++i) {
      const auto& cell = pd.cell(i, j);
      if (pd.label(i, j) == legendre::Phase::Homogeneous ||
          pd.label(i, j) == legendre::Phase::Unresolved)
        continue;
      double t = cell.mbar.tilde1();
      int kind = std::abs(t) < 1e-3 ? 1 : (t < 0 ? 0 : 2);
      if (kind == 1) {
        ++wedge;
        if (pd.label(i, j) != legendre::Phase::CondensedBoth)
          wedge_both = false;
      } else if (kind == 0) {
        ++left;
      } else {
        ++right;
      }
      if (kind < state) ordered = false;
      state = std::max(state, kind);
    }
  }
  bool topo = wedge > 0 && left > 0 && right > 0 && wedge_both && ordered;
  report(11, corner_ok && topo,
         "corner at mu* with two normals; corner wedge between branch regions",
         "mu* " + fmt(mustar) + ", slope gap " + fmt(slope_gap) + ", wedge " +
             fmt(double(wedge)) + " cells, " + fmt(tm.seconds()) + " s");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
