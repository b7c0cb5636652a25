#pragma once

// The variational problem behind the phase diagram: minimize
// F(mu) = p(mu) - rho.mu over the domain of the pressure.  Interior minima
// are the homogeneous phase; minima pushed onto the domain boundary carry a
// condensed phase, with the excess density rho - R(mbar) distributed along
// the outward normal cone of the boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/grand_canonical.hpp"
#include "zrp/types.hpp"
#include "zrp/weights.hpp"

namespace zrp::legendre {

enum class Phase { Homogeneous, Condensed1, Condensed2, CondensedBoth, Unresolved };

inline std::string to_string(Phase ph) {
  switch (ph) {
    case Phase::Homogeneous: return "Homogeneous";
    case Phase::Condensed1: return "Condensed1";
    case Phase::Condensed2: return "Condensed2";
    case Phase::CondensedBoth: return "CondensedBoth";
    case Phase::Unresolved: return "Unresolved";
  }
  return "?";
}

struct EntropySolution {
  ChemicalPotential mbar;
  double s_value = 0;
  DensityPair rc;
  Phase phase = Phase::Homogeneous;
  std::vector<std::array<double, 2>> normal_cone;  // empty when interior
  bool on_boundary = false;
  gc::GrandCanonicalState state;  // grand-canonical state at mbar
};

struct SolveOptions {
  double grad_tol = 1e-8;
  double eps_phase = 1e-6;          // relative density gap that counts as condensed
  double series_tol = 1e-11;        // interior evaluations
  double boundary_tol = 1e-6;       // boundary evaluations (power-law tails)
  long max_newton = 120;
  double t_tol = 1e-10;             // golden-section interval in t
  double corner_tol = 1e-3;
  long boundary_grid_radius = 24;   // |t| range if the boundary must be estimated
  long shell_budget = 100000;
};

// outward normal of the boundary graph u(t) from a one-sided slope u'
inline std::array<double, 2> normal_from_slope(double uprime) {
  std::array<double, 2> n{1.0 - uprime, 1.0 + uprime};
  double nn = std::hypot(n[0], n[1]);
  return {n[0] / nn, n[1] / nn};
}

class Solver {
 public:
  Solver(TwoSpeciesWeight w, SolveOptions opt = {})
      : w_(std::move(w)), opt_(opt), ev_(w_) {}

  const TwoSpeciesWeight& weight() const { return w_; }
  const SolveOptions& options() const { return opt_; }
  gc::Evaluator& evaluator() { return ev_; }

  // boundary graph, computed on demand for weights without a closed form
  const std::function<double(double)>& boundary() {
    if (!boundary_fn_) {
      if (w_.has_closed_boundary()) {
        boundary_fn_ = w_.closed_form_boundary;
      } else {
        std::vector<double> grid;
        long R = opt_.boundary_grid_radius;
        for (long i = -R; i <= R; ++i) grid.push_back(double(i) * 0.5);
        bdry_ = gc::domain_boundary(w_, grid);
        boundary_fn_ = bdry_->boundary_fn;
      }
    }
    return *boundary_fn_;
  }

  EntropySolution solve(const DensityPair& rho) {
    if (!(rho.rho1 > 0) || !(rho.rho2 > 0))
      throw InvalidParam("solve needs strictly positive densities");

    const auto& ub = boundary();
    auto inside_gap = [&](const ChemicalPotential& mu) {
      return ub(mu.tilde1()) - mu.tilde2();  // > 0 strictly inside
    };

    // stage 1: damped Newton in the interior.  Shells are capped: an
    // evaluation that cannot certify a tight tail within the cap means the
    // iterate is effectively on the boundary, where stage 2 takes over.
    ChemicalPotential mu = interior_start(rho);
    gc::EvalOptions eo;
    eo.tol = opt_.series_tol;
    eo.max_shells = std::min<long>(opt_.shell_budget, 1200);
    eo.best_effort = true;

    auto F = [&](const ChemicalPotential& m, const gc::GrandCanonicalState& st) {
      return st.p - rho.rho1 * m.mu1 - rho.rho2 * m.mu2;
    };

    gc::GrandCanonicalState st = ev_.evaluate(mu.fugacity(), eo);
    double Fcur = F(mu, st);
    double Fprev = pos_inf;
    bool to_boundary = false;
    long stalls = 0;
    for (long it = 0; it < opt_.max_newton; ++it) {
      double g1 = st.R[0] - rho.rho1, g2 = st.R[1] - rho.rho2;
      if (std::max(std::abs(g1), std::abs(g2)) <= opt_.grad_tol) {
        return homogeneous_solution(rho, mu, st);
      }
      auto& C = st.covariance;
      double det = C[0][0] * C[1][1] - C[0][1] * C[1][0];
      double dx1, dx2;
      double nrm = std::max({std::abs(C[0][0]), std::abs(C[1][1]),
                             std::abs(C[0][1])});
      if (!(det > 0) || nrm / std::max(det / nrm, 1e-300) > 1e12) {
        dx1 = -g1;  // covariance degenerate near the boundary
        dx2 = -g2;
      } else {
        dx1 = -(C[1][1] * g1 - C[0][1] * g2) / det;
        dx2 = -(C[0][0] * g2 - C[0][1] * g1) / det;
      }
      double lambda = 1.0;
      bool stepped = false;
      for (int back = 0; back < 30; ++back) {
        ChemicalPotential trial(mu.mu1 + lambda * dx1, mu.mu2 + lambda * dx2);
        if (inside_gap(trial) < 1e-10) {
          lambda *= 0.5;
          continue;
        }
        bool certified = true;
        gc::GrandCanonicalState st_try;
        try {
          st_try = ev_.evaluate(trial.fugacity(), eo);
          certified = st_try.trunc_error <= 1e-6;
        } catch (const NoCertificate&) {
          certified = false;
        }
        if (!certified) {  // trial too close to the boundary; shorten
          lambda *= 0.5;
          continue;
        }
        double Ftry = F(trial, st_try);
        if (Ftry <= Fcur + 1e-4 * lambda * (g1 * dx1 + g2 * dx2)) {
          mu = trial;
          st = st_try;
          Fcur = Ftry;
          stepped = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!stepped) {
        if (++stalls >= 2 || inside_gap(mu) < 1e-6) {
          to_boundary = true;
          break;
        }
      } else {
        stalls = 0;
        // a vanishing F step at a large gradient means the iterate is
        // sliding along the boundary toward a constrained minimum
        double gmax = std::max(std::abs(st.R[0] - rho.rho1),
                               std::abs(st.R[1] - rho.rho2));
        if (Fprev - Fcur < 1e-8 * (1.0 + std::abs(Fcur)) &&
            gmax > 1e3 * opt_.grad_tol) {
          to_boundary = true;
          break;
        }
      }
      if (inside_gap(mu) < 1e-9) {
        to_boundary = true;
        break;
      }
      Fprev = Fcur;
    }
    // Newton either hit the boundary or exhausted its budget while sliding
    // along it; the 1D boundary stage resolves both cases
    (void)to_boundary;
    return boundary_solution(rho, mu.tilde1());
  }

  double entropy(const DensityPair& rho) { return solve(rho).s_value; }

  // subgradient data at a boundary potential
  struct SubgradientCone {
    DensityPair rc;
    std::vector<std::array<double, 2>> normals;
  };

  SubgradientCone subgradient_cone(const ChemicalPotential& mu_c) {
    Fugacity psi = mu_c.fugacity();
    Membership ms = ev_.classify(psi);
    if (ms != Membership::BoundaryInDomain)
      throw NotInDomain("subgradient_cone needs a boundary point of D_mu, got " +
                        zrp::to_string(ms));
    auto stb = boundary_state(mu_c);
    SubgradientCone out;
    out.rc = DensityPair(stb.R[0], stb.R[1]);
    out.normals = normals_at(mu_c.tilde1());
    return out;
  }

 private:
  TwoSpeciesWeight w_;
  SolveOptions opt_;
  gc::Evaluator ev_;
  std::optional<std::function<double(double)>> boundary_fn_;
  std::optional<gc::DomainBoundary> bdry_;

  ChemicalPotential interior_start(const DensityPair& rho) {
    const auto& ub = boundary();
    // walk in from a point below the boundary graph at t = 0
    double u0 = ub(0.0) - 2.0;
    ChemicalPotential mu = mu_from_rotated(0.0, u0);
    // bias the start toward the requested densities when they are small
    double m1 = std::min(mu.mu1, std::log(std::max(rho.rho1, 1e-6)));
    double m2 = std::min(mu.mu2, std::log(std::max(rho.rho2, 1e-6)));
    return ChemicalPotential(m1, m2);
  }

  gc::GrandCanonicalState boundary_state(const ChemicalPotential& mu) {
    gc::EvalOptions eo;
    eo.tol = opt_.boundary_tol;
    eo.max_shells = std::min<long>(opt_.shell_budget, 20000);
    eo.best_effort = true;
    eo.need_second_moments = false;  // covariance degenerates on the boundary
    auto st = ev_.evaluate(mu.fugacity(), eo);
    // the weight's closed forms beat the truncated shell sums where valid
    if (w_.closed_form_log_z) {
      if (auto lz = w_.closed_form_log_z(mu.fugacity())) {
        st.log_z = st.p = *lz;
        st.z = std::exp(*lz);
      }
    }
    if (w_.closed_form_density) {
      if (auto R = w_.closed_form_density(mu.fugacity())) st.R = *R;
    }
    return st;
  }

  // pressure along the boundary for the 1D search; +inf where z diverges
  double boundary_pressure(double t) {
    const auto& ub = boundary();
    ChemicalPotential mu = mu_from_rotated(t, ub(t));
    if (w_.has_closed_z()) {
      auto v = w_.closed_form_log_z(mu.fugacity());
      if (v) return *v;
    }
    gc::EvalOptions eo;
    eo.tol = 1e-8;
    eo.max_shells = 20000;
    eo.need_second_moments = false;
    eo.best_effort = true;
    try {
      auto st = ev_.evaluate(mu.fugacity(), eo);
      return st.p;
    } catch (const Diverged&) {
      return pos_inf;
    } catch (const NoCertificate&) {
      return pos_inf;
    }
  }

  std::vector<std::array<double, 2>> normals_at(double t) {
    const auto& ub = boundary();
    double h = 1e-6 * std::max(1.0, std::abs(t));
    double sl = (ub(t) - ub(t - h)) / h;
    double sr = (ub(t + h) - ub(t)) / h;
    std::vector<std::array<double, 2>> out;
    if (sl - sr > opt_.corner_tol) {
      out.push_back(normal_from_slope(sl));
      out.push_back(normal_from_slope(sr));
    } else {
      out.push_back(normal_from_slope(0.5 * (sl + sr)));
    }
    return out;
  }

  EntropySolution homogeneous_solution(const DensityPair& rho,
                                       const ChemicalPotential& mu,
                                       const gc::GrandCanonicalState& st) {
    EntropySolution sol;
    sol.mbar = mu;
    sol.state = st;
    sol.rc = DensityPair(st.R[0], st.R[1]);
    sol.s_value = rho.rho1 * mu.mu1 + rho.rho2 * mu.mu2 - st.p;
    sol.phase = Phase::Homogeneous;
    sol.on_boundary = false;
    return sol;
  }

  EntropySolution boundary_solution(const DensityPair& rho, double t_hint) {
    const auto& ub = boundary();
    auto phi = [&](double t) {
      double pb = boundary_pressure(t);
      if (pb == pos_inf) return pos_inf;
      ChemicalPotential mu = mu_from_rotated(t, ub(t));
      return pb - rho.rho1 * mu.mu1 - rho.rho2 * mu.mu2;
    };

    // bracket a minimum around the hint, expanding outward
    double a = t_hint - 1.0, m = t_hint, b = t_hint + 1.0;
    double fa = phi(a), fm = phi(m), fb = phi(b);
    for (int it = 0; it < 200; ++it) {
      if (fm <= fa && fm <= fb) break;
      if (fa < fm) {
        b = m; fb = fm;
        m = a; fm = fa;
        a = a - (b - a) * 1.6;
        fa = phi(a);
      } else {
        a = m; fa = fm;
        m = b; fm = fb;
        b = b + (b - a) * 1.6;
        fb = phi(b);
      }
      if (it == 199)
        throw SolverStall("could not bracket the boundary minimum");
    }

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = phi(x1), f2 = phi(x2);
    while (b - a > opt_.t_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
      if (f1 <= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a);
        f1 = phi(x1);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a);
        f2 = phi(x2);
      }
    }
    double tstar = 0.5 * (a + b);
    ChemicalPotential mbar = mu_from_rotated(tstar, ub(tstar));
    auto st = boundary_state(mbar);

    EntropySolution sol;
    sol.mbar = mbar;
    sol.state = st;
    sol.on_boundary = true;
    sol.rc = DensityPair(st.R[0], st.R[1]);
    sol.s_value = rho.rho1 * mbar.mu1 + rho.rho2 * mbar.mu2 - st.p;
    sol.normal_cone = normals_at(tstar);
    bool c1 = rho.rho1 - sol.rc.rho1 > opt_.eps_phase * std::max(1.0, rho.rho1);
    bool c2 = rho.rho2 - sol.rc.rho2 > opt_.eps_phase * std::max(1.0, rho.rho2);
    sol.phase = c1 && c2   ? Phase::CondensedBoth
                : c1       ? Phase::Condensed1
                : c2       ? Phase::Condensed2
                           : Phase::Homogeneous;
    return sol;
  }
};

inline EntropySolution solve(const TwoSpeciesWeight& w, const DensityPair& rho,
                             const SolveOptions& opt = {}) {
  return Solver(w, opt).solve(rho);
}

inline double entropy(const TwoSpeciesWeight& w, const DensityPair& rho,
                      const SolveOptions& opt = {}) {
  return Solver(w, opt).entropy(rho);
}

inline Solver::SubgradientCone subgradient_cone(const TwoSpeciesWeight& w,
                                                const ChemicalPotential& mu_c,
                                                const SolveOptions& opt = {}) {
  return Solver(w, opt).subgradient_cone(mu_c);
}

// ---------------------------------------------------------------------------
// Phase diagram scan
// ---------------------------------------------------------------------------

struct PhaseDiagramGrid {
  std::array<double, 2> box_max;
  long resolution = 0;
  std::vector<Phase> labels;                 // row-major, j * res + i
  std::vector<EntropySolution> cells;        // same layout
  std::vector<std::array<double, 2>> region_edges;  // midpoints between
                                                    // differently labeled cells

  DensityPair rho_at(long i, long j) const {
    double dx = box_max[0] / double(resolution);
    double dy = box_max[1] / double(resolution);
    return DensityPair((double(i) + 0.5) * dx, (double(j) + 0.5) * dy);
  }
  Phase label(long i, long j) const {
    return labels[std::size_t(j * resolution + i)];
  }
  const EntropySolution& cell(long i, long j) const {
    return cells[std::size_t(j * resolution + i)];
  }
};

inline PhaseDiagramGrid phase_diagram(const TwoSpeciesWeight& w,
                                      std::array<double, 2> box_max,
                                      long resolution, SolveOptions opt = {},
                                      long threads = 1) {
  if (resolution < 2) throw InvalidParam("resolution must be >= 2");
  if (!(box_max[0] > 0) || !(box_max[1] > 0))
    throw InvalidParam("box must lie in (0,inf)^2");
  PhaseDiagramGrid grid;
  grid.box_max = box_max;
  grid.resolution = resolution;
  grid.labels.resize(std::size_t(resolution * resolution), Phase::Unresolved);
  grid.cells.resize(std::size_t(resolution * resolution));

  // condensed cells tolerate a looser boundary series: labels and the
  // background density only need a few significant digits
  opt.boundary_tol = std::max(opt.boundary_tol, 1e-5);

  // cells are independent; workers get their own solver (and caches)
  auto work = [&](long j0, long j1) {
    Solver solver(w, opt);
    for (long j = j0; j < j1; ++j)
      for (long i = 0; i < resolution; ++i) {
        DensityPair rho = grid.rho_at(i, j);
        std::size_t idx = std::size_t(j * resolution + i);
        try {
          grid.cells[idx] = solver.solve(rho);
          grid.labels[idx] = grid.cells[idx].phase;
        } catch (const Error&) {
          grid.labels[idx] = Phase::Unresolved;
        }
      }
  };
  threads = std::max<long>(1, std::min<long>(threads, resolution));
  if (threads == 1) {
    work(0, resolution);
  } else {
    std::vector<std::thread> pool;
    long chunk = (resolution + threads - 1) / threads;
    for (long t = 0; t < threads; ++t)
      pool.emplace_back(work, t * chunk,
                        std::min(resolution, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  // region boundaries: midpoints between differently labeled neighbours
  double dx = box_max[0] / double(resolution);
  double dy = box_max[1] / double(resolution);
  for (long j = 0; j < resolution; ++j)
    for (long i = 0; i < resolution; ++i) {
      if (i + 1 < resolution && grid.label(i, j) != grid.label(i + 1, j))
        grid.region_edges.push_back(
            {(double(i) + 1.0) * dx, (double(j) + 0.5) * dy});
      if (j + 1 < resolution && grid.label(i, j) != grid.label(i, j + 1))
        grid.region_edges.push_back(
            {(double(i) + 0.5) * dx, (double(j) + 1.0) * dy});
    }
  return grid;
}

}  // namespace zrp::legendre
