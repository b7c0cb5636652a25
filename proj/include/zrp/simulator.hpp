#pragma once

// Continuous-time Monte Carlo of the two-species zero-range process on a
// 1D ring.  Event selection is the direct method over per-site per-species
// rates kept in a binary sum tree; a jump touches two sites, so updates are
// O(1) leaves and O(log L) tree work.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/rng.hpp"
#include "zrp/stats.hpp"
#include "zrp/weights.hpp"

namespace zrp::sim {

// displacement distribution on the ring
struct JumpDist {
  std::vector<std::pair<long, double>> steps;

  static JumpDist symmetric() { return {{{+1, 0.5}, {-1, 0.5}}}; }
  static JumpDist totally_asymmetric() { return {{{+1, 1.0}}}; }

  // "sym" | "asym" | "asym:p" (p to the right, 1-p to the left)
  static JumpDist parse(const std::string& spec) {
    if (spec == "sym") return symmetric();
    if (spec == "asym") return totally_asymmetric();
    if (spec.rfind("asym:", 0) == 0) {
      double p = std::stod(spec.substr(5));
      if (p < 0 || p > 1) throw ConfigError("asym:p needs p in [0,1]");
      JumpDist d;
      if (p > 0) d.steps.push_back({+1, p});
      if (p < 1) d.steps.push_back({-1, 1 - p});
      return d;
    }
    throw ConfigError("jump spec must be sym, asym or asym:p");
  }

  void validate() const {
    double tot = 0;
    for (auto& [d, p] : steps) {
      if (p < 0) throw ConfigError("jump probabilities must be nonnegative");
      if (d == 0) throw ConfigError("zero displacement is not a jump");
      tot += p;
    }
    if (std::abs(tot - 1.0) > 1e-12)
      throw ConfigError("jump probabilities must sum to 1");
  }
};

struct SimParams {
  long L = 1;
  std::array<long, 2> N{0, 0};
  JumpDist p1 = JumpDist::symmetric();
  JumpDist p2 = JumpDist::symmetric();
  std::uint64_t seed = 1;
  long events = 1'000'000;
  double burn_in = 0.2;          // fraction of events before measuring
  bool track_configs = false;    // empirical configuration distribution
                                 // (small systems only)
};

struct Configuration {
  std::vector<std::array<long, 2>> occ;
  std::array<long, 2> totals{0, 0};

  void recount() {
    totals = {0, 0};
    for (auto& k : occ) {
      totals[0] += k[0];
      totals[1] += k[1];
    }
  }
};

// flat binary sum tree over 2L rates
class RateTree {
 public:
  explicit RateTree(long leaves) : n_(1) {
    while (n_ < leaves) n_ *= 2;
    tree_.assign(std::size_t(2 * n_), 0.0);
  }
  void set(long i, double v) {
    std::size_t p = std::size_t(n_ + i);
    tree_[p] = v;
    for (p /= 2; p >= 1; p /= 2)
      tree_[p] = tree_[2 * p] + tree_[2 * p + 1];
  }
  double total() const { return tree_[1]; }
  long sample(double u) const {  // u in (0, total)
    std::size_t p = 1;
    while (p < std::size_t(n_)) {
      if (u <= tree_[2 * p] || tree_[2 * p + 1] == 0.0) {
        p = 2 * p;
      } else {
        u -= tree_[2 * p];
        p = 2 * p + 1;
      }
    }
    return long(p) - n_;
  }

 private:
  long n_;
  std::vector<double> tree_;
};

struct TrajectorySummary {
  double time = 0;                   // simulated time after burn-in
  long events = 0;
  std::array<double, 2> mean_max_frac{0, 0};    // <M_L^i / L>
  std::array<double, 2> mean_density{0, 0};     // sanity: N_i / L
  std::array<long, 2> final_max{0, 0};
  std::array<long, 2> final_argmax{0, 0};
  double colocation_frac = 0;        // time fraction argmax1 == argmax2
  std::array<std::vector<double>, 2> argmax_time;  // per-site occupancy of the
                                                   // condensate location
  std::map<std::vector<long>, double> config_time;
  bool conserved = true;

  struct TimePoint {
    double t;
    long max1, max2, argmax1, argmax2;
  };
  std::vector<TimePoint> series;
};

namespace detail {

inline std::vector<std::array<long, 2>> random_initial(long L,
                                                       std::array<long, 2> N,
                                                       CounterRng& rng) {
  std::vector<std::array<long, 2>> occ(std::size_t(L), {0, 0});
  for (int sp = 0; sp < 2; ++sp)
    for (long n = 0; n < N[std::size_t(sp)]; ++n)
      occ[std::size_t(rng.uniform_long(L))][std::size_t(sp)]++;
  return occ;
}

struct MaxTracker {
  long max = 0, argmax = 0;

  void rebuild(const std::vector<std::array<long, 2>>& occ, int sp) {
    max = -1;
    for (long x = 0; x < long(occ.size()); ++x)
      if (occ[std::size_t(x)][std::size_t(sp)] > max) {
        max = occ[std::size_t(x)][std::size_t(sp)];
        argmax = x;
      }
  }
  void site_changed(const std::vector<std::array<long, 2>>& occ, int sp,
                    long x) {
    long v = occ[std::size_t(x)][std::size_t(sp)];
    if (v > max || (x == argmax && v < max))
      { if (v > max) { max = v; argmax = x; } else rebuild(occ, sp); }
  }
};

}  // namespace detail

struct RunOptions {
  long series_thin = 0;  // record a time-series point every k events (0 = off)
  const Configuration* initial = nullptr;
  // called before each jump is applied: pre-jump configuration, source site,
  // species, target site, holding time
  std::function<void(const Configuration&, long, int, long, double)> on_event;
};

inline TrajectorySummary run(const JumpRates& rates, const SimParams& params,
                             const RunOptions& ropt = {}) {
  const long L = params.L;
  if (L < 1) throw InvalidParam("L must be >= 1");
  params.p1.validate();
  params.p2.validate();
  CounterRng rng = CounterRng::seeded(params.seed);

  Configuration cfg;
  if (ropt.initial) {
    cfg = *ropt.initial;
    if (long(cfg.occ.size()) != L) throw InvalidParam("initial size mismatch");
    cfg.recount();
  } else {
    cfg.occ = detail::random_initial(L, params.N, rng);
    cfg.recount();
  }
  const std::array<long, 2> N0 = cfg.totals;

  // occupations never exceed the conserved totals, so the two rate functions
  // restricted to [0,N0] can be tabulated once
  const long m1 = N0[0] + 1, m2 = N0[1] + 1;
  std::vector<double> gtab[2];
  gtab[0].resize(std::size_t(m1 * m2));
  gtab[1].resize(std::size_t(m1 * m2));
  for (long a = 0; a < m1; ++a)
    for (long b = 0; b < m2; ++b) {
      gtab[0][std::size_t(a * m2 + b)] = rates.g1(a, b);
      gtab[1][std::size_t(a * m2 + b)] = rates.g2(a, b);
      if ((a > 0 && !(gtab[0][std::size_t(a * m2 + b)] > 0)) ||
          (b > 0 && !(gtab[1][std::size_t(a * m2 + b)] > 0)))
        throw ZeroRate("g_i vanishes at an occupied state");
      if ((a == 0 && gtab[0][std::size_t(a * m2 + b)] != 0) ||
          (b == 0 && gtab[1][std::size_t(a * m2 + b)] != 0))
        throw InvalidParam("g_i(k) must be 0 when k_i = 0");
    }

  auto rate_of = [&](long x, int sp) {
    auto& k = cfg.occ[std::size_t(x)];
    return gtab[std::size_t(sp)][std::size_t(k[0] * m2 + k[1])];
  };

  RateTree tree(2 * L);
  for (long x = 0; x < L; ++x)
    for (int sp = 0; sp < 2; ++sp) tree.set(2 * x + sp, rate_of(x, sp));

  // cumulative displacement tables
  auto cdf = [](const JumpDist& d) {
    std::vector<std::pair<long, double>> c;
    double acc = 0;
    for (auto& [dx, p] : d.steps) {
      acc += p;
      c.push_back({dx, acc});
    }
    return c;
  };
  std::array<std::vector<std::pair<long, double>>, 2> disp{cdf(params.p1),
                                                           cdf(params.p2)};

  detail::MaxTracker mx[2];
  mx[0].rebuild(cfg.occ, 0);
  mx[1].rebuild(cfg.occ, 1);

  TrajectorySummary out;
  out.argmax_time[0].assign(std::size_t(L), 0.0);
  out.argmax_time[1].assign(std::size_t(L), 0.0);
  const long burn = long(params.burn_in * double(params.events));
  double wsum = 0;

  std::vector<long> key;
  if (params.track_configs) key.reserve(std::size_t(2 * L));

  for (long ev = 0; ev < params.events; ++ev) {
    double total = tree.total();
    if (!(total > 0)) {
      if (N0[0] + N0[1] == 0) break;  // empty system, nothing can move
      throw ZeroRate("all rates vanished in a nonempty configuration");
    }
    double dt = rng.exponential(total);

    if (ev >= burn) {
      // the current configuration persists for dt
      wsum += dt;
      out.time += dt;
      out.mean_max_frac[0] += dt * double(mx[0].max) / double(L);
      out.mean_max_frac[1] += dt * double(mx[1].max) / double(L);
      out.argmax_time[0][std::size_t(mx[0].argmax)] += dt;
      out.argmax_time[1][std::size_t(mx[1].argmax)] += dt;
      if (mx[0].argmax == mx[1].argmax) out.colocation_frac += dt;
      if (params.track_configs) {
        key.clear();
        for (auto& k : cfg.occ) {
          key.push_back(k[0]);
          key.push_back(k[1]);
        }
        out.config_time[key] += dt;
      }
      if (ropt.series_thin > 0 && ev % ropt.series_thin == 0)
        out.series.push_back({out.time, mx[0].max, mx[1].max, mx[0].argmax,
                              mx[1].argmax});
    }

    long leaf = tree.sample(rng.uniform() * total);
    // float roundoff at subtree edges can land on an idle leaf
    while (!(rate_of(leaf / 2, int(leaf % 2)) > 0))
      leaf = tree.sample(rng.uniform() * total);
    long x = leaf / 2;
    int sp = int(leaf % 2);
    // displacement
    auto& c = disp[std::size_t(sp)];
    double u = rng.uniform() * c.back().second;
    long dx = c.back().first;
    for (auto& [d, acc] : c)
      if (u <= acc) {
        dx = d;
        break;
      }
    long y = ((x + dx) % L + L) % L;

    if (ropt.on_event) ropt.on_event(cfg, x, sp, y, dt);
    cfg.occ[std::size_t(x)][std::size_t(sp)]--;
    cfg.occ[std::size_t(y)][std::size_t(sp)]++;
    for (int s2 = 0; s2 < 2; ++s2) {
      tree.set(2 * x + s2, rate_of(x, s2));
      tree.set(2 * y + s2, rate_of(y, s2));
    }
    mx[std::size_t(sp)].site_changed(cfg.occ, sp, x);
    mx[std::size_t(sp)].site_changed(cfg.occ, sp, y);
    out.events++;
  }

  if (wsum > 0) {
    out.mean_max_frac[0] /= wsum;
    out.mean_max_frac[1] /= wsum;
    out.colocation_frac /= wsum;
    for (int sp = 0; sp < 2; ++sp)
      for (auto& v : out.argmax_time[std::size_t(sp)]) v /= wsum;
    for (auto& [k, v] : out.config_time) v /= wsum;
  }
  out.mean_density = {double(cfg.totals[0]) / double(L),
                      double(cfg.totals[1]) / double(L)};
  out.final_max = {mx[0].max, mx[1].max};
  out.final_argmax = {mx[0].argmax, mx[1].argmax};
  cfg.recount();
  out.conserved = (cfg.totals == N0);
  return out;
}

inline TrajectorySummary run(const TwoSpeciesWeight& w, const SimParams& params,
                             const RunOptions& ropt = {}) {
  return run(rates_from_weight(w), params, ropt);
}

// ---------------------------------------------------------------------------
// Replica statistics of the maximum occupation (law of large numbers check)
// ---------------------------------------------------------------------------

struct MaxOccupationStats {
  MeanVar max_frac;                 // across replicas, time-averaged M/L
  std::vector<long> location_counts;  // condensate location, binned over sites
  double location_chi2_p = 0;
  std::vector<double> per_replica;
};

inline MaxOccupationStats max_occupation_stats(const JumpRates& rates,
                                               const SimParams& params,
                                               int species, long replicas,
                                               long bins = 10) {
  if (species < 0 || species > 1) throw InvalidParam("species must be 0 or 1");
  if (bins < 2 || params.L % bins != 0)
    throw InvalidParam("bins must divide L");
  MaxOccupationStats out;
  out.location_counts.assign(std::size_t(bins), 0);
  long per = params.L / bins;
  for (long rep = 0; rep < replicas; ++rep) {
    SimParams p = params;
    p.seed = CounterRng::seeded(params.seed, std::uint64_t(rep) + 1).next();
    auto t = run(rates, p);
    out.per_replica.push_back(t.mean_max_frac[std::size_t(species)]);
    // time-majority condensate location for this replica
    long best = 0;
    for (long x = 1; x < params.L; ++x)
      if (t.argmax_time[std::size_t(species)][std::size_t(x)] >
          t.argmax_time[std::size_t(species)][std::size_t(best)])
        best = x;
    out.location_counts[std::size_t(best / per)]++;
  }
  out.max_frac = mean_var(out.per_replica);
  out.location_chi2_p = chi_square_uniform_pvalue(out.location_counts);
  return out;
}

// Co-location report for two condensing species; argmax coincidence is an
// observational output, no threshold is asserted.
struct CondensateReport {
  double colocation_frac = 0;
  std::array<double, 2> mean_max_frac{0, 0};
  std::array<std::vector<double>, 2> argmax_time;
};

inline CondensateReport two_species_condensate_report(const JumpRates& rates,
                                                      const SimParams& params) {
  auto t = run(rates, params);
  CondensateReport r;
  r.colocation_frac = t.colocation_frac;
  r.mean_max_frac = t.mean_max_frac;
  r.argmax_time = t.argmax_time;
  return r;
}

}  // namespace zrp::sim
