#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "zrp/enumeration.hpp"
#include "zrp/simulator.hpp"
#include "zrp/weights.hpp"

using namespace zrp;
using Catch::Approx;

namespace {

// total-variation distance between an empirical configuration-time
// distribution (flattened keys) and the exact canonical measure
double tv_against_exact(const std::map<std::vector<long>, double>& emp,
                        const std::map<Occupations, double>& exact, long L) {
  double tv = 0;
  for (auto& [eta, p] : exact) {
    std::vector<long> key;
    for (long x = 0; x < L; ++x) {
      key.push_back(eta[std::size_t(x)][0]);
      key.push_back(eta[std::size_t(x)][1]);
    }
    auto it = emp.find(key);
    double q = it == emp.end() ? 0.0 : it->second;
    tv += std::abs(p - q);
  }
  return 0.5 * tv;
}

}  // namespace

TEST_CASE("conservation and the single-site ring") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  sim::SimParams p;
  p.L = 1;
  p.N = {3, 2};
  p.events = 20000;
  p.seed = 5;
  auto t = sim::run(w, p);
  CHECK(t.conserved);
  CHECK(t.events == 20000);
  CHECK(t.mean_density[0] == Approx(3.0));
  CHECK(t.mean_density[1] == Approx(2.0));
  CHECK(t.mean_max_frac[0] == Approx(3.0));  // M/L with L = 1
}

TEST_CASE("identical seeds give identical trajectories") {
  auto w = builtin("slowed-free", {{"b", 4.0}});
  sim::SimParams p;
  p.L = 6;
  p.N = {5, 4};
  p.events = 30000;
  p.seed = 42;
  sim::RunOptions ro;
  ro.series_thin = 100;
  auto a = sim::run(w, p, ro);
  auto b = sim::run(w, p, ro);
  CHECK(a.time == b.time);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].t == b.series[i].t);
    CHECK(a.series[i].max1 == b.series[i].max1);
    CHECK(a.series[i].argmax1 == b.series[i].argmax1);
  }
}

TEST_CASE("empty system cannot move") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  sim::SimParams p;
  p.L = 4;
  p.N = {0, 0};
  p.events = 100;
  auto t = sim::run(w, p);
  CHECK(t.events == 0);
  CHECK(t.conserved);
}

TEST_CASE("stationary distribution matches the canonical measure") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  long L = 3;
  std::array<long, 2> N{2, 2};
  auto exact = enumerate_canonical(w, L, N);

  sim::SimParams p;
  p.L = L;
  p.N = N;
  p.events = 300000;
  p.seed = 9;
  p.track_configs = true;
  auto t = sim::run(w, p);
  CHECK(tv_against_exact(t.config_time, exact, L) < 0.05);

  // a different initial condition reaches the same stationary distribution
  sim::Configuration init;
  init.occ.assign(std::size_t(L), {0, 0});
  init.occ[0] = {2, 2};  // all particles piled on one site
  sim::RunOptions ro;
  ro.initial = &init;
  p.seed = 10;
  auto t2 = sim::run(w, p, ro);
  CHECK(tv_against_exact(t2.config_time, exact, L) < 0.05);
}

TEST_CASE("asymmetric jumps leave the stationary measure unchanged") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  long L = 3;
  std::array<long, 2> N{2, 2};
  auto exact = enumerate_canonical(w, L, N);
  sim::SimParams p;
  p.L = L;
  p.N = N;
  p.p1 = sim::JumpDist::totally_asymmetric();
  p.p2 = sim::JumpDist::totally_asymmetric();
  p.events = 300000;
  p.seed = 13;
  p.track_configs = true;
  auto t = sim::run(w, p);
  CHECK(tv_against_exact(t.config_time, exact, L) < 0.05);
}

TEST_CASE("flux ratios satisfy detailed balance for symmetric jumps") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  long L = 2;
  std::array<long, 2> N{2, 0};
  // configurations a = ((2,0),(0,0)), b = ((1,0),(1,0)); the species-1 flux
  // a->b runs at g1(2,0), b->a at g1(1,0) from either site
  sim::SimParams p;
  p.L = L;
  p.N = N;
  p.events = 400000;
  p.seed = 3;
  double time_a = 0, time_b = 0;
  long flux_ab = 0, flux_ba = 0;
  sim::RunOptions ro;
  ro.on_event = [&](const sim::Configuration& cfg, long, int, long, double dt) {
    bool in_a = cfg.occ[0][0] == 2 || cfg.occ[1][0] == 2;
    if (in_a) {
      time_a += dt;
      flux_ab++;  // only species-1 moves exist; any event leaves a
    } else {
      time_b += dt;
      flux_ba++;
    }
  };
  auto t = sim::run(w, p, ro);
  CHECK(t.conserved);
  auto g = rates_from_weight(w);
  // empirical exit rates against the exact ones (two sites can fire in b)
  double rate_a = double(flux_ab) / time_a;
  double rate_b = double(flux_ba) / time_b;
  CHECK(rate_a == Approx(g.g1(2, 0)).epsilon(0.05));
  CHECK(rate_b == Approx(2.0 * g.g1(1, 0)).epsilon(0.05));
  // occupation-time ratio pins the stationary weight ratio:
  // pi(a) / pi(b) = 2 w(2,0) w(0,0) / w(1,0)^2
  double expect = 2.0 * std::exp(w.log_eval(2, 0) + w.log_eval(0, 0) -
                                 2.0 * w.log_eval(1, 0));
  CHECK(time_a / time_b == Approx(expect).epsilon(0.1));
}

TEST_CASE("max occupation statistics in the condensed phase") {
  auto w = builtin("single-species-b", {{"b", 5.0}});
  auto rates = rates_from_weight(w);
  sim::SimParams p;
  p.L = 20;
  p.N = {20, 0};
  p.events = 400000;
  p.seed = 17;
  auto stats = sim::max_occupation_stats(rates, p, 0, 8, 4);
  // rho = 1, rho_c = 1/3: the condensate fraction approaches 2/3
  CHECK(stats.max_frac.mean > 0.35);
  CHECK(stats.max_frac.mean < 0.9);
  CHECK(stats.per_replica.size() == 8);
  long total = 0;
  for (long c : stats.location_counts) total += c;
  CHECK(total == 8);
  CHECK(stats.location_chi2_p >= 0.0);
  CHECK(stats.location_chi2_p <= 1.0);
}

TEST_CASE("homogeneous phase has no macroscopic maximum") {
  auto w = builtin("single-species-b", {{"b", 5.0}});
  sim::SimParams p;
  p.L = 40;
  p.N = {8, 0};  // rho = 0.2 < rho_c
  p.events = 200000;
  p.seed = 23;
  auto t = sim::run(w, p);
  CHECK(t.mean_max_frac[0] < 0.15);
}

TEST_CASE("condensate co-location report") {
  auto f = builtin("factorized", {{"b1", 5.0}, {"b2", 5.0}});
  sim::SimParams p;
  p.L = 10;
  p.N = {12, 12};
  p.events = 300000;
  p.seed = 29;
  auto rep = sim::two_species_condensate_report(rates_from_weight(f), p);
  // independent species: locations coincide rarely (roughly 1/L)
  CHECK(rep.colocation_frac < 0.5);

  auto sf = builtin("slowed-free", {{"b", 4.0}});
  auto rep2 = sim::two_species_condensate_report(rates_from_weight(sf), p);
  // coupled species attract; observational, only report coherence
  CHECK(rep2.colocation_frac >= 0.0);
  CHECK(rep2.colocation_frac <= 1.0);
  CHECK(rep2.colocation_frac > rep.colocation_frac);
}

TEST_CASE("zero-rate and bad parameter guards") {
  JumpRates g;
  g.g1 = [](long k1, long) { return k1 > 0 ? 0.0 : 0.0; };  // frozen
  g.g2 = [](long, long k2) { return k2 > 0 ? 1.0 : 0.0; };
  sim::SimParams p;
  p.L = 2;
  p.N = {2, 0};
  p.events = 10;
  CHECK_THROWS_AS(sim::run(g, p), ZeroRate);
  CHECK_THROWS_AS(sim::JumpDist::parse("bogus"), ConfigError);
}
