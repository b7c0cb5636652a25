#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zrp/enumeration.hpp"
#include "zrp/weights.hpp"

using namespace zrp;
using Catch::Approx;

TEST_CASE("evans-hanney point values and rates") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  CHECK(w.eval(0, 0) == Approx(1.0));
  CHECK(w.eval(1, 0) == Approx(0.2));  // 1/(1+b)

  auto g = rates_from_weight(w);
  // g1 = (1 + b/k1) ((k1(k1+2))/(k1+1)^2)^{k2}
  CHECK(g.g1(1, 0) == Approx(5.0));
  CHECK(g.g2(0, 1) == Approx(2.0));  // 1 + 1/(k1+1)
  CHECK(g.g1(0, 0) == 0.0);
  CHECK(g.g2(0, 0) == 0.0);
  CHECK(g.g1(3, 2) == Approx((1.0 + 4.0 / 3.0) * std::pow(3.0 * 5.0 / 16.0, 2)));
}

TEST_CASE("slowed-free and symmetrized point values") {
  auto w = builtin("slowed-free", {{"b", 4.0}});
  // (2!/((1+b)(2+b))) * 3^3/3! = (2/30) * 4.5
  CHECK(w.eval(2, 3) == Approx(0.3).epsilon(1e-12));
  auto g = rates_from_weight(w);
  CHECK(g.g2(3, 2) == Approx(2.0 / 4.0));  // k2/(1+k1)
  CHECK(g.g1(2, 1) == Approx((2.0 / 3.0) * (1.0 + 4.0 / 2.0)));

  auto s = builtin("symmetrized", {{"b", 4.0}});
  CHECK(s.eval(0, 0) == Approx(1.0));
  CHECK(s.eval(1, 1) == Approx(s.eval(1, 1)));
  CHECK(s.eval(3, 1) == Approx(s.eval(1, 3)));
  CHECK(s.eval(5, 2) == Approx(s.eval(2, 5)));
}

TEST_CASE("builtin rejects bad input") {
  CHECK_THROWS_AS(builtin("no-such-weight", {{"b", 4.0}}), UnknownName);
  CHECK_THROWS_AS(builtin("evans-hanney", {{"b", -1.0}}), InvalidParam);
  CHECK_THROWS_AS(builtin("evans-hanney"), InvalidParam);
}

TEST_CASE("log_eval matches eval and respects the exponential bound") {
  for (const char* name : {"evans-hanney", "slowed-free", "symmetrized",
                           "single-species-b", "factorized"}) {
    auto w = builtin(name, {{"b", 4.0}});
    double lxi = std::log(w.exp_bound_xi);
    for (long k1 = 0; k1 <= 30; ++k1)
      for (long k2 = 0; k2 <= 30; ++k2) {
        double le = w.log_eval(k1, k2);
        CHECK(le <= std::hypot(double(k1), double(k2)) * lxi + 1e-12);
        double e = w.eval(k1, k2);
        if (e > 0 && e < 1e300)
          CHECK(std::exp(le) == Approx(e).epsilon(1e-12));
      }
  }
}

TEST_CASE("rate round trip recovers the weight") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  auto g = rates_from_weight(w);
  auto w2 = weight_from_rates(g, 20);
  for (long k1 = 0; k1 <= 20; ++k1)
    for (long k2 = 0; k2 <= 20; ++k2) {
      // gauge w(0,0) = 1; evans-hanney already is
      CHECK(w2.log_eval(k1, k2) ==
            Approx(w.log_eval(k1, k2)).margin(1e-10));
    }
}

TEST_CASE("single-species rate embedding") {
  double b = 3.0;
  JumpRates g;
  g.g1 = [b](long k1, long) { return k1 > 0 ? 1.0 + b / double(k1) : 0.0; };
  g.g2 = [](long, long k2) { return k2 > 0 ? 1.0 : 0.0; };
  auto w = weight_from_rates(g, 12);
  for (long k = 0; k <= 12; ++k)
    CHECK(w.log_eval(k, 0) ==
          Approx(log_factorial(double(k)) - log_pochhammer(1.0 + b, double(k)))
              .margin(1e-12));
}

TEST_CASE("inconsistent rates fail the cocycle check") {
  JumpRates g;
  g.g1 = [](long k1, long) { return k1 > 0 ? 2.0 : 0.0; };
  g.g2 = [](long k1, long k2) { return k2 > 0 ? double(k1 + 1) : 0.0; };
  CHECK_THROWS_AS(weight_from_rates(g, 6), CocycleViolation);
}

TEST_CASE("pochhammer series closed values") {
  PochSeries s(4.0);
  CHECK(*s.value(1.0) == Approx(4.0 / 3.0));
  CHECK(*s.moment(1.0) / *s.value(1.0) == Approx(0.5));  // 1/(b-2)
  // direct partial sum reference with its own small tail
  double ref = 0;
  for (long k = 0; k <= 60; ++k)
    ref += std::exp(log_factorial(double(k)) -
                    log_pochhammer(5.0, double(k)) + double(k) * std::log(0.5));
  CHECK(*s.value(0.5) == Approx(ref).epsilon(1e-12));
  PochSeries s2(1.5);
  CHECK_FALSE(s2.moment(1.0));  // first moment diverges for b <= 2
}

TEST_CASE("pochhammer tail asymptotics") {
  // log w(k,0) + b log k converges for the coupled-species weight; the
  // correction decays like 1/k
  double b = 4.0;
  auto w = builtin("evans-hanney", {{"b", b}});
  double d1 = std::abs(w.log_eval(1000, 0) + b * std::log(1000.0) -
                       (w.log_eval(100, 0) + b * std::log(100.0)));
  double cur = w.log_eval(10000, 0) + b * std::log(10000.0);
  double d2 = std::abs(cur - (w.log_eval(1000, 0) + b * std::log(1000.0)));
  CHECK(d2 < d1);
  CHECK(cur == Approx(std::lgamma(1.0 + b)).margin(2e-3));
}

TEST_CASE("closed-form z at simple fugacities") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  auto lz = w.closed_form_log_z(Fugacity(1.0, 1.0));
  REQUIRE(lz);
  CHECK(*lz == Approx(std::log(10.0 / 3.0)).epsilon(1e-10));
  auto R = w.closed_form_density(Fugacity(1.0, 1.0));
  REQUIRE(R);
  CHECK((*R)[0] == Approx(1.4).epsilon(1e-8));
  CHECK((*R)[1] == Approx(2.4).epsilon(1e-8));

  auto sf = builtin("slowed-free", {{"b", 4.0}});
  auto R2 = sf.closed_form_density(Fugacity(std::exp(-1.0), 1.0));
  REQUIRE(R2);
  CHECK((*R2)[0] == Approx(0.5).epsilon(1e-10));
  CHECK((*R2)[1] == Approx(1.5).epsilon(1e-10));
}

TEST_CASE("brute force Z guards its budget") {
  auto w = builtin("evans-hanney", {{"b", 4.0}});
  CHECK_THROWS_AS(brute_force_log_Z(w, 6, {1, 1}), BudgetExceeded);
  CHECK(brute_force_log_Z(w, 1, {2, 1}) == Approx(w.log_eval(2, 1)));
}
