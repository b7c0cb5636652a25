#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "zrp/expr.hpp"
#include "zrp/weight_file.hpp"
#include "zrp/weights.hpp"

using namespace zrp;
using Catch::Approx;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = std::string("/tmp/zrp_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("expression grammar basics") {
  expr::Expression e("2 + 3*4 ^ 2 - 1");
  CHECK(std::exp(e.log_eval(0, 0)) == Approx(49.0));
  expr::Expression f("(k1 + 1)^k2 / factorial(k2)");
  CHECK(std::exp(f.log_eval(2, 3)) == Approx(27.0 / 6.0));
  expr::Expression g("pochhammer(5, k1)");
  CHECK(std::exp(g.log_eval(3, 0)) == Approx(5.0 * 6.0 * 7.0));
  expr::Expression h("exp(log(k1 + 2))");
  CHECK(std::exp(h.log_eval(5, 0)) == Approx(7.0));
}

TEST_CASE("expression stays finite in log space at large k") {
  expr::Expression e("factorial(k1) / pochhammer(1 + 4, k1)");
  double lv = e.log_eval(20000, 0);
  CHECK(std::isfinite(lv));
  CHECK(lv == Approx(log_factorial(20000.0) -
                     log_pochhammer(5.0, 20000.0)).epsilon(1e-12));
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(expr::Expression("2 +"), ParseError);
  CHECK_THROWS_AS(expr::Expression("foo(2)").log_eval(0, 0), ParseError);
  CHECK_THROWS_AS(expr::Expression("k1 + nope").log_eval(1, 1), ParseError);
  CHECK_THROWS_AS(expr::Expression("1 / (k1 - k1)").log_eval(1, 1), ParseError);
}

TEST_CASE("expr weight file reproduces the builtin") {
  std::string path = write_temp("eh.weight", R"(# coupled-species weight
type = expr
name = eh-from-file
xi = 1.0
tail1 = 4.0
param.b = 4
expr = factorial(k1)/pochhammer(1+b,k1) * ((k1+1)/(k1+2))^k2
)");
  auto w = load_weight_file(path);
  auto ref = builtin("evans-hanney", {{"b", 4.0}});
  CHECK(w.name == "eh-from-file");
  REQUIRE(w.tail_exponent[0]);
  CHECK(*w.tail_exponent[0] == 4.0);
  for (long k1 = 0; k1 <= 12; ++k1)
    for (long k2 = 0; k2 <= 12; ++k2)
      CHECK(w.log_eval(k1, k2) ==
            Approx(ref.log_eval(k1, k2)).margin(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("table weight file with tail continuation") {
  std::string body = "type = table\nname = tab\nxi = 1.0\ntail1 = 3.0\n"
                     "box = 2 1\ntable\n";
  auto ref = builtin("factorized", {{"b1", 3.0}, {"b2", 2.0}});
  for (long a = 0; a <= 2; ++a)
    for (long b = 0; b <= 1; ++b)
      body += std::to_string(a) + " " + std::to_string(b) + " " +
              std::to_string(ref.log_eval(a, b)) + "\n";
  std::string path = write_temp("tab.weight", body);
  auto w = load_weight_file(path);
  CHECK(w.log_eval(1, 1) == Approx(ref.log_eval(1, 1)).margin(1e-9));
  // beyond the box in k1: power-law continuation with tail1
  double expect = ref.log_eval(2, 1) - 3.0 * (std::log(6.0) - std::log(3.0));
  CHECK(w.log_eval(5, 1) == Approx(expect).margin(1e-9));
  // beyond in k2 has no declared tail
  CHECK_THROWS_AS(w.log_eval(0, 2), OutOfRange);
  std::remove(path.c_str());
}

TEST_CASE("weight file rejects unknown keys and bad tables") {
  std::string p1 = write_temp("bad1.weight",
                              "type = expr\nexpr = k1 + 1\nbogus = 3\n");
  CHECK_THROWS_AS(load_weight_file(p1), ConfigError);
  std::remove(p1.c_str());
  std::string p2 = write_temp("bad2.weight",
                              "type = table\nbox = 1 1\ntable\n0 0 0.0\n");
  CHECK_THROWS_AS(load_weight_file(p2), ConfigError);  // box not covered
  std::remove(p2.c_str());
}
