#pragma once

// User-defined weights from a structured key = value text file.  Two kinds:
//
//   type = expr        an arithmetic expression in k1, k2 (see expr.hpp);
//                      parameters enter as "param.NAME = value" lines
//   type = table       log-weights on a box, one "k1 k2 logw" line each
//                      after a "table" marker line; outside the box the
//                      declared per-species tail exponents continue the
//                      weight as a power law from the box edge
//
// Common keys: name, xi (exponential bound), tail1 / tail2 (optional
// power-law tail exponents).  Unknown keys are rejected.

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/expr.hpp"
#include "zrp/weights.hpp"

namespace zrp {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline TwoSpeciesWeight load_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight file '" + path + "'");

  std::map<std::string, std::string> kv;
  std::map<std::string, double> params;
  std::vector<std::array<double, 3>> rows;
  bool in_table = false;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (in_table) {
      std::istringstream ls(t);
      double a, b, v;
      if (!(ls >> a >> b >> v))
        throw ConfigError("bad table line in '" + path + "': " + t);
      rows.push_back({a, b, v});
      continue;
    }
    if (t == "table") {
      in_table = true;
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value in '" + path + "': " + t);
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key.rfind("param.", 0) == 0) {
      params[key.substr(6)] = std::stod(val);
    } else {
      static const char* known[] = {"type", "name", "xi", "tail1", "tail2",
                                    "expr", "box"};
      bool ok = false;
      for (auto* k : known) ok = ok || key == k;
      if (!ok) throw ConfigError("unknown key '" + key + "' in '" + path + "'");
      kv[key] = val;
    }
  }

  if (!kv.count("type")) throw ConfigError("weight file needs a type key");

  TwoSpeciesWeight w;
  w.name = kv.count("name") ? kv["name"] : "file:" + path;
  w.exp_bound_xi = kv.count("xi") ? std::stod(kv["xi"]) : 1.0;
  if (kv.count("tail1")) w.tail_exponent[0] = std::stod(kv["tail1"]);
  if (kv.count("tail2")) w.tail_exponent[1] = std::stod(kv["tail2"]);

  if (kv["type"] == "expr") {
    if (!kv.count("expr")) throw ConfigError("type = expr needs an expr key");
    auto ex = std::make_shared<expr::Expression>(kv["expr"], params);
    w.log_eval_fn = [ex](long k1, long k2) {
      return ex->log_eval(double(k1), double(k2));
    };
    // positivity probe on a small box fails fast on bad expressions
    for (long a = 0; a < 4; ++a)
      for (long b = 0; b < 4; ++b) (void)w.log_eval(a, b);
    return w;
  }

  if (kv["type"] == "table") {
    if (!kv.count("box")) throw ConfigError("type = table needs a box key");
    std::istringstream bs(kv["box"]);
    long b1 = -1, b2 = -1;
    if (!(bs >> b1 >> b2) || b1 < 0 || b2 < 0)
      throw ConfigError("box must be two nonnegative integers");
    auto table = std::make_shared<std::vector<double>>(
        std::size_t((b1 + 1) * (b2 + 1)),
        std::numeric_limits<double>::quiet_NaN());
    for (auto& r : rows) {
      long a = std::lround(r[0]), b = std::lround(r[1]);
      if (a < 0 || a > b1 || b < 0 || b > b2)
        throw ConfigError("table entry outside the declared box");
      (*table)[std::size_t(a * (b2 + 1) + b)] = r[2];
    }
    for (double v : *table)
      if (std::isnan(v))
        throw ConfigError("table does not cover the declared box");
    auto tail = w.tail_exponent;
    w.log_eval_fn = [table, b1, b2, tail](long k1, long k2) {
      long a = std::min(k1, b1), b = std::min(k2, b2);
      double lv = (*table)[std::size_t(a * (b2 + 1) + b)];
      if (k1 > b1) {
        if (!tail[0])
          throw OutOfRange("k1 beyond the table box and no tail1 declared");
        lv -= *tail[0] * (std::log(double(k1 + 1)) - std::log(double(b1 + 1)));
      }
      if (k2 > b2) {
        if (!tail[1])
          throw OutOfRange("k2 beyond the table box and no tail2 declared");
        lv -= *tail[1] * (std::log(double(k2 + 1)) - std::log(double(b2 + 1)));
      }
      return lv;
    };
    return w;
  }

  throw ConfigError("weight file type must be expr or table");
}

}  // namespace zrp
