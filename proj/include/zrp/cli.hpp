#pragma once

// Single-binary command line: every computation is a subcommand with
// machine-readable output (JSON for single results, CSV for grids and
// series).  CSV files carry a header row and a comment line recording the
// full configuration.  Exit codes: 0 success, 1 numeric failure, 2 config
// error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zrp/canonical.hpp"
#include "zrp/errors.hpp"
#include "zrp/grand_canonical.hpp"
#include "zrp/legendre.hpp"
#include "zrp/simulator.hpp"
#include "zrp/weight_file.hpp"
#include "zrp/weights.hpp"

namespace zrp::cli {

struct RunConfig {
  std::string subcommand;
  std::string weight = "evans-hanney";
  std::string weight_file;
  double b = 4.0;
  double b1 = 0.0, b2 = 0.0;  // factorized components (0 = use b)
  std::string mu, psi;        // "a,b"; mu accepts -inf
  std::string rho;            // "a,b"
  std::string dir;            // "a,b"
  std::string radii = "50,100,150,200";
  long L = 8;
  std::string N;              // "a,b"
  std::string L_list = "8,16,32,64";
  std::string box = "3";      // "r" or "r1,r2"
  long res = 32;
  double tmin = -3.0, tmax = 3.0;
  long tn = 61;
  std::string p1 = "sym", p2 = "sym";
  std::uint64_t seed = 1;
  long events = 1000000;
  double burn_in = 0.2;
  double tol = 1e-10;
  double grad_tol = 1e-8;
  long shells = 100000;
  long thin = 0;
  long threads = 1;
  std::string out;
  std::string series_out;
  std::string outdir = "figures";

  std::map<std::string, std::string> to_kv() const {
    std::map<std::string, std::string> kv;
    auto put = [&](const std::string& k, auto v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      kv[k] = os.str();
    };
    put("subcommand", subcommand);
    put("weight", weight);
    put("weight_file", weight_file);
    put("b", b);
    put("b1", b1);
    put("b2", b2);
    put("mu", mu);
    put("psi", psi);
    put("rho", rho);
    put("dir", dir);
    put("radii", radii);
    put("L", L);
    put("N", N);
    put("L_list", L_list);
    put("box", box);
    put("res", res);
    put("tmin", tmin);
    put("tmax", tmax);
    put("tn", tn);
    put("p1", p1);
    put("p2", p2);
    put("seed", seed);
    put("events", events);
    put("burn_in", burn_in);
    put("tol", tol);
    put("grad_tol", grad_tol);
    put("shells", shells);
    put("thin", thin);
    put("threads", threads);
    put("out", out);
    put("series_out", series_out);
    put("outdir", outdir);
    return kv;
  }

  static RunConfig from_kv(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    for (auto& [k, v] : kv) {
      if (k == "subcommand") c.subcommand = v;
      else if (k == "weight") c.weight = v;
      else if (k == "weight_file") c.weight_file = v;
      else if (k == "b") c.b = std::stod(v);
      else if (k == "b1") c.b1 = std::stod(v);
      else if (k == "b2") c.b2 = std::stod(v);
      else if (k == "mu") c.mu = v;
      else if (k == "psi") c.psi = v;
      else if (k == "rho") c.rho = v;
      else if (k == "dir") c.dir = v;
      else if (k == "radii") c.radii = v;
      else if (k == "L") c.L = std::stol(v);
      else if (k == "N") c.N = v;
      else if (k == "L_list") c.L_list = v;
      else if (k == "box") c.box = v;
      else if (k == "res") c.res = std::stol(v);
      else if (k == "tmin") c.tmin = std::stod(v);
      else if (k == "tmax") c.tmax = std::stod(v);
      else if (k == "tn") c.tn = std::stol(v);
      else if (k == "p1") c.p1 = v;
      else if (k == "p2") c.p2 = v;
      else if (k == "seed") c.seed = std::stoull(v);
      else if (k == "events") c.events = std::stol(v);
      else if (k == "burn_in") c.burn_in = std::stod(v);
      else if (k == "tol") c.tol = std::stod(v);
      else if (k == "grad_tol") c.grad_tol = std::stod(v);
      else if (k == "shells") c.shells = std::stol(v);
      else if (k == "thin") c.thin = std::stol(v);
      else if (k == "threads") c.threads = std::stol(v);
      else if (k == "out") c.out = v;
      else if (k == "series_out") c.series_out = v;
      else if (k == "outdir") c.outdir = v;
      else throw ConfigError("unknown config key '" + k + "'");
    }
    return c;
  }

  static RunConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
      auto t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected key = value in config: " + t);
      kv[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
    }
    return from_kv(kv);
  }

  std::string one_line() const {
    std::string s;
    for (auto& [k, v] : to_kv()) {
      if (v.empty()) continue;
      if (!s.empty()) s += " ";
      s += k + "=" + v;
    }
    return s;
  }
};

namespace detail2 {

inline std::array<double, 2> parse_pair(const std::string& s,
                                        const std::string& what) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw ConfigError(what + " must be two comma-separated values");
  auto parse1 = [&](std::string v) {
    v = zrp::detail::trim(v);
    if (v == "-inf") return neg_inf;
    try {
      return std::stod(v);
    } catch (...) {
      throw ConfigError("bad number '" + v + "' in " + what);
    }
  };
  return {parse1(s.substr(0, comma)), parse1(s.substr(comma + 1))};
}

inline std::vector<double> parse_list(const std::string& s,
                                      const std::string& what) {
  std::vector<double> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    cur = zrp::detail::trim(cur);
    if (cur.empty()) continue;
    try {
      out.push_back(std::stod(cur));
    } catch (...) {
      throw ConfigError("bad number '" + cur + "' in " + what);
    }
  }
  if (out.empty()) throw ConfigError(what + " must not be empty");
  return out;
}

inline TwoSpeciesWeight pick_weight(const RunConfig& c) {
  if (!c.weight_file.empty()) return load_weight_file(c.weight_file);
  std::map<std::string, double> params{{"b", c.b}};
  if (c.b1 > 0) params["b1"] = c.b1;
  if (c.b2 > 0) params["b2"] = c.b2;
  return builtin(c.weight, params);
}

inline Fugacity pick_fugacity(const RunConfig& c) {
  if (!c.psi.empty()) {
    auto p = parse_pair(c.psi, "--psi");
    return Fugacity(p[0], p[1]);
  }
  if (!c.mu.empty()) {
    auto m = parse_pair(c.mu, "--mu");
    return ChemicalPotential(m[0], m[1]).fugacity();
  }
  throw ConfigError("need --mu or --psi");
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path, const RunConfig& cfg,
                     const std::string& header)
      : out(path) {
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "# config: " << cfg.one_line() << "\n" << header << "\n";
    out.precision(12);
  }
};

inline std::string default_out(const RunConfig& c, const char* ext) {
  if (!c.out.empty()) return c.out;
  return "zrp_" + c.subcommand + ext;
}

inline void emit_json(const RunConfig& c, const nlohmann::json& j,
                      const std::string& summary) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(c.out);
    if (!f) throw ConfigError("cannot write '" + c.out + "'");
    f << j.dump(2) << "\n";
    std::cout << summary << " (wrote " << c.out << ")\n";
  }
}

inline nlohmann::json state_json(const gc::GrandCanonicalState& st) {
  nlohmann::json j;
  j["z"] = st.z;
  j["p"] = st.p;
  j["log_z"] = st.log_z;
  j["R"] = {st.R[0], st.R[1]};
  j["cov"] = {{st.covariance[0][0], st.covariance[0][1]},
              {st.covariance[1][0], st.covariance[1][1]}};
  j["membership"] = to_string(st.membership);
  j["trunc_error"] = st.trunc_error;
  j["route"] = st.route;
  j["shells"] = st.shells_used;
  return j;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

inline int exec_gc_eval(const RunConfig& c) {
  auto w = pick_weight(c);
  gc::EvalOptions opt;
  opt.tol = c.tol;
  opt.max_shells = c.shells;
  auto st = gc::evaluate(w, pick_fugacity(c), opt);
  emit_json(c, state_json(st),
            "gc-eval: membership=" + to_string(st.membership));
  return 0;
}

inline int exec_boundary(const RunConfig& c) {
  auto w = pick_weight(c);
  if (c.tn < 2) throw ConfigError("--tn must be >= 2");
  std::vector<double> grid;
  for (long i = 0; i < c.tn; ++i)
    grid.push_back(c.tmin + (c.tmax - c.tmin) * double(i) / double(c.tn - 1));
  auto bd = gc::domain_boundary(w, grid);
  std::string path = default_out(c, ".csv");
  CsvWriter csv(path, c, "tilde_mu1,tilde_mu2,is_corner");
  std::size_t ci = 0;
  for (auto& s : bd.samples) {
    while (ci < bd.corner_list.size() && bd.corner_list[ci].t < s[0]) {
      csv.out << bd.corner_list[ci].t << "," << bd.corner_list[ci].u << ",1\n";
      ++ci;
    }
    csv.out << s[0] << "," << s[1] << ",0\n";
  }
  for (; ci < bd.corner_list.size(); ++ci)
    csv.out << bd.corner_list[ci].t << "," << bd.corner_list[ci].u << ",1\n";
  std::cout << "boundary: " << bd.samples.size() << " samples, "
            << bd.corner_list.size() << " corner(s) -> " << path << "\n";
  return 0;
}

inline int exec_solve(const RunConfig& c) {
  auto w = pick_weight(c);
  auto r = parse_pair(c.rho, "--rho");
  legendre::SolveOptions opt;
  opt.grad_tol = c.grad_tol;
  opt.shell_budget = c.shells;
  auto sol = legendre::solve(w, DensityPair(r[0], r[1]), opt);
  nlohmann::json j;
  j["mbar"] = {sol.mbar.mu1, sol.mbar.mu2};
  j["s"] = sol.s_value;
  j["rc"] = {sol.rc.rho1, sol.rc.rho2};
  j["phase"] = legendre::to_string(sol.phase);
  j["on_boundary"] = sol.on_boundary;
  j["normal_cone"] = nlohmann::json::array();
  for (auto& n : sol.normal_cone) j["normal_cone"].push_back({n[0], n[1]});
  j["state"] = state_json(sol.state);
  emit_json(c, j, "solve: phase=" + legendre::to_string(sol.phase));
  return 0;
}

inline int exec_phase_diagram(const RunConfig& c) {
  auto w = pick_weight(c);
  auto bx = c.box.find(',') == std::string::npos
                ? std::array<double, 2>{std::stod(c.box), std::stod(c.box)}
                : parse_pair(c.box, "--box");
  legendre::SolveOptions opt;
  opt.grad_tol = c.grad_tol;
  opt.shell_budget = c.shells;
  long threads = c.threads;
  if (const char* env = std::getenv("ZRP_THREADS"))
    threads = std::max(threads, std::atol(env));
  auto grid = legendre::phase_diagram(w, bx, c.res, opt, threads);
  std::string path = default_out(c, ".csv");
  CsvWriter csv(path, c, "rho1,rho2,phase,rc1,rc2,s,mu1,mu2");
  for (long j = 0; j < c.res; ++j)
    for (long i = 0; i < c.res; ++i) {
      auto rho = grid.rho_at(i, j);
      const auto& cell = grid.cell(i, j);
      csv.out << rho.rho1 << "," << rho.rho2 << ","
              << legendre::to_string(grid.label(i, j)) << "," << cell.rc.rho1
              << "," << cell.rc.rho2 << "," << cell.s_value << ","
              << cell.mbar.mu1 << "," << cell.mbar.mu2 << "\n";
    }
  // companion gnuplot script
  std::string gp = path.substr(0, path.rfind('.')) + ".gp";
  std::ofstream g(gp);
  g << "# gnuplot script for " << path << "\n"
    << "set datafile separator ','\n"
    << "set xlabel 'rho1'\nset ylabel 'rho2'\nset key outside\n"
    << "phase(s) = (s eq 'Homogeneous') ? 0 : (s eq 'Condensed1') ? 1 : "
       "(s eq 'Condensed2') ? 2 : (s eq 'CondensedBoth') ? 3 : 4\n"
    << "set palette defined (0 'grey80', 1 'skyblue', 2 'salmon', 3 'violet', "
       "4 'black')\nset cbrange [0:4]\nunset colorbox\n"
    << "plot '" << path
    << "' using 1:2:(phase(strcol(3))) skip 2 with points pt 5 ps 1.4 "
       "palette notitle\n";
  std::cout << "phase-diagram: " << c.res << "x" << c.res << " cells -> "
            << path << ", " << gp << "\n";
  return 0;
}

inline int exec_equivalence(const RunConfig& c) {
  auto w = pick_weight(c);
  auto r = parse_pair(c.rho, "--rho");
  std::vector<long> Ls;
  for (double v : parse_list(c.L_list, "--L")) Ls.push_back(std::lround(v));
  legendre::SolveOptions opt;
  opt.grad_tol = c.grad_tol;
  auto scan = canonical::equivalence_scan(w, DensityPair(r[0], r[1]), Ls, opt);
  std::string path = default_out(c, ".csv");
  CsvWriter csv(path, c, "L,N1,N2,h,logZ_per_site,cor32_residual");
  for (auto& row : scan.rows)
    csv.out << row.L << "," << row.N[0] << "," << row.N[1] << "," << row.h
            << "," << row.log_Z_per_site << "," << row.cor_residual << "\n";
  std::cout << "equivalence: mbar=(" << scan.mbar.mu1 << "," << scan.mbar.mu2
            << ") s=" << scan.s << " -> " << path << "\n";
  return 0;
}

inline int exec_marginal(const RunConfig& c) {
  auto w = pick_weight(c);
  auto np = parse_pair(c.N, "--N");
  std::array<long, 2> N{std::lround(np[0]), std::lround(np[1])};
  auto table = canonical::build_table(w, c.L, N);
  std::string path = default_out(c, ".csv");
  CsvWriter csv(path, c, "k1,k2,probability");
  for (long k1 = 0; k1 <= N[0]; ++k1)
    for (long k2 = 0; k2 <= N[1]; ++k2)
      csv.out << k1 << "," << k2 << ","
              << table.site_marginal(w, N, {k1, k2}) << "\n";
  std::cout << "marginal: L=" << c.L << " N=(" << N[0] << "," << N[1]
            << ") -> " << path << "\n";
  return 0;
}

inline int exec_simulate(const RunConfig& c) {
  auto w = pick_weight(c);
  sim::SimParams p;
  p.L = c.L;
  auto np = parse_pair(c.N, "--N");
  p.N = {std::lround(np[0]), std::lround(np[1])};
  p.p1 = sim::JumpDist::parse(c.p1);
  p.p2 = sim::JumpDist::parse(c.p2);
  p.seed = c.seed;
  p.events = c.events;
  p.burn_in = c.burn_in;
  sim::RunOptions ro;
  ro.series_thin = c.thin > 0 ? c.thin : (c.series_out.empty() ? 0 : c.L);
  auto t = sim::run(w, p, ro);
  nlohmann::json j;
  j["time"] = t.time;
  j["events"] = t.events;
  j["mean_max_frac"] = {t.mean_max_frac[0], t.mean_max_frac[1]};
  j["mean_density"] = {t.mean_density[0], t.mean_density[1]};
  j["final_max"] = {t.final_max[0], t.final_max[1]};
  j["final_argmax"] = {t.final_argmax[0], t.final_argmax[1]};
  j["colocation_frac"] = t.colocation_frac;
  j["conserved"] = t.conserved;
  j["seed"] = c.seed;
  if (!c.series_out.empty()) {
    CsvWriter csv(c.series_out, c, "t,M1,M2,argmax1,argmax2");
    for (auto& s : t.series)
      csv.out << s.t << "," << s.max1 << "," << s.max2 << "," << s.argmax1
              << "," << s.argmax2 << "\n";
  }
  emit_json(c, j,
            "simulate: M/L=(" + std::to_string(t.mean_max_frac[0]) + "," +
                std::to_string(t.mean_max_frac[1]) + ")");
  return 0;
}

inline int exec_tail_rate(const RunConfig& c) {
  auto w = pick_weight(c);
  auto d = parse_pair(c.dir, "--dir");
  auto radii = parse_list(c.radii, "--radii");
  auto rates = gc::tail_rate(w, pick_fugacity(c), {d[0], d[1]}, radii);
  std::string path = default_out(c, ".csv");
  CsvWriter csv(path, c, "radius,k1,k2,estimate");
  for (auto& r : rates)
    csv.out << r.radius << "," << r.k[0] << "," << r.k[1] << "," << r.estimate
            << "\n";
  std::cout << "tail-rate: " << rates.size() << " radii -> " << path << "\n";
  return 0;
}

inline int exec_figures(const RunConfig& c) {
  namespace fs = std::filesystem;
  fs::create_directories(c.outdir);
  struct Fig {
    const char* stem;
    const char* weight;
    double b;
  };
  // the four reference phase diagrams: coupled-species b in {4,3,2}, the
  // hypergeometric weight and its symmetrized variant at b = 4
  std::vector<Fig> figs{{"fig1_evans_hanney_b4", "evans-hanney", 4.0},
                        {"fig2a_evans_hanney_b3", "evans-hanney", 3.0},
                        {"fig2b_evans_hanney_b2", "evans-hanney", 2.0},
                        {"fig3_slowed_free_b4", "slowed-free", 4.0},
                        {"fig4_symmetrized_b4", "symmetrized", 4.0}};
  for (auto& f : figs) {
    RunConfig sub = c;
    sub.weight = f.weight;
    sub.b = f.b;
    sub.subcommand = "boundary";
    sub.out = c.outdir + "/" + f.stem + "_boundary.csv";
    exec_boundary(sub);
    sub.subcommand = "phase-diagram";
    sub.out = c.outdir + "/" + f.stem + "_phases.csv";
    exec_phase_diagram(sub);
  }
  std::cout << "figures: wrote " << figs.size() << " datasets under "
            << c.outdir << "\n";
  return 0;
}

}  // namespace detail2

inline int run_config(const RunConfig& c) {
  if (c.subcommand == "gc-eval") return detail2::exec_gc_eval(c);
  if (c.subcommand == "boundary") return detail2::exec_boundary(c);
  if (c.subcommand == "solve") return detail2::exec_solve(c);
  if (c.subcommand == "phase-diagram") return detail2::exec_phase_diagram(c);
  if (c.subcommand == "equivalence") return detail2::exec_equivalence(c);
  if (c.subcommand == "marginal") return detail2::exec_marginal(c);
  if (c.subcommand == "simulate") return detail2::exec_simulate(c);
  if (c.subcommand == "tail-rate") return detail2::exec_tail_rate(c);
  if (c.subcommand == "figures") return detail2::exec_figures(c);
  throw ConfigError("unknown subcommand '" + c.subcommand + "'");
}

inline int dispatch(const std::vector<std::string>& args) {
  try {
    // config-file alternative to flags
    if (args.size() >= 2 && args[0] == "--config")
      return run_config(RunConfig::from_file(args[1]));

    CLI::App app{"two-species zero-range process toolkit"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_common = [&](CLI::App* sub) {
      sub->add_option("--weight", c.weight, "builtin weight name");
      sub->add_option("--weight-file", c.weight_file, "weight file path");
      sub->add_option("--b", c.b, "weight parameter b");
      sub->add_option("--b1", c.b1, "species-1 b (factorized)");
      sub->add_option("--b2", c.b2, "species-2 b (factorized)");
      sub->add_option("--out", c.out, "output path");
      sub->add_option("--tol", c.tol, "series tolerance");
      sub->add_option("--shells", c.shells, "shell budget");
      sub->add_option("--grad-tol", c.grad_tol, "solver gradient tolerance");
      sub->add_option("--threads", c.threads, "worker threads");
    };

    auto* gce = app.add_subcommand("gc-eval", "grand-canonical state");
    add_common(gce);
    gce->add_option("--mu", c.mu, "chemical potentials mu1,mu2 (-inf ok)");
    gce->add_option("--psi", c.psi, "fugacities psi1,psi2");

    auto* bd = app.add_subcommand("boundary", "domain boundary curve");
    add_common(bd);
    bd->add_option("--tmin", c.tmin);
    bd->add_option("--tmax", c.tmax);
    bd->add_option("--tn", c.tn, "grid points");

    auto* sv = app.add_subcommand("solve", "entropy solution at a density");
    add_common(sv);
    sv->add_option("--rho", c.rho, "densities rho1,rho2")->required();

    auto* pd = app.add_subcommand("phase-diagram", "scan a density box");
    add_common(pd);
    pd->add_option("--box", c.box, "box max, r or r1,r2");
    pd->add_option("--res", c.res, "grid resolution");

    auto* eq = app.add_subcommand("equivalence", "h_L scan over system sizes");
    add_common(eq);
    eq->add_option("--rho", c.rho, "densities rho1,rho2")->required();
    eq->add_option("--L", c.L_list, "comma-separated system sizes");

    auto* mg = app.add_subcommand("marginal", "exact canonical site marginal");
    add_common(mg);
    mg->add_option("--L", c.L, "system size")->required();
    mg->add_option("--N", c.N, "particle numbers N1,N2")->required();

    auto* sm = app.add_subcommand("simulate", "kinetic Monte Carlo run");
    add_common(sm);
    sm->add_option("--L", c.L, "ring size")->required();
    sm->add_option("--N", c.N, "particle numbers N1,N2")->required();
    sm->add_option("--p1", c.p1, "species-1 jumps: sym|asym|asym:p");
    sm->add_option("--p2", c.p2, "species-2 jumps");
    sm->add_option("--seed", c.seed, "RNG seed");
    sm->add_option("--events", c.events, "event budget");
    sm->add_option("--burn-in", c.burn_in, "burn-in fraction");
    sm->add_option("--series-out", c.series_out, "time series CSV");
    sm->add_option("--thin", c.thin, "series thinning (events)");

    auto* tr = app.add_subcommand("tail-rate", "directional tail decay rates");
    add_common(tr);
    tr->add_option("--mu", c.mu, "boundary point mu1,mu2");
    tr->add_option("--psi", c.psi, "boundary point psi1,psi2");
    tr->add_option("--dir", c.dir, "direction d1,d2")->required();
    tr->add_option("--radii", c.radii, "comma-separated radii");

    auto* fg = app.add_subcommand("figures", "reference figure datasets");
    add_common(fg);
    fg->add_option("--outdir", c.outdir, "output directory");
    fg->add_option("--res", c.res, "phase diagram resolution");
    fg->add_option("--tmin", c.tmin);
    fg->add_option("--tmax", c.tmax);
    fg->add_option("--tn", c.tn);

    std::vector<const char*> argv;
    argv.push_back("zrp");
    for (auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {  // --help
        (void)app.exit(e);
        return 0;
      }
      std::cerr << "error: ConfigError: " << e.what() << "\n";
      return 2;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    return run_config(c);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace zrp::cli
