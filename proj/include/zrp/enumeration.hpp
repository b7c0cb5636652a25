#pragma once

// Brute-force reference computations by explicit enumeration of particle
// configurations.  These are the independent oracles the dynamic-programming
// and simulation paths are tested against; they share no code with them and
// are only meant for small instances.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"
#include "zrp/weights.hpp"

namespace zrp {

using Occupations = std::vector<std::array<long, 2>>;

namespace detail {

template <class Visit>
void for_each_composition(long L, std::array<long, 2> N, Occupations& prefix,
                          const Visit& visit) {
  if (long(prefix.size()) == L - 1) {
    prefix.push_back({N[0], N[1]});
    visit(prefix);
    prefix.pop_back();
    return;
  }
  for (long a = 0; a <= N[0]; ++a)
    for (long b = 0; b <= N[1]; ++b) {
      prefix.push_back({a, b});
      for_each_composition(L, {N[0] - a, N[1] - b}, prefix, visit);
      prefix.pop_back();
    }
}

}  // namespace detail

// Visits every eta in X_{L,N} (ordered site occupations summing to N)
template <class Visit>
void for_each_configuration(long L, std::array<long, 2> N, const Visit& visit) {
  Occupations prefix;
  prefix.reserve(std::size_t(L));
  detail::for_each_composition(L, N, prefix, visit);
}

// log Z_{L,N} by summing w^L over all of X_{L,N}
inline double brute_force_log_Z(const TwoSpeciesWeight& w, long L,
                                std::array<long, 2> N) {
  if (L < 1) throw InvalidParam("L must be >= 1");
  if (L > 5 || N[0] > 8 || N[1] > 8)
    throw BudgetExceeded("brute_force_Z is limited to L <= 5, N <= (8,8)");
  LogAccumulator acc;
  for_each_configuration(L, N, [&](const Occupations& eta) {
    double lw = 0;
    for (auto& k : eta) lw += w.log_eval(k[0], k[1]);
    acc.add(lw);
  });
  return acc.value;
}

// Exact canonical distribution pi_{L,N} as a map from configuration to
// probability; used to validate the simulator on small systems.
inline std::map<Occupations, double> enumerate_canonical(
    const TwoSpeciesWeight& w, long L, std::array<long, 2> N) {
  std::map<Occupations, double> out;
  LogAccumulator z;
  for_each_configuration(L, N, [&](const Occupations& eta) {
    double lw = 0;
    for (auto& k : eta) lw += w.log_eval(k[0], k[1]);
    out[eta] = lw;
    z.add(lw);
  });
  for (auto& [eta, lw] : out) lw = std::exp(lw - z.value);
  return out;
}

// log nu^L_mu({Sigma_L = N}) where each site carries the normalized
// single-site marginal w(k) e^{mu.k} / z.  log_z must come from an
// independent evaluation of the single-site sum.
inline double brute_force_log_nu_sigma(const TwoSpeciesWeight& w,
                                       const Fugacity& psi, double log_z,
                                       long L, std::array<long, 2> N) {
  if (L > 5 || N[0] > 8 || N[1] > 8)
    throw BudgetExceeded("enumeration limited to L <= 5, N <= (8,8)");
  LogAccumulator acc;
  // k = 0 contributes nothing even at psi_i = 0 (0 * -inf would be NaN)
  auto scale = [](long k, double lp) { return k == 0 ? 0.0 : double(k) * lp; };
  for_each_configuration(L, N, [&](const Occupations& eta) {
    double lp = 0;
    for (auto& k : eta)
      lp += w.log_eval(k[0], k[1]) + scale(k[0], psi.log_psi(0)) +
            scale(k[1], psi.log_psi(1)) - log_z;
    acc.add(lp);
  });
  return acc.value;
}

}  // namespace zrp
