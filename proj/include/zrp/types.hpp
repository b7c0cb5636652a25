#pragma once

#include <array>
#include <cmath>
#include <string>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp {

// Dual coordinates psi_i = e^{mu_i}. psi_i = 0 encodes mu_i = -infinity, so
// all boundary-safe numerics are done in fugacity coordinates.
struct Fugacity {
  double psi1 = 0.0;
  double psi2 = 0.0;

  Fugacity() = default;
  Fugacity(double p1, double p2) : psi1(p1), psi2(p2) {
    if (!(psi1 >= 0.0) || !(psi2 >= 0.0) || !std::isfinite(psi1) ||
        !std::isfinite(psi2))
      throw InvalidParam("fugacities must be finite and nonnegative");
  }

  double operator[](int i) const { return i == 0 ? psi1 : psi2; }
  double log_psi(int i) const {
    double p = (*this)[i];
    return p > 0.0 ? std::log(p) : neg_inf;
  }
};

struct ChemicalPotential {
  double mu1 = neg_inf;
  double mu2 = neg_inf;

  ChemicalPotential() = default;
  ChemicalPotential(double m1, double m2) : mu1(m1), mu2(m2) {
    if (mu1 == pos_inf || mu2 == pos_inf || std::isnan(mu1) || std::isnan(mu2))
      throw InvalidParam("chemical potentials must lie in [-inf, +inf)");
  }

  double operator[](int i) const { return i == 0 ? mu1 : mu2; }
  Fugacity fugacity() const { return Fugacity(std::exp(mu1), std::exp(mu2)); }

  static ChemicalPotential from_fugacity(const Fugacity& psi) {
    return ChemicalPotential(psi.psi1 > 0 ? std::log(psi.psi1) : neg_inf,
                             psi.psi2 > 0 ? std::log(psi.psi2) : neg_inf);
  }

  // Rotated variables of the boundary parametrization
  double tilde1() const { return mu1 - mu2; }
  double tilde2() const { return mu1 + mu2; }
};

inline ChemicalPotential mu_from_rotated(double t, double u) {
  return ChemicalPotential(0.5 * (u + t), 0.5 * (u - t));
}

struct DensityPair {
  double rho1 = 0.0;
  double rho2 = 0.0;

  DensityPair() = default;
  DensityPair(double r1, double r2) : rho1(r1), rho2(r2) {
    if (!std::isfinite(rho1) || !std::isfinite(rho2) || rho1 < 0 || rho2 < 0)
      throw InvalidParam("densities must be finite and nonnegative");
  }
  double operator[](int i) const { return i == 0 ? rho1 : rho2; }
};

enum class Membership { Interior, BoundaryInDomain, BoundaryOutside, Exterior };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Interior: return "Interior";
    case Membership::BoundaryInDomain: return "BoundaryInDomain";
    case Membership::BoundaryOutside: return "BoundaryOutside";
    case Membership::Exterior: return "Exterior";
  }
  return "?";
}

}  // namespace zrp
