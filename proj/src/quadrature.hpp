#pragma once

// Quadrature evaluations of the lattice integrals, independent of the residue
// closed forms. Used by the selfcheck subcommand and as test oracles.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "params.hpp"

namespace gabic {

// I(E) for |E - omega_c| > 2 xi by adaptive Gauss-Kronrod.
inline double lattice_integral_quadrature(double energy, const SystemParams& p) {
  const double d = energy - p.omega_cavity;
  const int n = p.leg_separation;
  const double phi = p.phase;
  const double xi = p.hopping;
  auto f = [&](double k) {
    return (1.0 + std::cos(k * n + phi)) / (d + 2.0 * xi * std::cos(k));
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, -M_PI, M_PI, 20, 1e-13);
}

// Principal value of the on-shell integral M. The even part of the numerator
// is regularized by subtracting its value at the pole; the subtracted piece
// integrates to zero in the principal-value sense.
inline double m_integral_quadrature(const SystemParams& p) {
  const double K = resonant_momentum(p);
  const int n = p.leg_separation;
  const double cphi = std::cos(p.phase);
  const double xi = p.hopping;
  const double g_at_pole = 1.0 + std::cos(K * n) * cphi;
  auto f = [&](double k) {
    const double d = std::cos(k) - std::cos(K);
    const double num = 1.0 + std::cos(k * n) * cphi - g_at_pole;
    if (std::abs(d) < 1e-13) {
      // removable: limit is g'(K) / (-sin K)
      return n * std::sin(K * n) * cphi / std::sin(K);
    }
    return num / d;
  };
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, M_PI, 20, 1e-12);
  return val / xi;
}

}  // namespace gabic
