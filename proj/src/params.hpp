#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gabic {

// Physical parameters of the giant atom + coupled-resonator waveguide.
// All energies are in units of the hopping strength (convention hopping = 1),
// times in inverse hopping.
struct SystemParams {
  double omega_atom = 0.0;    // atom transition frequency
  double omega_cavity = 0.0;  // bare resonator frequency
  double hopping = 1.0;       // nearest-neighbor hopping, > 0
  double coupling = 0.0;      // atom-leg coupling strength, >= 0
  int leg_separation = 1;     // sites between the two coupling legs, >= 1
  double phase = 0.0;         // coupling phase of the right leg, [0, 2pi)
};

// Finite hard-wall chain standing in for the infinite waveguide.
struct Lattice {
  int total_sites = 2001;
  int leg0_index = 0;  // absolute chain index of the left leg

  int legN_index(const SystemParams& p) const { return leg0_index + p.leg_separation; }
};

// Centers the coupling legs on the chain.
Lattice centered_lattice(int total_sites, const SystemParams& p);

struct Violation {
  std::string module;
  std::string field;
  std::string message;
};

// Collects every violated invariant; empty means valid.
std::vector<Violation> validate(const SystemParams& p);
std::vector<Violation> validate(const SystemParams& p, const Lattice& lat);

// Throwing variants used by the computational entry points.
void require_valid(const SystemParams& p);
void require_valid(const SystemParams& p, const Lattice& lat);

// omega_c - 2 xi cos k
double dispersion(double k, const SystemParams& p);

// (lower, upper) band edges omega_c -+ 2 xi
std::pair<double, double> band_edges(const SystemParams& p);

// K in (0, pi) with dispersion(K) = omega_atom; throws OutOfBandError.
double resonant_momentum(const SystemParams& p);

// G(phi) = (g / sqrt(n_modes)) (1 + e^{i(KN + phi)}) at the resonant momentum.
std::complex<double> coupling_amplitude(const SystemParams& p, int n_modes);

}  // namespace gabic
