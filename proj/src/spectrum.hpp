#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hamiltonian.hpp"
#include "params.hpp"

namespace gabic {

// Full eigensystem of the single-excitation Hamiltonian. Eigenvectors are
// gauge-fixed: the largest-magnitude component of each state is real positive.
struct EigenDecomposition {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXcd states;   // columns, [atom, sites] basis
  SystemParams params;
  Lattice lattice;

  int dim() const { return int(energies.size()); }
};

EigenDecomposition diagonalize(const Eigen::MatrixXcd& h, const SystemParams& p,
                               const Lattice& lat);

enum class StateClass { Propagating, LowerBoc, UpperBoc, Bic };

const char* to_string(StateClass c);

struct ClassifyOptions {
  double edge_tol = 1e-9;                // detachment beyond the band edges
  double localization_threshold = 0.999; // atom + span weight for the BIC
  double min_photon_weight = 1e-9;       // BIC must carry photon weight
  int boc_window = 60;                   // baseline window for the BOC tail check
  double outside_tol = 1e-6;             // allowed weight outside the window
};

struct BoundStateSet {
  std::optional<int> lower_boc;  // eigenstate indices into the decomposition
  std::optional<int> upper_boc;
  std::optional<int> bic;
  std::vector<StateClass> classes;
  std::vector<double> atom_weight;
  std::vector<double> span_photon_weight;  // photon weight within [leg0, legN]
  std::vector<std::string> diagnostics;    // flagged extras / tail leakage
};

BoundStateSet classify_states(const EigenDecomposition& d,
                              const ClassifyOptions& opts = {});

struct BicCondition {
  bool holds = false;
  double interference = 0.0;  // |1 + e^{i(KN + phi)}|^2, |G|^2 up to g^2/n_modes
};

// True iff the resonant coupling amplitude vanishes, KN + phi = pi (mod 2pi).
BicCondition bic_condition(const SystemParams& p);

// Closed-form I(E) = int_{-pi}^{pi} [1 + cos(kN + phi)] / (E - w_c + 2 xi cos k) dk
// for |E - w_c| > 2 xi, by the residue of the pole inside the unit circle.
double lattice_integral(double energy, const SystemParams& p);

// Real roots of E = Omega + (g^2/pi) I(E) outside the band, one per side.
// A side with no sign change is reported absent.
struct BocRoots {
  std::optional<double> lower;
  std::optional<double> upper;
};

BocRoots boc_energies(const SystemParams& p);

// Discrete Fourier transform of the photonic part of a state over the chain.
struct MomentumProfile {
  Eigen::VectorXd k;         // grid in (-pi, pi]
  Eigen::VectorXcd beta_k;   // amplitudes, Parseval-normalized
};

MomentumProfile momentum_profile(const Eigen::VectorXcd& state, const Lattice& lat);

}  // namespace gabic
