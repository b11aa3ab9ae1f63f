#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spectrum.hpp"

namespace gabic {

// Quench observables on a uniform time grid. Site indices are relative to the
// left leg, so site 0 is the left leg and site N the right.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::VectorXd atom_population;   // P_e(t)
  std::vector<int> sites;            // requested sites, relative to leg0
  Eigen::MatrixXcd site_amplitudes;  // sites x samples, beta_j(t)
  Eigen::VectorXd norm;              // total probability per sample
  Eigen::VectorXd boundary_abs;      // max |amplitude| at the two chain ends
  double horizon = 0.0;              // causal horizon in 1/xi
  bool horizon_warning = false;
};

// Time before boundary reflections can reach the legs (group velocity 2 xi).
double causal_horizon(const SystemParams& p, const Lattice& lat);

// sigma_+ |G>: excited atom, empty waveguide.
Eigen::VectorXcd atom_initial_state(int dim);

// Spectral propagator, exact per sample. Requires a normalized initial state
// and a uniform, strictly increasing time grid.
Trajectory evolve(const EigenDecomposition& d, const Eigen::VectorXcd& initial,
                  const Eigen::VectorXd& times, const std::vector<int>& sites);

// Full evolved states as columns; for small systems and tests.
Eigen::MatrixXcd evolve_states(const EigenDecomposition& d,
                               const Eigen::VectorXcd& initial,
                               const Eigen::VectorXd& times);

// Three-bound-state reduction of the initial state.
struct BoundStateModel {
  double e_lower = 0.0, e_bic = 0.0, e_upper = 0.0;
  std::complex<double> c_lower, c_bic, c_upper;  // overlaps <phi_a | psi(0)>
  std::complex<double> a_lower, a_bic, a_upper;  // atom amplitudes of the states
  std::vector<int> sites;                        // relative to leg0
  Eigen::MatrixXcd d;                            // 3 x sites photon amplitudes (L, I, U)
  double delta_lower = 0.0;                      // E_I - E_L
  double delta_upper = 0.0;                      // E_U - E_I

  double bound_weight() const {
    return std::norm(c_lower) + std::norm(c_bic) + std::norm(c_upper);
  }
};

BoundStateModel bound_state_projection(const EigenDecomposition& d,
                                       const BoundStateSet& set,
                                       const Eigen::VectorXcd& initial,
                                       const std::vector<int>& sites);

// The long-time model keeps only the three bound states. AmplitudeSquared is
// the published formula with squared overlap amplitudes in P_e; the projector
// truncation uses c_a times the state's own atom amplitude. Site amplitudes
// coincide between the two.
enum class LongTimeVariant { AmplitudeSquared, ProjectorTruncation };

Trajectory long_time_populations(const BoundStateModel& m, const Eigen::VectorXd& times,
                                 LongTimeVariant variant);

}  // namespace gabic
