#pragma once

#include <Eigen/Dense>

#include "params.hpp"

namespace gabic {

// Basis ordering is fixed as [atom, site 0, ..., site total_sites-1].
inline constexpr int kAtomIndex = 0;
inline int site_index(int j) { return 1 + j; }

// Single-excitation Hamiltonian on the finite hard-wall chain:
// diagonal atom entry Omega, site entries omega_c, nearest-neighbor -xi,
// atom-leg couplings g and g e^{i phi}.
Eigen::MatrixXcd build_hamiltonian(const SystemParams& p, const Lattice& lat);

}  // namespace gabic
