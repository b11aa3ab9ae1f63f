#include "hamiltonian.hpp"

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace gabic {

Eigen::MatrixXcd build_hamiltonian(const SystemParams& p, const Lattice& lat) {
  require_valid(p, lat);
  const int nc = lat.total_sites;
  const int dim = nc + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  h(kAtomIndex, kAtomIndex) = p.omega_atom;
  for (int j = 0; j < nc; ++j) h(site_index(j), site_index(j)) = p.omega_cavity;
  for (int j = 0; j + 1 < nc; ++j) {
    h(site_index(j), site_index(j + 1)) = -p.hopping;
    h(site_index(j + 1), site_index(j)) = -p.hopping;
  }

  const int leg0 = lat.leg0_index;
  const int legN = lat.legN_index(p);
  const std::complex<double> g_right =
      p.coupling * std::exp(std::complex<double>(0.0, p.phase));
  h(kAtomIndex, site_index(leg0)) = p.coupling;
  h(site_index(leg0), kAtomIndex) = p.coupling;
  h(kAtomIndex, site_index(legN)) = g_right;
  h(site_index(legN), kAtomIndex) = std::conj(g_right);
  return h;
}

}  // namespace gabic
