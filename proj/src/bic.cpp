#include "bic.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "hamiltonian.hpp"

namespace gabic {

ResidueKernel residue_kernel(const SystemParams& p) {
  const double K = resonant_momentum(p);
  ResidueKernel k;
  k.z1 = std::exp(std::complex<double>(0.0, K));
  k.z2 = std::exp(std::complex<double>(0.0, -K));
  k.sin_k = std::sin(K);
  return k;
}

AnalyticBIC analytic_bic(const SystemParams& p, const Lattice& lat) {
  require_valid(p, lat);
  const BicCondition cond = bic_condition(p);
  if (!cond.holds) {
    std::ostringstream os;
    os << "BIC condition violated: |1 + e^{i(KN+phi)}|^2 = " << cond.interference
       << "; the compact-support profile would not terminate beyond the right leg";
    throw ConfigError(os.str());
  }

  const double K = resonant_momentum(p);
  const double delta = p.omega_atom - p.omega_cavity;
  const double denom = std::sqrt(4.0 * p.hopping * p.hopping - delta * delta);
  const int leg0 = lat.leg0_index;
  const int legN = lat.legN_index(p);

  AnalyticBIC bic;
  bic.wavenumber = K;
  bic.detuning = delta;
  bic.energy = p.omega_atom;
  bic.beta = Eigen::VectorXcd::Zero(lat.total_sites);

  double norm_sq = 1.0;  // |alpha|^2 contribution
  for (int j = leg0; j <= legN; ++j) {
    const double rel = 2.0 * p.coupling * std::sin(K * (j - leg0)) / denom;
    bic.beta(j) = rel;
    norm_sq += rel * rel;
  }
  bic.alpha = 1.0 / std::sqrt(norm_sq);
  bic.beta *= bic.alpha;
  return bic;
}

std::complex<double> m_integral(const SystemParams& p) {
  require_valid(p);
  const ResidueKernel kern = residue_kernel(p);
  if (std::abs(kern.sin_k) < 1e-12)
    throw SingularParameterError("atom at a band edge: sin K = 0");

  const double K = resonant_momentum(p);
  const double kn = K * p.leg_separation;
  const double pref = M_PI * std::sin(kn) / (p.hopping * kern.sin_k);
  // Interior residue (order-N pole at z = 0) plus the half residues of the
  // on-shell poles z_{1,2} on the contour.
  const std::complex<double> interior = pref * std::exp(std::complex<double>(0.0, -p.phase));
  const std::complex<double> on_shell(0.0, pref * std::sin(p.phase));
  return interior + on_shell;
}

BicComparison verify_bic(const AnalyticBIC& bic, const Eigen::MatrixXcd& h,
                         const Eigen::VectorXcd* numeric_bic) {
  const Eigen::Index dim = h.rows();
  if (bic.beta.size() + 1 != dim)
    throw InputError("analytic state dimension does not match the Hamiltonian");

  Eigen::VectorXcd v(dim);
  v(kAtomIndex) = bic.alpha;
  v.tail(dim - 1) = bic.beta;

  BicComparison cmp;
  cmp.residual = (h * v - bic.energy * v).norm();
  if (numeric_bic) {
    if (numeric_bic->size() != dim)
      throw InputError("numeric state dimension does not match the Hamiltonian");
    cmp.overlap = std::abs(numeric_bic->dot(v));
  }
  return cmp;
}

}  // namespace gabic
