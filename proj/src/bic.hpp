#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "params.hpp"
#include "spectrum.hpp"

namespace gabic {

// Unit-circle roots z_{1,2} = e^{+-iK} of the dispersion denominator.
struct ResidueKernel {
  std::complex<double> z1;
  std::complex<double> z2;
  double sin_k = 0.0;
};

ResidueKernel residue_kernel(const SystemParams& p);

// Closed-form BIC wavefunction: compact support between the legs,
// beta_j / alpha = 2 g sin(K (j - leg0)) / sqrt(4 xi^2 - Delta^2).
struct AnalyticBIC {
  std::complex<double> alpha;  // atom amplitude, real positive by gauge
  Eigen::VectorXcd beta;       // site amplitudes over the full chain
  double wavenumber = 0.0;     // K
  double detuning = 0.0;       // Delta = Omega - omega_c
  double energy = 0.0;         // Omega
};

AnalyticBIC analytic_bic(const SystemParams& p, const Lattice& lat);

// Principal value of M = int_{-pi}^{pi} [1 + cos(kN + phi)] / (Omega - w_c + 2 xi cos k) dk,
// evaluated by residues: the order-N pole at z = 0 plus half residues of the
// on-shell poles on the contour. Vanishes for every compact-support BIC
// (sin KN = 0); throws SingularParameterError at the band edges.
std::complex<double> m_integral(const SystemParams& p);

struct BicComparison {
  double residual = 0.0;              // ||H v - Omega v|| of the analytic state
  std::optional<double> overlap;      // |<v_num | v>| against the numeric BIC
};

BicComparison verify_bic(const AnalyticBIC& bic, const Eigen::MatrixXcd& h,
                         const Eigen::VectorXcd* numeric_bic = nullptr);

}  // namespace gabic
