#include "spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "errors.hpp"

namespace gabic {

namespace {

void gauge_fix(Eigen::MatrixXcd& v) {
  for (Eigen::Index n = 0; n < v.cols(); ++n) {
    Eigen::Index imax = 0;
    v.col(n).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> pivot = v(imax, n);
    const double mag = std::abs(pivot);
    if (mag > 0.0) v.col(n) *= std::conj(pivot) / mag;
  }
}

double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

}  // namespace

EigenDecomposition diagonalize(const Eigen::MatrixXcd& h, const SystemParams& p,
                               const Lattice& lat) {
  const Eigen::Index n = h.rows();
  if (n != h.cols()) throw InternalError("Hamiltonian must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12 * scale) {
    std::ostringstream os;
    os << "non-Hermitian input, max |H - H^dag| = " << herm;
    throw InternalError(os.str());
  }

  EigenDecomposition d;
  d.params = p;
  d.lattice = lat;
  d.states = h;
  d.energies.resize(n);
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', int(n),
                                  d.states.data(), int(n), d.energies.data());
  if (info != 0) {
    std::ostringstream os;
    os << "zheevd failed with info = " << info;
    throw InternalError(os.str());
  }
  gauge_fix(d.states);
  return d;
}

const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::Propagating: return "propagating";
    case StateClass::LowerBoc: return "boc_lower";
    case StateClass::UpperBoc: return "boc_upper";
    case StateClass::Bic: return "bic";
  }
  return "unknown";
}

BoundStateSet classify_states(const EigenDecomposition& d, const ClassifyOptions& opts) {
  const auto [e_lo, e_hi] = band_edges(d.params);
  const int nc = d.lattice.total_sites;
  const int leg0 = d.lattice.leg0_index;
  const int legN = d.lattice.legN_index(d.params);

  BoundStateSet set;
  set.classes.assign(std::size_t(d.dim()), StateClass::Propagating);
  set.atom_weight.resize(std::size_t(d.dim()));
  set.span_photon_weight.resize(std::size_t(d.dim()));

  std::vector<int> bic_candidates;
  for (int n = 0; n < d.dim(); ++n) {
    const auto& v = d.states.col(n);
    const double atom_w = std::norm(v(kAtomIndex));
    double span_w = 0.0;
    for (int j = leg0; j <= legN; ++j) span_w += std::norm(v(site_index(j)));
    set.atom_weight[std::size_t(n)] = atom_w;
    set.span_photon_weight[std::size_t(n)] = span_w;

    const double e = d.energies(n);
    if (e < e_lo - opts.edge_tol) {
      if (set.lower_boc) {
        std::ostringstream os;
        os << "extra lower BOC candidate at E = " << e << " (index " << n << ")";
        set.diagnostics.push_back(os.str());
        // keep the more detached state
        if (e < d.energies(*set.lower_boc)) {
          set.classes[std::size_t(*set.lower_boc)] = StateClass::Propagating;
          set.lower_boc = n;
          set.classes[std::size_t(n)] = StateClass::LowerBoc;
        }
      } else {
        set.lower_boc = n;
        set.classes[std::size_t(n)] = StateClass::LowerBoc;
      }
    } else if (e > e_hi + opts.edge_tol) {
      if (set.upper_boc) {
        std::ostringstream os;
        os << "extra upper BOC candidate at E = " << e << " (index " << n << ")";
        set.diagnostics.push_back(os.str());
        if (e > d.energies(*set.upper_boc)) {
          set.classes[std::size_t(*set.upper_boc)] = StateClass::Propagating;
          set.upper_boc = n;
          set.classes[std::size_t(n)] = StateClass::UpperBoc;
        }
      } else {
        set.upper_boc = n;
        set.classes[std::size_t(n)] = StateClass::UpperBoc;
      }
    } else if (atom_w + span_w > opts.localization_threshold &&
               span_w > opts.min_photon_weight) {
      bic_candidates.push_back(n);
    }
  }

  if (bic_candidates.size() > 1) {
    std::ostringstream os;
    os << "ambiguous classification: " << bic_candidates.size()
       << " in-band localized states at energies";
    for (int n : bic_candidates) os << " " << d.energies(n);
    throw ClassificationError(os.str());
  }
  if (bic_candidates.size() == 1) {
    set.bic = bic_candidates.front();
    set.classes[std::size_t(*set.bic)] = StateClass::Bic;
  }

  // BOC tails must be contained in a decay-length-scaled window around the legs.
  for (auto idx : {set.lower_boc, set.upper_boc}) {
    if (!idx) continue;
    const double detach = std::abs(d.energies(*idx) - d.params.omega_cavity) /
                          (2.0 * d.params.hopping);
    const double kappa = std::acosh(std::max(detach, 1.0 + 1e-15));
    const int window = std::max(opts.boc_window, int(std::ceil(8.0 / std::max(kappa, 1e-6))));
    double outside = 0.0;
    for (int j = 0; j < nc; ++j) {
      if (j < leg0 - window || j > legN + window)
        outside += std::norm(d.states(site_index(j), *idx));
    }
    if (outside > opts.outside_tol) {
      std::ostringstream os;
      os << "BOC at E = " << d.energies(*idx) << " has weight " << outside
         << " outside the +-" << window << " site window";
      set.diagnostics.push_back(os.str());
    }
  }
  return set;
}

BicCondition bic_condition(const SystemParams& p) {
  const double K = resonant_momentum(p);
  const std::complex<double> f =
      1.0 + std::exp(std::complex<double>(0.0, K * p.leg_separation + p.phase));
  BicCondition c;
  c.interference = std::norm(f);
  c.holds = c.interference <= 1e-12;
  return c;
}

double lattice_integral(double energy, const SystemParams& p) {
  const double xi = p.hopping;
  const double detuning = energy - p.omega_cavity;
  if (!(std::abs(detuning) > 2.0 * xi)) {
    std::ostringstream os;
    os << "I(E) closed form requires |E - omega_c| > 2 xi, got E = " << energy;
    throw DomainError(os.str());
  }
  // Pole of 1 / (D + xi (z + 1/z)) inside the unit circle.
  const double u = -detuning / (2.0 * xi);
  const double s = u >= 0.0 ? 1.0 : -1.0;
  const double root = s * (std::abs(u) - std::sqrt(u * u - 1.0));
  const double denom = xi * (root - 1.0 / root);
  return 2.0 * M_PI * (1.0 + ipow(root, p.leg_separation) * std::cos(p.phase)) / denom;
}

namespace {

// E - Omega - (g^2/pi) I(E); its roots outside the band are the BOC energies.
double boc_mismatch(double energy, const SystemParams& p) {
  return energy - p.omega_atom -
         p.coupling * p.coupling / M_PI * lattice_integral(energy, p);
}

std::optional<double> find_root(const SystemParams& p, int side) {
  const auto [e_lo, e_hi] = band_edges(p);
  const double edge = side < 0 ? e_lo : e_hi;
  const double cap = edge + side * 10.0 * std::max(p.coupling, 1e-3 * p.hopping);

  // Geometric bracket expansion away from the band edge.
  double delta = 1e-9 * p.hopping;
  double a = edge + side * delta;
  const double fa = boc_mismatch(a, p);
  double b = a;
  double fb = fa;
  bool bracketed = false;
  while (std::abs(b - edge) < std::abs(cap - edge)) {
    delta *= 2.0;
    b = edge + side * delta;
    if (std::abs(b - edge) > std::abs(cap - edge)) b = cap;
    fb = boc_mismatch(b, p);
    if (fa * fb <= 0.0) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed) return std::nullopt;

  double lo = a, hi = b, flo = fa;
  for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-14 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = boc_mismatch(mid, p);
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BocRoots boc_energies(const SystemParams& p) {
  require_valid(p);
  if (!(p.coupling > 0.0)) throw ConfigError("boc_energies requires coupling > 0");
  BocRoots roots;
  roots.lower = find_root(p, -1);
  roots.upper = find_root(p, +1);
  return roots;
}

MomentumProfile momentum_profile(const Eigen::VectorXcd& state, const Lattice& lat) {
  const int nc = lat.total_sites;
  if (state.size() != nc + 1) throw InputError("state dimension does not match lattice");

  std::vector<std::complex<double>> in(static_cast<std::size_t>(nc));
  std::vector<std::complex<double>> out(static_cast<std::size_t>(nc));
  for (int j = 0; j < nc; ++j) in[std::size_t(j)] = state(site_index(j));
  fftw_plan plan = fftw_plan_dft_1d(
      nc, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  MomentumProfile mp;
  mp.k.resize(nc);
  mp.beta_k.resize(nc);
  const double norm = 1.0 / std::sqrt(double(nc));
  for (int m = 0; m < nc; ++m) {
    double k = 2.0 * M_PI * m / nc;
    if (k > M_PI) k -= 2.0 * M_PI;
    mp.k(m) = k;
    mp.beta_k(m) = out[std::size_t(m)] * norm;
  }
  return mp;
}

}  // namespace gabic
