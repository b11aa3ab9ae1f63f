#include "dynamics.hpp"

#include <cblas.h>

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace gabic {

namespace {

void check_times(const Eigen::VectorXd& times) {
  if (times.size() < 1) throw InputError("empty time grid");
  if (times.size() == 1) return;
  const double dt = times(1) - times(0);
  if (!(dt > 0.0)) throw InputError("time grid must be strictly increasing");
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    const double step = times(i) - times(i - 1);
    if (std::abs(step - dt) > 1e-9 * dt)
      throw InputError("time grid must be uniform");
  }
}

void check_initial(const Eigen::VectorXcd& initial, int dim) {
  if (initial.size() != dim) throw InputError("initial state dimension mismatch");
  if (std::abs(initial.norm() - 1.0) > 1e-8)
    throw InputError("initial state must be normalized");
}

// Psi_block = V * (phases .* c), one zgemm per block of samples.
void propagate_block(const Eigen::MatrixXcd& v, const Eigen::VectorXcd& coeff,
                     const Eigen::VectorXd& energies, const Eigen::VectorXd& times,
                     Eigen::Index first, Eigen::MatrixXcd& coeff_block,
                     Eigen::MatrixXcd& psi_block) {
  const Eigen::Index n = v.rows();
  const Eigen::Index cols = coeff_block.cols();
  for (Eigen::Index m = 0; m < cols; ++m) {
    const double t = times(first + m);
    for (Eigen::Index a = 0; a < n; ++a) {
      coeff_block(a, m) = coeff(a) * std::exp(std::complex<double>(0.0, -energies(a) * t));
    }
  }
  const std::complex<double> one(1.0, 0.0), zero(0.0, 0.0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, int(n), int(cols), int(n),
              &one, v.data(), int(n), coeff_block.data(), int(n), &zero,
              psi_block.data(), int(n));
}

}  // namespace

double causal_horizon(const SystemParams& p, const Lattice& lat) {
  const int legN = lat.legN_index(p);
  const int dist = std::min(lat.leg0_index, lat.total_sites - 1 - legN);
  return dist / (2.0 * p.hopping);
}

Eigen::VectorXcd atom_initial_state(int dim) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(kAtomIndex) = 1.0;
  return psi;
}

Trajectory evolve(const EigenDecomposition& d, const Eigen::VectorXcd& initial,
                  const Eigen::VectorXd& times, const std::vector<int>& sites) {
  check_times(times);
  check_initial(initial, d.dim());
  const int leg0 = d.lattice.leg0_index;
  const int nc = d.lattice.total_sites;
  for (int s : sites) {
    const int abs_site = leg0 + s;
    if (abs_site < 0 || abs_site >= nc) {
      std::ostringstream os;
      os << "tracked site " << s << " falls outside the chain";
      throw InputError(os.str());
    }
  }

  Trajectory tr;
  tr.times = times;
  tr.sites = sites;
  tr.horizon = causal_horizon(d.params, d.lattice);
  tr.horizon_warning = times(times.size() - 1) >= tr.horizon;

  const Eigen::Index nt = times.size();
  const Eigen::Index n = d.dim();
  tr.atom_population.resize(nt);
  tr.site_amplitudes.resize(Eigen::Index(sites.size()), nt);
  tr.norm.resize(nt);
  tr.boundary_abs.resize(nt);

  const Eigen::VectorXcd coeff = d.states.adjoint() * initial;

  constexpr Eigen::Index kBlock = 256;
  Eigen::MatrixXcd coeff_block(n, kBlock), psi_block(n, kBlock);
  for (Eigen::Index first = 0; first < nt; first += kBlock) {
    const Eigen::Index cols = std::min(kBlock, nt - first);
    if (cols != coeff_block.cols()) {
      coeff_block.resize(n, cols);
      psi_block.resize(n, cols);
    }
    propagate_block(d.states, coeff, d.energies, times, first, coeff_block, psi_block);
    for (Eigen::Index m = 0; m < cols; ++m) {
      const auto psi = psi_block.col(m);
      tr.atom_population(first + m) = std::norm(psi(kAtomIndex));
      for (std::size_t s = 0; s < sites.size(); ++s)
        tr.site_amplitudes(Eigen::Index(s), first + m) = psi(site_index(leg0 + sites[s]));
      tr.norm(first + m) = psi.norm();
      tr.boundary_abs(first + m) =
          std::max(std::abs(psi(site_index(0))), std::abs(psi(site_index(nc - 1))));
    }
  }
  return tr;
}

Eigen::MatrixXcd evolve_states(const EigenDecomposition& d,
                               const Eigen::VectorXcd& initial,
                               const Eigen::VectorXd& times) {
  check_times(times);
  check_initial(initial, d.dim());
  const Eigen::Index n = d.dim();
  const Eigen::Index nt = times.size();
  const Eigen::VectorXcd coeff = d.states.adjoint() * initial;
  Eigen::MatrixXcd coeff_block(n, nt), psi(n, nt);
  propagate_block(d.states, coeff, d.energies, times, 0, coeff_block, psi);
  return psi;
}

BoundStateModel bound_state_projection(const EigenDecomposition& d,
                                       const BoundStateSet& set,
                                       const Eigen::VectorXcd& initial,
                                       const std::vector<int>& sites) {
  check_initial(initial, d.dim());
  if (!set.lower_boc)
    throw ModelUnavailableError("lower bound state outside the continuum not found");
  if (!set.upper_boc)
    throw ModelUnavailableError("upper bound state outside the continuum not found");
  if (!set.bic) throw ModelUnavailableError("bound state in the continuum not found");

  BoundStateModel m;
  m.sites = sites;
  const int leg0 = d.lattice.leg0_index;
  const std::array<int, 3> idx = {*set.lower_boc, *set.bic, *set.upper_boc};
  m.e_lower = d.energies(idx[0]);
  m.e_bic = d.energies(idx[1]);
  m.e_upper = d.energies(idx[2]);
  m.delta_lower = m.e_bic - m.e_lower;
  m.delta_upper = m.e_upper - m.e_bic;

  const auto overlap = [&](int state) { return d.states.col(state).dot(initial); };
  m.c_lower = overlap(idx[0]);
  m.c_bic = overlap(idx[1]);
  m.c_upper = overlap(idx[2]);
  m.a_lower = d.states(kAtomIndex, idx[0]);
  m.a_bic = d.states(kAtomIndex, idx[1]);
  m.a_upper = d.states(kAtomIndex, idx[2]);

  m.d.resize(3, Eigen::Index(sites.size()));
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const int abs_site = leg0 + sites[s];
    if (abs_site < 0 || abs_site >= d.lattice.total_sites)
      throw InputError("requested site falls outside the chain");
    for (int a = 0; a < 3; ++a)
      m.d(a, Eigen::Index(s)) = d.states(site_index(abs_site), idx[std::size_t(a)]);
  }
  return m;
}

Trajectory long_time_populations(const BoundStateModel& m, const Eigen::VectorXd& times,
                                 LongTimeVariant variant) {
  check_times(times);
  Trajectory tr;
  tr.times = times;
  tr.sites = m.sites;
  const Eigen::Index nt = times.size();
  tr.atom_population.resize(nt);
  tr.site_amplitudes.resize(Eigen::Index(m.sites.size()), nt);
  tr.norm.setConstant(nt, m.bound_weight());
  tr.boundary_abs.setZero(nt);

  using cplx = std::complex<double>;
  const std::array<double, 3> e = {m.e_lower, m.e_bic, m.e_upper};
  const std::array<cplx, 3> c = {m.c_lower, m.c_bic, m.c_upper};
  const std::array<cplx, 3> a = {m.a_lower, m.a_bic, m.a_upper};

  for (Eigen::Index t = 0; t < nt; ++t) {
    std::array<cplx, 3> phase;
    for (int i = 0; i < 3; ++i)
      phase[std::size_t(i)] = std::exp(cplx(0.0, -e[std::size_t(i)] * times(t)));

    cplx atom_amp = 0.0;
    for (int i = 0; i < 3; ++i) {
      const cplx weight = variant == LongTimeVariant::AmplitudeSquared
                              ? c[std::size_t(i)] * c[std::size_t(i)]
                              : c[std::size_t(i)] * a[std::size_t(i)];
      atom_amp += phase[std::size_t(i)] * weight;
    }
    tr.atom_population(t) = std::norm(atom_amp);

    for (std::size_t s = 0; s < m.sites.size(); ++s) {
      cplx amp = 0.0;
      for (int i = 0; i < 3; ++i)
        amp += phase[std::size_t(i)] * c[std::size_t(i)] * m.d(i, Eigen::Index(s));
      tr.site_amplitudes(Eigen::Index(s), t) = amp;
    }
  }
  return tr;
}

}  // namespace gabic
