#include "params.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace gabic {

Lattice centered_lattice(int total_sites, const SystemParams& p) {
  Lattice lat;
  lat.total_sites = total_sites;
  lat.leg0_index = (total_sites - p.leg_separation) / 2;
  return lat;
}

std::vector<Violation> validate(const SystemParams& p) {
  std::vector<Violation> v;
  if (!(p.hopping > 0.0))
    v.push_back({"core-model", "system.hopping", "hopping must be > 0"});
  if (!(p.coupling >= 0.0))
    v.push_back({"core-model", "system.coupling", "coupling must be >= 0"});
  if (p.leg_separation < 1)
    v.push_back({"core-model", "system.leg_separation", "leg separation must be >= 1"});
  if (!std::isfinite(p.phase))
    v.push_back({"core-model", "system.phase", "phase must be finite"});
  if (!std::isfinite(p.omega_atom) || !std::isfinite(p.omega_cavity))
    v.push_back({"core-model", "system", "frequencies must be finite"});
  return v;
}

std::vector<Violation> validate(const SystemParams& p, const Lattice& lat) {
  std::vector<Violation> v = validate(p);
  if (lat.total_sites < 2)
    v.push_back({"core-model", "lattice.total_sites", "chain needs at least 2 sites"});
  if (lat.leg0_index < 0)
    v.push_back({"core-model", "lattice.leg0_index", "left leg index must be >= 0"});
  if (lat.leg0_index + p.leg_separation >= lat.total_sites)
    v.push_back({"core-model", "lattice", "right leg falls outside the chain"});
  return v;
}

namespace {
std::string render(const std::vector<Violation>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) os << "; ";
    os << vs[i].field << ": " << vs[i].message;
  }
  return os.str();
}
}  // namespace

void require_valid(const SystemParams& p) {
  auto vs = validate(p);
  if (!vs.empty()) throw ConfigError(render(vs));
}

void require_valid(const SystemParams& p, const Lattice& lat) {
  auto vs = validate(p, lat);
  if (!vs.empty()) throw ConfigError(render(vs));
}

double dispersion(double k, const SystemParams& p) {
  return p.omega_cavity - 2.0 * p.hopping * std::cos(k);
}

std::pair<double, double> band_edges(const SystemParams& p) {
  return {p.omega_cavity - 2.0 * p.hopping, p.omega_cavity + 2.0 * p.hopping};
}

double resonant_momentum(const SystemParams& p) {
  const double c = (p.omega_cavity - p.omega_atom) / (2.0 * p.hopping);
  if (!(std::abs(c) < 1.0)) {
    std::ostringstream os;
    os << "atom frequency " << p.omega_atom << " lies outside the band ("
       << band_edges(p).first << ", " << band_edges(p).second << ")";
    throw OutOfBandError(os.str());
  }
  return std::acos(c);
}

std::complex<double> coupling_amplitude(const SystemParams& p, int n_modes) {
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  const double K = resonant_momentum(p);
  const std::complex<double> phase_factor =
      std::exp(std::complex<double>(0.0, K * p.leg_separation + p.phase));
  return p.coupling / std::sqrt(double(n_modes)) * (1.0 + phase_factor);
}

}  // namespace gabic
