#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bic.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "quadrature.hpp"
#include "spectrum.hpp"

using namespace gabic;

namespace {

SystemParams config_a(double g = 0.1) {
  SystemParams p;
  p.omega_atom = -1.0;
  p.coupling = g;
  p.leg_separation = 6;
  p.phase = M_PI;
  return p;
}

SystemParams config_b(double g = 0.1) {
  SystemParams p;
  p.omega_atom = -std::sqrt(2.0);
  p.coupling = g;
  p.leg_separation = 12;
  p.phase = 0.0;
  return p;
}

}  // namespace

TEST_CASE("compact-support profile, dimerized case") {
  SystemParams p = config_a();
  const Lattice lat = centered_lattice(401, p);
  const auto bic = analytic_bic(p, lat);
  CHECK(bic.energy == doctest::Approx(-1.0));
  CHECK(bic.wavenumber == doctest::Approx(M_PI / 3.0).epsilon(1e-14));

  // 2 g sin(K j) / sqrt(4 - Delta^2) = g * {0, 1, 1, 0, -1, -1, 0}
  const double expected[7] = {0.0, 0.1, 0.1, 0.0, -0.1, -0.1, 0.0};
  const double a = bic.alpha.real();
  CHECK(a > 0.0);
  for (int j = 0; j <= 6; ++j) {
    const auto b = bic.beta(lat.leg0_index + j);
    CHECK(b.real() / a == doctest::Approx(expected[j]).epsilon(1e-12));
    CHECK(std::abs(b.imag()) <= 1e-14);
  }
  // nothing outside the span
  CHECK(bic.beta.head(lat.leg0_index).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bic.beta.tail(400 - lat.legN_index(p)).cwiseAbs().maxCoeff() == 0.0);
  // normalized
  CHECK(std::norm(bic.alpha) + bic.beta.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trimerized case puts double weight on the central resonators") {
  SystemParams p = config_b();
  const Lattice lat = centered_lattice(401, p);
  const auto bic = analytic_bic(p, lat);
  const auto beta = [&](int j) { return bic.beta(lat.leg0_index + j); };
  CHECK(std::norm(beta(2)) / std::norm(beta(1)) == doctest::Approx(2.0).epsilon(1e-10));
  for (int j : {0, 4, 8, 12}) CHECK(std::abs(beta(j)) <= 1e-14);
  CHECK(std::norm(beta(6)) / std::norm(beta(5)) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("profile scales linearly with the coupling") {
  const Lattice lat = centered_lattice(401, config_a());
  const auto weak = analytic_bic(config_a(0.1), lat);
  const auto strong = analytic_bic(config_a(1.1), lat);
  const double r_weak = weak.beta(lat.leg0_index + 1).real() / weak.alpha.real();
  const double r_strong = strong.beta(lat.leg0_index + 1).real() / strong.alpha.real();
  CHECK(r_strong / r_weak == doctest::Approx(11.0).epsilon(1e-10));
}

TEST_CASE("analytic state requires the interference condition") {
  SystemParams p = config_a();
  p.phase = 0.0;
  CHECK_THROWS_AS(analytic_bic(p, centered_lattice(401, p)), ConfigError);
}

TEST_CASE("principal-value integral") {
  SUBCASE("vanishes for both reference configurations") {
    CHECK(std::abs(m_integral(config_a())) <= 1e-12);
    CHECK(std::abs(m_integral(config_b())) <= 1e-12);
  }

  SUBCASE("nonzero case agrees with direct principal-value quadrature") {
    SystemParams p = config_a();
    p.leg_separation = 5;
    p.phase = 0.0;
    const auto closed = m_integral(p);
    const double quad = m_integral_quadrature(p);
    CHECK(std::abs(closed.imag()) <= 1e-12);
    CHECK(std::abs(closed.real() - quad) <= 1e-9);
    // KN = 5 pi / 3: pi cos(phi) sin(KN) / sin(K) = -pi
    CHECK(closed.real() == doctest::Approx(-M_PI).epsilon(1e-12));
  }

  SUBCASE("vanishes whenever K N is a multiple of pi") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int tested = 0;
    while (tested < 20) {
      SystemParams p;
      p.leg_separation = 2 + int(unit(rng) * 12.0);
      const int m = 1 + int(unit(rng) * double(p.leg_separation - 1));
      const double k = M_PI * double(m) / p.leg_separation;
      if (std::abs(std::sin(k)) < 0.05) continue;
      p.omega_atom = -2.0 * std::cos(k);
      p.phase = (m % 2 == 0) ? M_PI : 0.0;
      CHECK(std::abs(m_integral(p)) <= 1e-9);
      CHECK(std::abs(m_integral_quadrature(p)) <= 1e-9);
      ++tested;
    }
  }

  SUBCASE("band edge is rejected") {
    SystemParams p = config_a();
    p.omega_atom = -2.0;
    CHECK_THROWS_AS(m_integral(p), gabic::Error);
  }
}

TEST_CASE("verification against the diagonalized chain") {
  SUBCASE("compact support makes the analytic state an exact eigenvector") {
    SystemParams p = config_a();
    const Lattice lat = centered_lattice(401, p);
    const auto h = build_hamiltonian(p, lat);
    const auto cmp = verify_bic(analytic_bic(p, lat), h);
    CHECK(cmp.residual <= 1e-12);
    CHECK_FALSE(cmp.overlap.has_value());
  }

  SUBCASE("overlap with the numeric in-band state") {
    SystemParams p = config_b();
    const Lattice lat = centered_lattice(601, p);
    const auto h = build_hamiltonian(p, lat);
    const auto d = diagonalize(h, p, lat);
    const auto set = classify_states(d);
    REQUIRE(set.bic.has_value());
    const Eigen::VectorXcd numeric = d.states.col(*set.bic);
    const auto cmp = verify_bic(analytic_bic(p, lat), h, &numeric);
    REQUIRE(cmp.overlap.has_value());
    CHECK(*cmp.overlap >= 1.0 - 1e-10);
  }

  SUBCASE("stale profile is flagged by the residual") {
    SystemParams p = config_a();
    const Lattice lat = centered_lattice(401, p);
    const auto bic = analytic_bic(p, lat);
    SystemParams shifted = p;
    shifted.phase = M_PI + 0.3;
    const auto h = build_hamiltonian(shifted, lat);
    CHECK(verify_bic(bic, h).residual > 1e-3);
  }
}
