#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "cichirp/model.hpp"

using namespace cichirp;

TEST_CASE("intrastate gradients follow from the dimensionless displacements") {
  ModelParams p;
  // kappa = delta * omega_t / sqrt(2) with delta = -/+ 2.357, omega_t = 300
  CHECK(p.kappa1() == doctest::Approx(-499.99520497700775).epsilon(1e-14));
  CHECK(p.kappa2() == doctest::Approx(+499.99520497700775).epsilon(1e-14));
}

TEST_CASE("diabatic crossing sits at q = -1 for the 1000/cm gap") {
  ModelParams p;
  const double qx = locate_ci(p);
  CHECK(qx == doctest::Approx((p.eps1 - p.eps2) / (p.kappa2() - p.kappa1())).epsilon(1e-14));
  CHECK(std::abs(qx + 1.0) < 1e-3);

  // parallel diabats have no crossing
  ModelParams flat = p;
  flat.delta1 = flat.delta2 = 1.0;
  CHECK_THROWS_AS((void)locate_ci(flat), std::runtime_error);
}

TEST_CASE("basis indexing round-trips") {
  ModelParams p;
  p.n_t = 5;
  p.n_c = 3;
  const VibronicBasis b = build_basis(p);
  CHECK(b.dim == 45);
  for (int i = 0; i < b.dim; ++i) {
    CHECK(b.index(b.elec_of(i), b.nt_of(i), b.nc_of(i)) == i);
  }
}

TEST_CASE("ladder operators satisfy the truncated commutation relations") {
  ModelParams p;
  p.n_t = 8;
  p.n_c = 4;
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd q = position_operator(b, Mode::tuning);
  const Eigen::MatrixXcd pk = momentum_operator(b, Mode::tuning);
  CHECK((q - q.adjoint()).norm() < 1e-14);
  CHECK((pk - pk.adjoint()).norm() < 1e-14);

  // [Q, P] = i except on the truncation edge nt = n_t - 1
  const Eigen::MatrixXcd comm = q * pk - pk * q;
  for (int i = 0; i < b.dim; ++i) {
    const std::complex<double> expected =
        (b.nt_of(i) == p.n_t - 1) ? std::complex<double>(0.0, 1.0 - p.n_t)
                                  : std::complex<double>(0.0, 1.0);
    CHECK(std::abs(comm(i, i) - expected) < 1e-12);
  }
}

TEST_CASE("hamiltonian is hermitian with the oscillator ladder on the ground block") {
  ModelParams p;
  p.n_t = 6;
  p.n_c = 3;
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd h = build_hamiltonian(p, b);
  CHECK((h - h.adjoint()).norm() < 1e-9);

  for (int nt = 0; nt < p.n_t; ++nt) {
    for (int nc = 0; nc < p.n_c; ++nc) {
      const int i = b.index(0, nt, nc);
      const double expected = p.omega_t * (nt + 0.5) + p.omega_c * (nc + 0.5);
      CHECK(h(i, i).real() == doctest::Approx(expected).epsilon(1e-13));
      // ground block is uncoupled from the excited manifolds
      for (int j = b.block(); j < b.dim; ++j) {
        CHECK(std::abs(h(i, j)) == 0.0);
      }
    }
  }
}

TEST_CASE("lowest e1 level matches the displaced-oscillator energy") {
  ModelParams p;
  p.n_t = 30;
  p.n_c = 2;
  p.lambda_cpl = 0.0;  // decouple the states so each block is exactly solvable
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd h = build_hamiltonian(p, b);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      h.block(b.block(), b.block(), b.block(), b.block()));
  const double expected = p.eps1 + 0.5 * p.omega_t + 0.5 * p.omega_c -
                          p.kappa1() * p.kappa1() / (2.0 * p.omega_t);
  CHECK(es.eigenvalues()(0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("interstate coupling appears only between e1 and e2") {
  ModelParams p;
  p.n_t = 4;
  p.n_c = 3;
  p.v0 = 42.0;
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd h = build_hamiltonian(p, b);

  // v0 couples identical vibrational labels; lambda_cpl shifts nc by one
  const int i = b.index(1, 2, 1);
  CHECK(h(i, b.index(2, 2, 1)).real() == doctest::Approx(42.0));
  CHECK(h(i, b.index(2, 2, 2)).real() ==
        doctest::Approx(p.lambda_cpl * std::sqrt((1.0 + 1.0) / 2.0)));
  CHECK(h(i, b.index(2, 2, 0)).real() ==
        doctest::Approx(p.lambda_cpl * std::sqrt(1.0 / 2.0)));
  CHECK(std::abs(h(b.index(1, 2, 1), b.index(1, 2, 2))) == 0.0);
}

TEST_CASE("adiabatic surfaces bracket the diabats and touch at the intersection") {
  ModelParams p;
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-4.0 + i * 0.02);
  const SurfaceTable s = adiabatic_surfaces(p, grid);

  REQUIRE(s.q.size() == grid.size());
  const double qx = locate_ci(p);
  double gap_at_ci = 1e300;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    CHECK(s.lower[i] <= s.upper[i] + 1e-12);
    CHECK(s.ground[i] == doctest::Approx(0.5 * p.omega_t * s.q[i] * s.q[i]).epsilon(1e-12));
    if (std::abs(s.q[i] - qx) < 0.011) {
      gap_at_ci = std::min(gap_at_ci, s.upper[i] - s.lower[i]);
    }
  }
  // v0 = 0: true intersection, the gap closes
  CHECK(gap_at_ci < 12.0);

  // finite v0 opens an avoided crossing of 2 v0
  ModelParams avoided = p;
  avoided.v0 = 80.0;
  const SurfaceTable s2 = adiabatic_surfaces(avoided, {qx});
  CHECK(s2.upper[0] - s2.lower[0] == doctest::Approx(160.0).epsilon(1e-10));
}

TEST_CASE("lower-surface minima sit near -5/3 and +5/3") {
  ModelParams p;
  std::vector<double> grid;
  for (int i = 0; i <= 8000; ++i) grid.push_back(-4.0 + i * 0.001);
  const SurfaceTable s = adiabatic_surfaces(p, grid);

  // analytic minima of eps_i + kappa_i q + (omega_t/2) q^2 at -kappa_i/omega_t
  const double left = -p.kappa2() / p.omega_t;  // the e2 diabat slopes down to q < 0
  int ileft = 0, iright = 0;
  for (std::size_t i = 1; i < s.q.size(); ++i) {
    if (s.q[i] < -1.0 && s.lower[i] < s.lower[ileft]) ileft = static_cast<int>(i);
    if (s.q[i] > -1.0 && (iright == 0 || s.lower[i] < s.lower[iright]))
      iright = static_cast<int>(i);
  }
  CHECK(std::abs(s.q[ileft] - left) < 2e-3);
  CHECK(std::abs(s.q[iright] - (-p.kappa1() / p.omega_t)) < 2e-3);
  CHECK(s.q[ileft] == doctest::Approx(-5.0 / 3.0).epsilon(2e-3));
  CHECK(s.q[iright] == doctest::Approx(5.0 / 3.0).epsilon(2e-3));
}

TEST_CASE("transition dipole connects g and e2 only") {
  ModelParams p;
  p.n_t = 3;
  p.n_c = 2;
  p.dipole = 0.75;
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd d = dipole_operator(p, b);
  CHECK((d - d.adjoint()).norm() == 0.0);
  CHECK(d(b.index(0, 1, 1), b.index(2, 1, 1)).real() == doctest::Approx(0.75));
  CHECK(std::abs(d(b.index(0, 1, 1), b.index(1, 1, 1))) == 0.0);
  CHECK(std::abs(d(b.index(0, 1, 1), b.index(2, 0, 1))) == 0.0);
  CHECK(d.diagonal().norm() == 0.0);
}

TEST_CASE("ground state is the bare oscillator vacuum on g") {
  ModelParams p;
  const VibronicBasis b = build_basis(p);
  const Eigen::MatrixXcd rho = ground_state(p, b);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
  CHECK(rho(b.index(0, 0, 0), b.index(0, 0, 0)).real() == doctest::Approx(1.0));
  CHECK((rho.cwiseAbs().sum() - 1.0) < 1e-15);
}

TEST_CASE("parameter validation rejects unusable bases") {
  ModelParams p;
  p.n_t = 1;
  CHECK_THROWS_AS((void)build_basis(p), std::runtime_error);
  p.n_t = 24;
  p.omega_t = -1.0;
  CHECK_THROWS_AS((void)build_basis(p), std::runtime_error);
}
