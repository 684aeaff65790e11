#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cichirp/constants.hpp"
#include "cichirp/heom.hpp"
#include "cichirp/model.hpp"

using namespace cichirp;

namespace {

std::vector<Eigen::MatrixXcd> random_ados(int n, int dim, unsigned seed) {
  std::mt19937 gen(seed);
  // raw draws keep the stream identical across standard libraries
  auto u = [&gen]() { return static_cast<double>(gen()) / 4294967296.0 - 0.5; };
  std::vector<Eigen::MatrixXcd> out(n, Eigen::MatrixXcd(dim, dim));
  for (auto& m : out) {
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < dim; ++i) m(i, j) = std::complex<double>(u(), u());
    }
  }
  return out;
}

double max_diff(const std::vector<Eigen::MatrixXcd>& a, const std::vector<Eigen::MatrixXcd>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return d;
}

double max_norm(const std::vector<Eigen::MatrixXcd>& a) {
  double d = 0.0;
  for (const auto& m : a) d = std::max(d, m.cwiseAbs().maxCoeff());
  return d;
}

ModelParams small_model() {
  ModelParams m;
  m.n_t = 3;
  m.n_c = 2;
  m.v0 = 35.0;
  return m;
}

}  // namespace

TEST_CASE("banded kernel agrees with the dense reference generator") {
  const ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);

  BathParams bp;
  bp.n_matsubara = 1;
  bp.low_temp = BathParams::LowTemp::on;
  const BathDecomposition bath = bath_decomposition(bp);
  REQUIRE(bath.modes.size() == 4);

  PulseParams pulse;  // resonant on the bare eps2
  HeomParams hp;
  hp.depth = 2;
  hp.dt = 0.02;

  const double t = 30.0;  // inside the pulse

  for (bool rwa : {true, false}) {
    hp.rwa = rwa;
    const HeomPropagator prop(m, bath, pulse, hp);
    REQUIRE(prop.n_ados() == 15);

    const auto ados = random_ados(prop.n_ados(), b.dim, 1234);
    const auto fast = prop.rhs(ados, t);

    Eigen::MatrixXcd h_total = build_hamiltonian(m, b);
    if (rwa) {
      h_total += interaction_hamiltonian(pulse, m.dipole, b, t);
    } else {
      h_total += field(pulse, t) * dipole_operator(m, b);
    }
    const std::vector<Eigen::MatrixXcd> q_ops = {position_operator(b, Mode::tuning),
                                                 position_operator(b, Mode::coupling)};
    const auto slow = heom_rhs(prop.table(), ados, h_total, q_ops, bath.modes, bath.delta_r);

    CHECK(max_diff(fast, slow) < 1e-12 * max_norm(slow));
  }
}

TEST_CASE("kernel and reference also agree without the tail correction") {
  const ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);
  BathParams bp;
  bp.n_matsubara = 2;  // automatic low-temp policy leaves delta_r off here
  const BathDecomposition bath = bath_decomposition(bp);
  CHECK_FALSE(bath.low_temp_active);

  PulseParams pulse;
  HeomParams hp;
  hp.depth = 1;
  hp.dt = 0.02;
  const HeomPropagator prop(m, bath, pulse, hp);

  const auto ados = random_ados(prop.n_ados(), b.dim, 77);
  const auto fast = prop.rhs(ados, 45.0);
  const Eigen::MatrixXcd h_total =
      build_hamiltonian(m, b) + interaction_hamiltonian(pulse, m.dipole, b, 45.0);
  const std::vector<Eigen::MatrixXcd> q_ops = {position_operator(b, Mode::tuning),
                                               position_operator(b, Mode::coupling)};
  const auto slow = heom_rhs(prop.table(), ados, h_total, q_ops, bath.modes, bath.delta_r);
  CHECK(max_diff(fast, slow) < 1e-12 * max_norm(slow));
}

TEST_CASE("closed system reduces to the bare commutator") {
  ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);
  BathParams bp;
  bp.lambda_t = 0.0;
  bp.lambda_c = 0.0;
  const BathDecomposition bath = bath_decomposition(bp);

  PulseParams pulse;
  HeomParams hp;
  hp.dt = 0.02;
  const HeomPropagator prop(m, bath, pulse, hp);
  REQUIRE(prop.n_ados() == 1);

  const auto ados = random_ados(1, b.dim, 5);
  const auto got = prop.rhs(ados, 42.0);

  const Eigen::MatrixXcd h =
      kRadFsPerWavenumber *
      (build_hamiltonian(m, b) + interaction_hamiltonian(pulse, m.dipole, b, 42.0));
  const Eigen::MatrixXcd expected =
      std::complex<double>(0.0, -1.0) * (h * ados[0] - ados[0] * h);
  CHECK((got[0] - expected).cwiseAbs().maxCoeff() < 1e-13 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("an eigenstate of the dark closed system is stationary") {
  ModelParams m = small_model();
  m.v0 = 0.0;
  const VibronicBasis b = build_basis(m);
  BathParams bp;
  bp.lambda_t = 0.0;
  bp.lambda_c = 0.0;
  PulseParams pulse;
  pulse.e0 = 0.0;
  HeomParams hp;
  hp.dt = 0.02;
  hp.t_end = 2.0;
  hp.frame_stride = 100;
  const HeomPropagator prop(m, bath_decomposition(bp), pulse, hp);

  const Eigen::MatrixXcd rho0 = ground_state(m, b);
  PropagationSummary sum;
  const auto frames = prop.propagate_collect(rho0, &sum);
  REQUIRE(!frames.empty());
  CHECK((frames.back().rho - rho0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(sum.trace_drift < 1e-14);
}

TEST_CASE("baths move vibrations but never electronic population without a field") {
  ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);
  BathParams bp;  // both baths on
  const BathDecomposition bath = bath_decomposition(bp);
  PulseParams pulse;
  pulse.e0 = 0.0;
  HeomParams hp;
  hp.depth = 2;
  hp.dt = 0.05;
  hp.t_end = 40.0;
  hp.frame_stride = 100;
  const HeomPropagator prop(m, bath, pulse, hp);

  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  rho0(b.index(0, 0, 0), b.index(0, 0, 0)) = 0.5;
  rho0(b.index(1, 1, 0), b.index(1, 1, 0)) = 0.3;
  rho0(b.index(2, 0, 1), b.index(2, 0, 1)) = 0.2;

  const auto frames = prop.propagate_collect(rho0);
  REQUIRE(frames.size() >= 2);
  const int blk = b.block();
  for (const auto& f : frames) {
    const double g = f.rho.block(0, 0, blk, blk).trace().real();
    const double exc = f.rho.block(blk, blk, 2 * blk, 2 * blk).trace().real();
    CHECK(g == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(exc == doctest::Approx(0.5).epsilon(1e-10));
  }

  // interstate coupling does shuffle e1 <-> e2
  double moved = 0.0;
  for (const auto& f : frames) {
    moved = std::max(moved,
                     std::abs(f.rho.block(blk, blk, blk, blk).trace().real() - 0.3));
  }
  CHECK(moved > 1e-6);
}

TEST_CASE("electronic populations and densities are invariant under an energy shift") {
  ModelParams lifted = small_model();
  lifted.n_t = 4;
  PulseParams pl;
  pl.t0 = 3.0;
  pl.t_center = 10.0;
  pl.omega0 = lifted.eps2;

  ModelParams grounded = lifted;
  grounded.eps1 -= 9000.0;
  grounded.eps2 -= 9000.0;
  PulseParams pg = pl;
  pg.omega0 -= 9000.0;

  BathParams bp;
  bp.n_matsubara = 0;
  const BathDecomposition bath = bath_decomposition(bp);

  HeomParams hp;
  hp.depth = 2;
  hp.dt = 0.01;
  hp.t_end = 30.0;
  hp.frame_stride = 500;

  const VibronicBasis b = build_basis(lifted);
  const HeomPropagator prop_l(lifted, bath, pl, hp);
  const HeomPropagator prop_g(grounded, bath, pg, hp);
  const auto fl = prop_l.propagate_collect(ground_state(lifted, b));
  const auto fg = prop_g.propagate_collect(ground_state(grounded, b));
  REQUIRE(fl.size() == fg.size());

  double excited = 0.0;
  for (std::size_t i = 0; i < fl.size(); ++i) {
    const Eigen::VectorXd dl = fl[i].rho.diagonal().real();
    const Eigen::VectorXd dg = fg[i].rho.diagonal().real();
    CHECK((dl - dg).cwiseAbs().maxCoeff() < 1e-9);
    excited = std::max(excited, dl.tail(2 * b.block()).sum());
  }
  CHECK(excited > 1e-4);  // the short pulse really moved population
}

TEST_CASE("propagation is bitwise deterministic and thread-count independent") {
  const ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);
  BathParams bp;
  bp.n_matsubara = 1;
  const BathDecomposition bath = bath_decomposition(bp);
  PulseParams pulse;
  HeomParams hp;
  hp.depth = 2;
  hp.dt = 0.02;
  hp.t_end = 4.0;
  hp.frame_stride = 20;

  const HeomPropagator one(m, bath, pulse, hp);
  hp.threads = 3;
  const HeomPropagator three(m, bath, pulse, hp);

  const Eigen::MatrixXcd rho0 = ground_state(m, b);
  const auto fa = one.propagate_collect(rho0);
  const auto fb = one.propagate_collect(rho0);
  const auto fc = three.propagate_collect(rho0);
  REQUIRE(fa.size() == fb.size());
  REQUIRE(fa.size() == fc.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    CHECK((fa[i].rho - fb[i].rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK((fa[i].rho - fc[i].rho).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("markovian closure is wired and preserves the trace") {
  const ModelParams m = small_model();
  const VibronicBasis b = build_basis(m);
  BathParams bp;
  bp.n_matsubara = 1;
  const BathDecomposition bath = bath_decomposition(bp);
  PulseParams pulse;
  HeomParams hp;
  hp.depth = 1;
  hp.dt = 0.02;
  hp.t_end = 10.0;
  hp.frame_stride = 100;

  const HeomPropagator open_end(m, bath, pulse, hp);
  hp.terminator = HeomParams::Terminator::markovian;
  const HeomPropagator closed_end(m, bath, pulse, hp);

  const Eigen::MatrixXcd rho0 = ground_state(m, b);
  PropagationSummary sum;
  const auto fa = open_end.propagate_collect(rho0);
  const auto fb = closed_end.propagate_collect(rho0, &sum);
  CHECK(sum.trace_drift < 1e-10);
  CHECK((fa.back().rho - fb.back().rho).cwiseAbs().maxCoeff() > 1e-13);
}

TEST_CASE("step-size guards reject unresolvable rates upfront") {
  const ModelParams m = small_model();
  BathParams bp;
  bp.n_matsubara = 1;
  const BathDecomposition bath = bath_decomposition(bp);

  PulseParams dark;
  dark.e0 = 0.0;
  HeomParams hp;
  hp.dt = 10.0;  // cannot resolve the first Matsubara decay
  CHECK_THROWS_AS(HeomPropagator(m, bath, dark, hp), std::runtime_error);

  PulseParams lit;
  hp.dt = 3.0;  // cannot resolve the carrier
  CHECK_THROWS_AS(HeomPropagator(m, bath, lit, hp), std::runtime_error);
}

TEST_CASE("rhs validates the hierarchy layout") {
  const ModelParams m = small_model();
  BathParams bp;
  const BathDecomposition bath = bath_decomposition(bp);
  PulseParams pulse;
  HeomParams hp;
  hp.depth = 1;
  hp.dt = 0.02;
  const HeomPropagator prop(m, bath, pulse, hp);
  auto ados = random_ados(prop.n_ados() - 1, prop.dim(), 3);
  CHECK_THROWS_AS((void)prop.rhs(ados, 0.0), std::runtime_error);
}

TEST_CASE("initial condition must be a unit-trace matrix of the right size") {
  const ModelParams m = small_model();
  BathParams bp;
  const BathDecomposition bath = bath_decomposition(bp);
  PulseParams pulse;
  HeomParams hp;
  hp.depth = 1;
  hp.dt = 0.02;
  hp.t_end = 1.0;
  const HeomPropagator prop(m, bath, pulse, hp);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(prop.dim(), prop.dim());
  bad(0, 0) = 2.0;  // trace 2
  CHECK_THROWS_AS(prop.propagate_collect(bad), std::runtime_error);
  CHECK_THROWS_AS(prop.propagate_collect(Eigen::MatrixXcd::Zero(3, 3)), std::runtime_error);
}
