#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cichirp/constants.hpp"
#include "cichirp/pulse.hpp"

using namespace cichirp;

namespace {

// envelope fluence integral((E_max F)^2 dt) by trapezoid over +-10 T(eta)
double fluence(const PulseParams& p) {
  const double teff = effective_duration(p);
  const double lo = p.t_center - 10.0 * teff;
  const double hi = p.t_center + 10.0 * teff;
  const int n = 20000;
  const double dt = (hi - lo) / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double a = peak_amplitude(p) * envelope(p, lo + k * dt);
    acc += (k == 0 || k == n ? 0.5 : 1.0) * a * a;
  }
  return acc * dt;
}

}  // namespace

TEST_CASE("chirp stretches the envelope and lowers the peak at fixed product") {
  PulseParams p;
  CHECK(effective_duration(p) == doctest::Approx(15.0).epsilon(1e-15));
  p.eta = -10.0;
  CHECK(effective_duration(p) == doctest::Approx(15.0 * std::sqrt(101.0)).epsilon(1e-15));
  CHECK(peak_amplitude(p) == doctest::Approx(60.0 / std::pow(101.0, 0.25)).epsilon(1e-15));

  // E_max^2 T(eta) is the eta-invariant combination
  for (double eta : {-10.0, -3.0, 0.0, 0.5, 5.0, 10.0}) {
    p.eta = eta;
    const double prod = peak_amplitude(p) * peak_amplitude(p) * effective_duration(p);
    CHECK(prod == doctest::Approx(60.0 * 60.0 * 15.0).epsilon(1e-12));
  }
}

TEST_CASE("phase derivative matches the instantaneous frequency") {
  PulseParams p;
  p.eta = -10.0;
  const double h = 1e-4;
  for (double t : {p.t_center - 200.0, p.t_center - 30.0, p.t_center, p.t_center + 55.0,
                   p.t_center + 240.0}) {
    const double fd = (phase(p, t + h) - phase(p, t - h)) / (2.0 * h);
    const double expected = kRadFsPerWavenumber * instantaneous_frequency(p, t);
    CHECK(fd == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("negative chirp sweeps red to blue through the carrier") {
  PulseParams p;
  p.eta = -10.0;
  const double teff = effective_duration(p);
  CHECK(instantaneous_frequency(p, p.t_center - teff) < p.omega0);
  CHECK(instantaneous_frequency(p, p.t_center) == doctest::Approx(p.omega0));
  CHECK(instantaneous_frequency(p, p.t_center + teff) > p.omega0);

  p.eta = 5.0;
  CHECK(instantaneous_frequency(p, p.t_center - teff) > p.omega0);
  CHECK(instantaneous_frequency(p, p.t_center + teff) < p.omega0);
}

TEST_CASE("envelope fluence is independent of the chirp rate") {
  PulseParams p;
  const double reference = std::sqrt(std::numbers::pi) * p.e0 * p.e0 * p.t0;
  for (double eta : {-10.0, -5.0, -1.0, 0.0, 2.0, 5.0, 10.0}) {
    p.eta = eta;
    CHECK(fluence(p) == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("spectral magnitude is chirp-independent and Gaussian") {
  PulseParams p;
  std::vector<double> grid;
  for (int k = -10; k <= 10; ++k) grid.push_back(p.omega0 + 50.0 * k);

  const std::vector<double> flat = spectrum(p, grid);
  // analytic transform of the complex envelope: E0 T0 sqrt(2 pi) exp(-u^2 dw^2 T0^2 / 2)
  const double u = kRadFsPerWavenumber;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dw = u * (grid[i] - p.omega0);
    const double expected =
        p.e0 * p.t0 * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * dw * dw * p.t0 * p.t0);
    CHECK(flat[i] == doctest::Approx(expected).epsilon(1e-7));
  }

  for (double eta : {-10.0, 5.0}) {
    PulseParams chirped = p;
    chirped.eta = eta;
    const std::vector<double> s = spectrum(chirped, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(s[i] == doctest::Approx(flat[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("rotating-frame amplitude carries half the field at the envelope phase") {
  PulseParams p;
  p.eta = -3.0;
  const double d = 0.8;
  for (double t : {20.0, 45.0, 90.0}) {
    const std::complex<double> a = rwa_amplitude(p, d, t);
    CHECK(std::abs(a) == doctest::Approx(0.5 * d * peak_amplitude(p) * envelope(p, t)));
    // a e^{+i psi} must be the real, negative half-field
    const std::complex<double> rot = a * std::exp(std::complex<double>(0.0, phase(p, t)));
    CHECK(rot.real() == doctest::Approx(-0.5 * d * peak_amplitude(p) * envelope(p, t)));
    CHECK(std::abs(rot.imag()) < 1e-12);
  }
}

TEST_CASE("full field is the envelope times the chirped carrier") {
  PulseParams p;
  p.eta = 2.0;
  const double t = 51.3;
  CHECK(field(p, t) ==
        doctest::Approx(peak_amplitude(p) * envelope(p, t) * std::cos(phase(p, t))));
}

TEST_CASE("interaction block connects g to e2 with conserved vibrational labels") {
  ModelParams mp;
  mp.n_t = 3;
  mp.n_c = 2;
  const VibronicBasis b = build_basis(mp);
  PulseParams p;
  const Eigen::MatrixXcd h = interaction_hamiltonian(p, 1.0, b, 40.0);
  CHECK((h - h.adjoint()).norm() < 1e-15);
  const std::complex<double> a = rwa_amplitude(p, 1.0, 40.0);
  CHECK(h(b.index(2, 1, 1), b.index(0, 1, 1)) == a);
  CHECK(std::abs(h(b.index(2, 1, 0), b.index(0, 1, 1))) == 0.0);
  CHECK(std::abs(h(b.index(1, 1, 1), b.index(0, 1, 1))) == 0.0);
}

TEST_CASE("pulse validation") {
  PulseParams p;
  p.t0 = 0.0;
  CHECK_THROWS_AS((void)effective_duration(p), std::runtime_error);
  p.t0 = 15.0;
  p.e0 = -1.0;
  CHECK_THROWS_AS((void)peak_amplitude(p), std::runtime_error);
}
