#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cichirp/model.hpp"

// Linearly chirped Gaussian pulse, parametrized by the dimensionless chirp
// rate eta.  Chirping stretches the envelope, T(eta) = T0 sqrt(1 + eta^2),
// and lowers the peak, E_max = e0 / (1 + eta^2)^(1/4), at fixed fluence;
// the spectral magnitude is independent of eta (phase-only shaping).

namespace cichirp {

struct PulseParams {
  double e0 = 60.0;        // peak field amplitude at eta = 0 [field units]
  double t0 = 15.0;        // transform-limited duration T0 [fs]
  double omega0 = 10000.0; // carrier frequency [1/cm]
  double eta = 0.0;        // dimensionless chirp rate
  double t_center = 45.0;  // envelope center [fs]
};

// T(eta) = T0 sqrt(1 + eta^2) [fs]
double effective_duration(const PulseParams& p);

// E_max = e0 / (1 + eta^2)^(1/4)
double peak_amplitude(const PulseParams& p);

// Gaussian envelope F = exp(-tau^2 / (2 T(eta)^2)), tau = t - t_center
double envelope(const PulseParams& p, double t);

// temporal phase Psi(tau) = u*omega0*tau - eta tau^2 / (2 T0^2 (1+eta^2)) [rad]
double phase(const PulseParams& p, double t);

// real field E(t) = E_max F(t) cos(Psi(t))
double field(const PulseParams& p, double t);

// d Psi / d tau converted to a wavenumber [1/cm]; below omega0 on the leading
// edge for eta < 0 (red arrives first), above it on the trailing edge
double instantaneous_frequency(const PulseParams& p, double t);

// |integral of E_max F(tau) exp(i Psi(tau)) exp(-i u omega tau) dtau| for each
// requested omega [1/cm]; discrete transform of the sampled complex envelope
std::vector<double> spectrum(const PulseParams& p, const std::vector<double>& omega_cm);

// coefficient of |e2><g| in the rotating-wave coupling:
//   a(t) = -(dipole * E_max * F(t) / 2) * exp(-i Psi(t))   [1/cm]
std::complex<double> rwa_amplitude(const PulseParams& p, double dipole, double t);

// H_F(t) = a(t) |e2><g| (x) 1  +  h.c.   [1/cm]
Eigen::MatrixXcd interaction_hamiltonian(const PulseParams& p, double dipole,
                                         const VibronicBasis& b, double t);

}  // namespace cichirp
