#include "cichirp/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cichirp/constants.hpp"

namespace cichirp {

namespace {

void validate(const PulseParams& p) {
  if (p.t0 <= 0.0) throw std::runtime_error("ERROR: pulse duration t0 must be positive");
  if (p.e0 < 0.0) throw std::runtime_error("ERROR: pulse amplitude e0 must be non-negative");
}

}  // namespace

double effective_duration(const PulseParams& p) {
  validate(p);
  return p.t0 * std::sqrt(1.0 + p.eta * p.eta);
}

double peak_amplitude(const PulseParams& p) {
  validate(p);
  return p.e0 / std::pow(1.0 + p.eta * p.eta, 0.25);
}

double envelope(const PulseParams& p, double t) {
  const double tau = t - p.t_center;
  const double teff = effective_duration(p);
  return std::exp(-tau * tau / (2.0 * teff * teff));
}

double phase(const PulseParams& p, double t) {
  validate(p);
  const double tau = t - p.t_center;
  const double chirp = p.eta / (2.0 * p.t0 * p.t0 * (1.0 + p.eta * p.eta));
  return kRadFsPerWavenumber * p.omega0 * tau - chirp * tau * tau;
}

double field(const PulseParams& p, double t) {
  return peak_amplitude(p) * envelope(p, t) * std::cos(phase(p, t));
}

double instantaneous_frequency(const PulseParams& p, double t) {
  validate(p);
  const double tau = t - p.t_center;
  const double rate = p.eta / (p.t0 * p.t0 * (1.0 + p.eta * p.eta));  // [rad/fs^2]
  return p.omega0 - rate * tau / kRadFsPerWavenumber;
}

std::vector<double> spectrum(const PulseParams& p, const std::vector<double>& omega_cm) {
  validate(p);
  if (omega_cm.empty()) throw std::runtime_error("ERROR: empty frequency grid");

  const double teff = effective_duration(p);
  const double emax = peak_amplitude(p);
  const double half_window = 8.0 * teff;

  // highest beat frequency between the envelope phase and any requested omega
  double w_hi = 0.0;
  for (const double w : omega_cm) w_hi = std::max(w_hi, std::abs(w));
  const double chirp_rate = std::abs(p.eta) / (p.t0 * p.t0 * (1.0 + p.eta * p.eta));
  const double rate_max = kRadFsPerWavenumber * (w_hi + p.omega0) + chirp_rate * half_window;

  // >= 16 samples per fastest oscillation across the window
  const double dt_needed = std::numbers::pi / (8.0 * std::max(rate_max, 1e-12));
  const auto n_samples = static_cast<long>(std::ceil(2.0 * half_window / dt_needed)) + 1;
  if (n_samples > (1L << 22))
    throw std::runtime_error("ERROR: spectrum grid undersampled; requested frequencies "
                             "would need more than 2^22 field samples");
  const long n = std::max(n_samples, 512L);
  const double dt = 2.0 * half_window / static_cast<double>(n - 1);

  std::vector<std::complex<double>> env(n);
  for (long k = 0; k < n; ++k) {
    const double tau = -half_window + dt * static_cast<double>(k);
    const double t = p.t_center + tau;
    env[k] = emax * envelope(p, t) * std::exp(std::complex<double>(0.0, phase(p, t)));
  }

  std::vector<double> out;
  out.reserve(omega_cm.size());
  for (const double w : omega_cm) {
    const double wu = kRadFsPerWavenumber * w;
    std::complex<double> acc = 0.0;
    for (long k = 0; k < n; ++k) {
      const double tau = -half_window + dt * static_cast<double>(k);
      const double weight = (k == 0 || k == n - 1) ? 0.5 : 1.0;  // trapezoid
      acc += weight * env[k] * std::exp(std::complex<double>(0.0, -wu * tau));
    }
    out.push_back(std::abs(acc) * dt);
  }
  return out;
}

std::complex<double> rwa_amplitude(const PulseParams& p, double dipole, double t) {
  const double mag = -0.5 * dipole * peak_amplitude(p) * envelope(p, t);
  return mag * std::exp(std::complex<double>(0.0, -phase(p, t)));
}

Eigen::MatrixXcd interaction_hamiltonian(const PulseParams& p, double dipole,
                                         const VibronicBasis& b, double t) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  const std::complex<double> a = rwa_amplitude(p, dipole, t);
  for (int nt = 0; nt < b.n_t; ++nt) {
    for (int nc = 0; nc < b.n_c; ++nc) {
      const int ig = b.index(0, nt, nc);
      const int ie = b.index(2, nt, nc);
      h(ie, ig) = a;
      h(ig, ie) = std::conj(a);
    }
  }
  return h;
}

}  // namespace cichirp
