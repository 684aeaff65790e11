#include "cichirp/bath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cichirp/constants.hpp"

namespace cichirp {

double spectral_density(const BathParams& p, int bath, double omega) {
  const double lam = (bath == 0) ? p.lambda_t : p.lambda_c;
  return 2.0 * lam * p.gamma * omega / (omega * omega + p.gamma * p.gamma);
}

BathDecomposition bath_decomposition(const BathParams& p) {
  if (p.temperature <= 0.0) throw std::runtime_error("ERROR: temperature must be positive");
  if (p.gamma <= 0.0) throw std::runtime_error("ERROR: Drude cutoff gamma must be positive");
  if (p.lambda_t < 0.0 || p.lambda_c < 0.0)
    throw std::runtime_error("ERROR: reorganization energies must be non-negative");
  if (p.n_matsubara < 0) throw std::runtime_error("ERROR: n_matsubara must be >= 0");

  BathDecomposition d;
  d.beta = 1.0 / (kBoltzmannCmPerK * p.temperature);
  d.low_temp_active = (p.low_temp == BathParams::LowTemp::on) ||
                      (p.low_temp == BathParams::LowTemp::automatic && p.n_matsubara <= 1);

  const double cot = std::cos(0.5 * d.beta * p.gamma) / std::sin(0.5 * d.beta * p.gamma);
  for (int k = 1; k <= p.n_matsubara; ++k) {
    const double nuk = 2.0 * std::numbers::pi * k / d.beta;
    if (std::abs(nuk - p.gamma) < 1e-9 * p.gamma)
      throw std::runtime_error(
          "ERROR: Matsubara frequency resonant with gamma; perturb gamma or temperature "
          "slightly to avoid the degenerate pole");
  }

  const double lams[2] = {p.lambda_t, p.lambda_c};
  for (int bath = 0; bath < 2; ++bath) {
    const double lam = lams[bath];
    if (lam == 0.0) continue;  // exact: no coupling, no hierarchy modes
    ExponentialMode m0;
    m0.bath = bath;
    m0.c = lam * p.gamma * std::complex<double>(cot, -1.0);
    m0.nu = p.gamma;
    d.modes.push_back(m0);
    double tail_kept = 0.0;
    for (int k = 1; k <= p.n_matsubara; ++k) {
      const double nuk = 2.0 * std::numbers::pi * k / d.beta;
      ExponentialMode mk;
      mk.bath = bath;
      mk.c = 4.0 * lam * p.gamma * nuk / (d.beta * (nuk * nuk - p.gamma * p.gamma));
      mk.nu = nuk;
      d.modes.push_back(mk);
      tail_kept += mk.c.real() / nuk;
    }
    if (d.low_temp_active) {
      // sum_{k>=1} c_k/nu_k has the closed form 2 lambda/(beta gamma) - lambda cot(beta gamma/2)
      d.delta_r[bath] = 2.0 * lam / (d.beta * p.gamma) - lam * cot - tail_kept;
    }
  }
  return d;
}

}  // namespace cichirp
