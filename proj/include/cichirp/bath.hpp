#pragma once

#include <complex>
#include <vector>

// Drude-Lorentz baths, one per vibrational mode, J(w) = 2 lambda gamma w /
// (w^2 + gamma^2), decomposed into exponentials of the bath correlation
// function C(t) = sum_k c_k exp(-nu_k t):
//   c_0 = lambda gamma (cot(beta gamma / 2) - i),  nu_0 = gamma
//   c_k = 4 lambda gamma nu_k / (beta (nu_k^2 - gamma^2)),  nu_k = 2 pi k / beta
// The Matsubara tail beyond the kept terms can be folded into a time-local
// correction of strength delta_r = sum_{k>K} c_k / nu_k (all real).

namespace cichirp {

struct BathParams {
  double lambda_t = 5.0;     // reorganization energy, tuning-mode bath [1/cm]
  double lambda_c = 5.0;     // reorganization energy, coupling-mode bath [1/cm]
  double gamma = 100.0;      // Drude cutoff [1/cm]
  double temperature = 300;  // [K]
  int n_matsubara = 1;       // Matsubara terms kept per bath (K)

  enum class LowTemp { automatic, on, off };
  LowTemp low_temp = LowTemp::automatic;  // automatic: on for K <= 1
};

struct ExponentialMode {
  int bath = 0;                 // 0 = tuning-mode bath, 1 = coupling-mode bath
  std::complex<double> c;       // amplitude [cm^-2]
  double nu = 0.0;              // decay rate [1/cm]
};

struct BathDecomposition {
  std::vector<ExponentialMode> modes;  // baths with lambda = 0 contribute none
  double delta_r[2] = {0.0, 0.0};      // residual tail strength per bath [1/cm]
  bool low_temp_active = false;
  double beta = 0.0;                   // inverse temperature [cm]
};

// J(w) for the given bath of `p` (0 = tuning, 1 = coupling), for diagnostics.
double spectral_density(const BathParams& p, int bath, double omega);

BathDecomposition bath_decomposition(const BathParams& p);

}  // namespace cichirp
