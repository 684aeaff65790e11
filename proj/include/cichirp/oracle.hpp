#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cichirp/model.hpp"
#include "cichirp/pulse.hpp"

// Reference implementations used only by tests and convergence studies.  These
// deliberately share no propagation code with the hierarchy solver.

namespace cichirp {

struct SchrodingerResult {
  std::vector<double> t;               // fs, at frame cadence
  std::vector<Eigen::VectorXcd> psi;   // state at each frame time
  double norm_drift = 0.0;             // max | ||psi|| - 1 | observed
};

// RK4 on i dpsi/dt = H(t) psi with H in 1/cm; norm drift is reported, not
// corrected, and drift beyond 1e-6 aborts
SchrodingerResult schrodinger_propagate(const Eigen::VectorXcd& psi0,
                                        const std::function<Eigen::MatrixXcd(double)>& h_of_t,
                                        double dt, double t_end, int frame_stride = 1);

// exp(-beta H)/Z by full diagonalization; h in 1/cm, temperature in K
Eigen::MatrixXcd brute_force_thermal_state(const Eigen::MatrixXcd& h, double temperature);

// first-order time-dependent perturbation theory population of the excited
// manifolds after the pulse, starting from the vibronic ground state
double perturbative_excited_population(const PulseParams& pulse, const ModelParams& model,
                                       double dt = 0.02);

}  // namespace cichirp
