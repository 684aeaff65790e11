#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cichirp/model.hpp"

// Analysis of tier-0 density matrices: projection onto the tuning coordinate,
// region populations, the quantum yield, and the wavepacket oscillation period.

namespace cichirp {

struct WavepacketFrame {
  double t = 0.0;                 // fs
  std::vector<double> q;          // tuning-coordinate grid
  std::vector<double> g, e1, e2;  // probability density per electronic manifold
  double coverage = 0.0;          // integral of g+e1+e2 over the grid
  bool narrow_grid = false;       // >= 1% of the trace lies beyond the grid edges
};

struct ManifoldSelect {
  bool g = false;
  bool e1 = true;
  bool e2 = true;
};

struct YieldResult {
  double yield = 0.0;   // pop_d / (pop_c + pop_d)
  double pop_c = 0.0;   // time-averaged excited population at q < q_barrier
  double pop_d = 0.0;   // same for q > q_barrier
  double window_lo = 0.0, window_hi = 0.0;  // fs
  double q_barrier = 0.0;
  int n_frames = 0;  // frames inside the window
};

struct QtSeries {
  std::vector<double> t;      // fs
  std::vector<double> value;  // <Q_t> over the excited manifolds
  int skipped = 0;            // frames dropped for lack of excited population
};

// normalized harmonic-oscillator eigenfunction phi_n(q) in the dimensionless
// coordinate, phi_0(q) = pi^{-1/4} exp(-q^2/2)
double hermite_function(int n, double q);

// spatial density per manifold along Q_t, coupling mode traced out; the grid
// must be strictly increasing and span at least [-4, 4]
WavepacketFrame project_qt(const Eigen::MatrixXcd& rho, const VibronicBasis& basis,
                           const std::vector<double>& q_grid, double t = 0.0);

// integral of the selected manifolds' density over [q_lo, q_hi], exact for the
// piecewise-linear interpolant (adjacent regions add up to the full integral)
double region_population(const WavepacketFrame& frame, double q_lo, double q_hi,
                         const ManifoldSelect& manifolds = {});

// time-averaged branching ratio between the q > q_barrier well (D) and the
// q < q_barrier well (C) over the excited manifolds
YieldResult quantum_yield(const std::vector<WavepacketFrame>& frames, double window_lo,
                          double window_hi, double q_barrier);

QtSeries expectation_qt(const std::vector<WavepacketFrame>& frames);

// dominant period of a (possibly nonuniformly sampled) series via windowed
// discrete Fourier transform with parabolic peak refinement
double oscillation_period(const std::vector<double>& t, const std::vector<double>& x);

struct BarrierInfo {
  double q_left_min = 0.0;
  double q_right_min = 0.0;
  double q_barrier = 0.0;
};

// saddle of the lower adiabatic surface at Q_c = 0 between its two minima
BarrierInfo find_barrier(const ModelParams& params);

}  // namespace cichirp
