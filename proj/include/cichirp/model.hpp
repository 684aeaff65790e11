#pragma once

#include <Eigen/Dense>
#include <vector>

// Three-state linear vibronic coupling model: a ground state |g> and two
// excited states |e1>, |e2> sharing a tuning mode Q_t (Condon-active shifts)
// and a coupling mode Q_c (linear interstate coupling).  The two excited
// diabats cross along Q_t; together with the Q_c coupling the crossing is a
// conical intersection.

namespace cichirp {

struct ModelParams {
  double omega_t = 300.0;     // tuning-mode frequency [1/cm]
  double omega_c = 150.0;     // coupling-mode frequency [1/cm]
  double delta1 = -2.357;     // dimensionless displacement of e1 along Q_t
  double delta2 = 2.357;      // dimensionless displacement of e2 along Q_t
  double eps1 = 9000.0;       // e1 electronic origin [1/cm]
  double eps2 = 10000.0;      // e2 electronic origin [1/cm]
  double v0 = 0.0;            // static interstate coupling [1/cm]
  double lambda_cpl = 200.0;  // linear interstate coupling along Q_c [1/cm]
  double dipole = 1.0;        // g<->e2 transition dipole (Condon approximation)
  int n_t = 24;               // tuning-mode basis size
  int n_c = 4;                // coupling-mode basis size

  // intrastate gradients kappa_i = delta_i * omega_t / sqrt(2) [1/cm]
  double kappa1() const;
  double kappa2() const;
};

// Electronic index convention: 0 = g, 1 = e1, 2 = e2.
struct VibronicBasis {
  int n_t = 0;
  int n_c = 0;
  int dim = 0;  // 3 * n_t * n_c

  int index(int e, int nt, int nc) const { return (e * n_t + nt) * n_c + nc; }
  int elec_of(int i) const { return i / (n_t * n_c); }
  int nt_of(int i) const { return (i / n_c) % n_t; }
  int nc_of(int i) const { return i % n_c; }
  int block() const { return n_t * n_c; }  // size of one electronic block
};

enum class Mode { tuning, coupling };

// Which vibrational mode an operator or bath attaches to.
VibronicBasis build_basis(const ModelParams& p);

// Q = (a + a^dag)/sqrt(2) on the requested mode, identity elsewhere.
Eigen::MatrixXcd position_operator(const VibronicBasis& b, Mode m);
// P = i(a^dag - a)/sqrt(2) on the requested mode, identity elsewhere.
Eigen::MatrixXcd momentum_operator(const VibronicBasis& b, Mode m);

// Molecular Hamiltonian [1/cm]:
//   H = |g>h_g<g| + |e1>(eps1 + h_g + kappa1 Q_t)<e1|
//     + |e2>(eps2 + h_g + kappa2 Q_t)<e2|
//     + (|e1>(v0 + lambda_cpl Q_c)<e2| + h.c.),
//   h_g = sum_i (omega_i/2)(P_i^2 + Q_i^2)
Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, const VibronicBasis& b);

// d * (|g><e2| + |e2><g|) (x) identity on both modes (Condon approximation).
Eigen::MatrixXcd dipole_operator(const ModelParams& p, const VibronicBasis& b);

// Crossing of the two excited diabats along Q_t at Q_c = 0:
//   q* = (eps1 - eps2) / (kappa2 - kappa1)
double locate_ci(const ModelParams& p);

struct SurfaceTable {
  std::vector<double> q;       // tuning coordinate grid
  std::vector<double> ground;  // (omega_t/2) q^2
  std::vector<double> lower;   // lower adiabatic excited surface at Q_c = 0
  std::vector<double> upper;   // upper adiabatic excited surface at Q_c = 0
};

SurfaceTable adiabatic_surfaces(const ModelParams& p, const std::vector<double>& qgrid);

// Pure |g,0,0><g,0,0| density matrix.
Eigen::MatrixXcd ground_state(const ModelParams& p, const VibronicBasis& b);

}  // namespace cichirp
