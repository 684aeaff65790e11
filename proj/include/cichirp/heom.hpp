#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cichirp/bath.hpp"
#include "cichirp/hierarchy.hpp"
#include "cichirp/model.hpp"
#include "cichirp/pulse.hpp"

// Hierarchical equations of motion for the vibronic system coupled to Drude
// baths on both modes, driven by the chirped pulse.  Auxiliary density
// operators (ADOs) are unscaled; for multi-index n over the exponential
// modes,
//   d rho_n/dt = -i[H(t), rho_n] - (sum_k n_k nu_k) rho_n
//                - i sum_k [Q_b(k), rho_{n+e_k}]
//                - i sum_k n_k (c_k Q_b(k) rho_{n-e_k} - c_k^* rho_{n-e_k} Q_b(k))
// plus, optionally, the time-local tail correction -delta_r [Q_b,[Q_b, rho_n]]
// per bath.  All quantities are converted to rad/fs internally.

namespace cichirp {

class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, double t_fs)
      : std::runtime_error(what), t(t_fs) {}
  double t;  // simulated time at which propagation was abandoned [fs]
};

struct HeomParams {
  int depth = 4;           // hierarchy truncation tier L
  double dt = 0.02;        // RK4 step [fs]
  double t_end = 2000.0;   // [fs]
  int frame_stride = 100;  // steps between emitted tier-0 frames
  enum class Terminator { zero, markovian };
  Terminator terminator = Terminator::zero;
  int threads = 1;
  bool rwa = true;  // rotating-wave pulse coupling; false uses the full cos form
};

struct PropagationSummary {
  long n_steps = 0;
  double trace_drift = 0.0;  // max |tr rho_0 - 1| observed at frames
  double t_final = 0.0;
};

class HeomPropagator {
 public:
  HeomPropagator(const ModelParams& model, const BathDecomposition& bath,
                 const PulseParams& pulse, const HeomParams& params);

  const HierarchyTable& table() const { return table_; }
  const VibronicBasis& basis() const { return basis_; }
  int n_ados() const { return table_.size(); }
  int dim() const { return basis_.dim; }

  // derivative of the full hierarchy at time t; sizes must match n_ados x dim^2
  std::vector<Eigen::MatrixXcd> rhs(const std::vector<Eigen::MatrixXcd>& ados,
                                    double t) const;

  // propagate from tier-0 initial condition (higher ADOs start at zero);
  // the callback receives (frame_index, t, tier-0 matrix)
  using FrameFn = std::function<void(int, double, const Eigen::MatrixXcd&)>;
  PropagationSummary propagate(const Eigen::MatrixXcd& rho0, const FrameFn& on_frame) const;

  // convenience: collect frames in memory (small problems / tests)
  struct Frame {
    double t;
    Eigen::MatrixXcd rho;
  };
  std::vector<Frame> propagate_collect(const Eigen::MatrixXcd& rho0,
                                       PropagationSummary* summary = nullptr) const;

 private:
  struct BandTerm {
    int offset = 0;                        // couples flat index i with i - offset
    std::vector<double> w;                 // weight of the (i, i-offset) link
    std::complex<double> scale_up{1, 0};   // A(i, i-offset) = scale_up * w[i]
    std::complex<double> scale_dn{1, 0};   // A(i-offset, i) = scale_dn * w[i]
  };

  void rhs_flat(const std::complex<double>* y, double t, std::complex<double>* out,
                std::vector<std::complex<double>>& scratch) const;
  void ado_derivative(const std::complex<double>* y, int a,
                      const BandTerm& field, bool field_active,
                      std::complex<double>* out, std::complex<double>* scratch) const;

  ModelParams model_;
  VibronicBasis basis_;
  BathDecomposition bath_;
  PulseParams pulse_;
  HeomParams params_;
  HierarchyTable table_;

  // static Hamiltonian, converted to rad/fs
  std::vector<double> diag_;             // diagonal of H
  std::vector<BandTerm> h_terms_;        // kappa, lambda_cpl, v0 couplings
  BandTerm q_op_[2];                     // bare Q per bath (dimensionless weights)
  std::vector<double> gamma_tier_;       // sum_k n_k nu_k per ADO [1/fs]
  std::vector<double> nu_fs_;            // per mode [1/fs]
  std::vector<std::complex<double>> c_fs_;  // per mode [1/fs^2]
  double delta_r_fs_[2] = {0.0, 0.0};    // [1/fs]
  std::size_t mat_n_ = 0;                // dim*dim
};

// reference (dense, unoptimized) evaluation of the same generator, used to
// cross-check the banded kernels; h_total in 1/cm, couplings indexed by bath
std::vector<Eigen::MatrixXcd> heom_rhs(const HierarchyTable& table,
                                       const std::vector<Eigen::MatrixXcd>& ados,
                                       const Eigen::MatrixXcd& h_total,
                                       const std::vector<Eigen::MatrixXcd>& coupling_ops,
                                       const std::vector<ExponentialMode>& modes,
                                       const double* delta_r = nullptr);

}  // namespace cichirp
