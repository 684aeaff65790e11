#include "cichirp/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cichirp/constants.hpp"

namespace cichirp {

namespace {
constexpr int kOracleMaxDim = 512;
using cplx = std::complex<double>;
}  // namespace

SchrodingerResult schrodinger_propagate(const Eigen::VectorXcd& psi0,
                                        const std::function<Eigen::MatrixXcd(double)>& h_of_t,
                                        double dt, double t_end, int frame_stride) {
  const long dim = psi0.size();
  if (dim == 0 || dim > kOracleMaxDim)
    throw std::runtime_error("ERROR: oracle propagation limited to dimensions 1..512");
  if (dt <= 0.0) throw std::runtime_error("ERROR: dt must be positive");
  if (frame_stride < 1) throw std::runtime_error("ERROR: frame_stride must be >= 1");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::runtime_error("ERROR: initial state must be normalized");

  const cplx miu(0.0, -kRadFsPerWavenumber);
  auto deriv = [&](const Eigen::VectorXcd& psi, double t) -> Eigen::VectorXcd {
    return miu * (h_of_t(t) * psi);
  };

  SchrodingerResult result;
  Eigen::VectorXcd psi = psi0;
  const long n_steps = static_cast<long>(std::floor(t_end / dt + 1e-9));

  auto emit = [&](double t) {
    const double drift = std::abs(psi.norm() - 1.0);
    result.norm_drift = std::max(result.norm_drift, drift);
    if (drift > 1e-6)
      throw std::runtime_error("ERROR: oracle norm drift exceeded 1e-6");
    result.t.push_back(t);
    result.psi.push_back(psi);
  };

  emit(0.0);
  for (long step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    const Eigen::VectorXcd k1 = deriv(psi, t);
    const Eigen::VectorXcd k2 = deriv(psi + 0.5 * dt * k1, t + 0.5 * dt);
    const Eigen::VectorXcd k3 = deriv(psi + 0.5 * dt * k2, t + 0.5 * dt);
    const Eigen::VectorXcd k4 = deriv(psi + dt * k3, t + dt);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const long done = step + 1;
    if (done % frame_stride == 0 || done == n_steps) emit(static_cast<double>(done) * dt);
  }
  return result;
}

Eigen::MatrixXcd brute_force_thermal_state(const Eigen::MatrixXcd& h, double temperature) {
  if (h.rows() != h.cols() || h.rows() == 0 || h.rows() > kOracleMaxDim)
    throw std::runtime_error("ERROR: thermal state limited to square matrices up to 512");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw std::runtime_error("ERROR: thermal state requires a Hermitian matrix");
  if (temperature <= 0.0)
    throw std::runtime_error("ERROR: temperature must be positive");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ERROR: eigendecomposition failed");
  const double beta = 1.0 / (kBoltzmannCmPerK * temperature);
  const Eigen::VectorXd e = es.eigenvalues();
  const double e_min = e.minCoeff();
  Eigen::VectorXd w = (-beta * (e.array() - e_min)).exp();
  w /= w.sum();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double perturbative_excited_population(const PulseParams& pulse, const ModelParams& model,
                                       double dt) {
  if (dt <= 0.0) throw std::runtime_error("ERROR: dt must be positive");
  const VibronicBasis basis = build_basis(model);
  if (basis.dim > kOracleMaxDim)
    throw std::runtime_error("ERROR: perturbative oracle limited to dimension 512");
  if (pulse.e0 == 0.0) return 0.0;

  const Eigen::MatrixXcd h = build_hamiltonian(model, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ERROR: eigendecomposition failed");

  // the electronic ground block is uncoupled, so |g,0,0> is an exact
  // eigenstate and the pulse (in the rotating-wave form) feeds only |e2,nt,nc>
  // amplitudes; from |g,0,0> that is the single source component |e2,0,0>
  const int i_src = basis.index(2, 0, 0);
  const double e_init = h(basis.index(0, 0, 0), basis.index(0, 0, 0)).real();

  const double u = kRadFsPerWavenumber;
  const double t_end = pulse.t_center + 10.0 * effective_duration(pulse);
  const long n = static_cast<long>(std::ceil(t_end / dt));

  // c_f = -i u * integral of <f|H_F(t)|g00> exp(i u (E_f - E_init) t) dt,
  // trapezoidal in t; <f|H_F(t)|g00> = conj(V[i_src, f]) * a(t)
  std::vector<cplx> amp(static_cast<std::size_t>(n) + 1);
  for (long s = 0; s <= n; ++s)
    amp[static_cast<std::size_t>(s)] = rwa_amplitude(pulse, model.dipole, s * dt);

  const int block = basis.block();
  double total = 0.0;
  for (int f = 0; f < basis.dim; ++f) {
    // skip ground-block eigenstates (block-diagonal H keeps them pure)
    double exc_weight = 0.0;
    for (int i = block; i < basis.dim; ++i) exc_weight += std::norm(es.eigenvectors()(i, f));
    if (exc_weight < 0.5) continue;
    const cplx overlap = std::conj(es.eigenvectors()(i_src, f));
    if (std::abs(overlap) < 1e-300) continue;
    const double w_fs = u * (es.eigenvalues()(f) - e_init);
    cplx acc(0.0, 0.0);
    for (long s = 0; s <= n; ++s) {
      const double t = s * dt;
      const cplx term = amp[static_cast<std::size_t>(s)] * std::polar(1.0, w_fs * t);
      acc += (s == 0 || s == n) ? 0.5 * term : term;
    }
    const cplx c = cplx(0.0, -u) * overlap * acc * dt;
    total += std::norm(c);
  }
  return total;
}

}  // namespace cichirp
