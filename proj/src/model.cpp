#include "cichirp/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cichirp {

namespace {

constexpr int kMaxDimension = 8192;

// single-mode ladder factor <n|Q|n-1> = sqrt(n/2)
double qelem(int n) { return std::sqrt(0.5 * n); }

}  // namespace

double ModelParams::kappa1() const { return delta1 * omega_t / std::sqrt(2.0); }
double ModelParams::kappa2() const { return delta2 * omega_t / std::sqrt(2.0); }

VibronicBasis build_basis(const ModelParams& p) {
  if (p.n_t < 2 || p.n_c < 2)
    throw std::runtime_error("ERROR: basis requires n_t >= 2 and n_c >= 2");
  if (3 * p.n_t * p.n_c > kMaxDimension)
    throw std::runtime_error("ERROR: basis dimension 3*n_t*n_c exceeds limit " +
                             std::to_string(kMaxDimension));
  if (p.omega_t <= 0.0 || p.omega_c <= 0.0)
    throw std::runtime_error("ERROR: mode frequencies must be positive");
  VibronicBasis b;
  b.n_t = p.n_t;
  b.n_c = p.n_c;
  b.dim = 3 * p.n_t * p.n_c;
  return b;
}

Eigen::MatrixXcd position_operator(const VibronicBasis& b, Mode m) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  const int stride = (m == Mode::tuning) ? b.n_c : 1;
  const int levels = (m == Mode::tuning) ? b.n_t : b.n_c;
  for (int i = 0; i < b.dim; ++i) {
    const int n = (m == Mode::tuning) ? b.nt_of(i) : b.nc_of(i);
    if (n + 1 < levels) {
      q(i + stride, i) = qelem(n + 1);
      q(i, i + stride) = qelem(n + 1);
    }
  }
  return q;
}

Eigen::MatrixXcd momentum_operator(const VibronicBasis& b, Mode m) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  const int stride = (m == Mode::tuning) ? b.n_c : 1;
  const int levels = (m == Mode::tuning) ? b.n_t : b.n_c;
  const std::complex<double> im(0.0, 1.0);
  for (int i = 0; i < b.dim; ++i) {
    const int n = (m == Mode::tuning) ? b.nt_of(i) : b.nc_of(i);
    if (n + 1 < levels) {
      p(i + stride, i) = im * qelem(n + 1);   // <n+1|P|n> = i sqrt((n+1)/2)
      p(i, i + stride) = -im * qelem(n + 1);
    }
  }
  return p;
}

Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, const VibronicBasis& b) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  const double kap[3] = {0.0, p.kappa1(), p.kappa2()};
  const double eps[3] = {0.0, p.eps1, p.eps2};
  for (int e = 0; e < 3; ++e) {
    for (int nt = 0; nt < b.n_t; ++nt) {
      for (int nc = 0; nc < b.n_c; ++nc) {
        const int i = b.index(e, nt, nc);
        h(i, i) = eps[e] + p.omega_t * (nt + 0.5) + p.omega_c * (nc + 0.5);
        if (e > 0 && nt + 1 < b.n_t) {
          const int j = b.index(e, nt + 1, nc);
          h(j, i) += kap[e] * qelem(nt + 1);
          h(i, j) += kap[e] * qelem(nt + 1);
        }
      }
    }
  }
  // interstate coupling |e1>(v0 + lambda_cpl Q_c)<e2| + h.c.
  for (int nt = 0; nt < b.n_t; ++nt) {
    for (int nc = 0; nc < b.n_c; ++nc) {
      const int i1 = b.index(1, nt, nc);
      const int i2 = b.index(2, nt, nc);
      h(i1, i2) += p.v0;
      h(i2, i1) += p.v0;
      if (nc + 1 < b.n_c) {
        const double v = p.lambda_cpl * qelem(nc + 1);
        h(b.index(1, nt, nc), b.index(2, nt, nc + 1)) += v;
        h(b.index(2, nt, nc + 1), b.index(1, nt, nc)) += v;
        h(b.index(2, nt, nc), b.index(1, nt, nc + 1)) += v;
        h(b.index(1, nt, nc + 1), b.index(2, nt, nc)) += v;
      }
    }
  }
  return h;
}

Eigen::MatrixXcd dipole_operator(const ModelParams& p, const VibronicBasis& b) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  for (int nt = 0; nt < b.n_t; ++nt) {
    for (int nc = 0; nc < b.n_c; ++nc) {
      const int ig = b.index(0, nt, nc);
      const int ie = b.index(2, nt, nc);
      d(ig, ie) = p.dipole;
      d(ie, ig) = p.dipole;
    }
  }
  return d;
}

double locate_ci(const ModelParams& p) {
  const double dk = p.kappa2() - p.kappa1();
  if (std::abs(dk) < 1e-12 * p.omega_t)
    throw std::runtime_error("ERROR: parallel diabats (kappa1 == kappa2), no crossing");
  return (p.eps1 - p.eps2) / dk;
}

SurfaceTable adiabatic_surfaces(const ModelParams& p, const std::vector<double>& qgrid) {
  if (qgrid.empty()) throw std::runtime_error("ERROR: empty coordinate grid");
  SurfaceTable s;
  s.q = qgrid;
  s.ground.reserve(qgrid.size());
  s.lower.reserve(qgrid.size());
  s.upper.reserve(qgrid.size());
  for (const double q : qgrid) {
    const double vg = 0.5 * p.omega_t * q * q;
    const double d1 = p.eps1 + p.kappa1() * q;
    const double d2 = p.eps2 + p.kappa2() * q;
    const double mean = 0.5 * (d1 + d2);
    const double root = std::hypot(0.5 * (d2 - d1), p.v0);
    s.ground.push_back(vg);
    s.lower.push_back(vg + mean - root);
    s.upper.push_back(vg + mean + root);
  }
  return s;
}

Eigen::MatrixXcd ground_state(const ModelParams& p, const VibronicBasis& b) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  rho(b.index(0, 0, 0), b.index(0, 0, 0)) = 1.0;
  (void)p;
  return rho;
}

}  // namespace cichirp
