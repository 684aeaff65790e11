#include "cichirp/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace cichirp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// trapezoidal integral of samples y on grid x
double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double hermite_function(int n, double q) {
  if (n < 0) throw std::runtime_error("ERROR: hermite_function requires n >= 0");
  const double phi0 = std::pow(kPi, -0.25) * std::exp(-0.5 * q * q);
  if (n == 0) return phi0;
  double prev = phi0;
  double cur = std::sqrt(2.0) * q * phi0;
  for (int m = 1; m < n; ++m) {
    const double next =
        std::sqrt(2.0 / (m + 1.0)) * q * cur - std::sqrt(m / (m + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

WavepacketFrame project_qt(const Eigen::MatrixXcd& rho, const VibronicBasis& basis,
                           const std::vector<double>& q_grid, double t) {
  if (rho.rows() != basis.dim || rho.cols() != basis.dim)
    throw std::runtime_error("ERROR: density matrix does not match the basis");
  if (q_grid.size() < 2)
    throw std::runtime_error("ERROR: projection grid needs at least two points");
  for (std::size_t i = 1; i < q_grid.size(); ++i)
    if (q_grid[i] <= q_grid[i - 1])
      throw std::runtime_error("ERROR: projection grid must be strictly increasing");
  if (q_grid.front() > -4.0 || q_grid.back() < 4.0)
    throw std::runtime_error("ERROR: projection grid must span at least [-4, 4]");

  const int n_q = static_cast<int>(q_grid.size());
  Eigen::MatrixXd phi(n_q, basis.n_t);
  for (int j = 0; j < n_q; ++j) {
    const double q = q_grid[j];
    phi(j, 0) = hermite_function(0, q);
    if (basis.n_t > 1) phi(j, 1) = std::sqrt(2.0) * q * phi(j, 0);
    for (int m = 1; m + 1 < basis.n_t; ++m)
      phi(j, m + 1) =
          std::sqrt(2.0 / (m + 1.0)) * q * phi(j, m) - std::sqrt(m / (m + 1.0)) * phi(j, m - 1);
  }

  WavepacketFrame frame;
  frame.t = t;
  frame.q = q_grid;
  std::vector<double>* dens[3] = {&frame.g, &frame.e1, &frame.e2};
  Eigen::MatrixXcd sub(basis.n_t, basis.n_t);
  for (int e = 0; e < 3; ++e) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n_q);
    for (int nc = 0; nc < basis.n_c; ++nc) {
      for (int a = 0; a < basis.n_t; ++a)
        for (int b = 0; b < basis.n_t; ++b)
          sub(a, b) = rho(basis.index(e, a, nc), basis.index(e, b, nc));
      const Eigen::MatrixXcd m = phi * sub;
      acc += (m.array() * phi.cast<std::complex<double>>().array()).rowwise().sum().real();
    }
    dens[e]->assign(acc.data(), acc.data() + n_q);
  }

  std::vector<double> total(q_grid.size());
  for (std::size_t j = 0; j < total.size(); ++j)
    total[j] = frame.g[j] + frame.e1[j] + frame.e2[j];
  frame.coverage = trapezoid(q_grid, total);
  frame.narrow_grid = frame.coverage < rho.trace().real() - 0.01;
  return frame;
}

double region_population(const WavepacketFrame& frame, double q_lo, double q_hi,
                         const ManifoldSelect& manifolds) {
  if (!(q_lo < q_hi))
    throw std::runtime_error("ERROR: region bounds must satisfy q_lo < q_hi");
  if (q_lo < frame.q.front() - 1e-12 || q_hi > frame.q.back() + 1e-12)
    throw std::runtime_error("ERROR: region bounds fall outside the projection grid");
  if (!manifolds.g && !manifolds.e1 && !manifolds.e2)
    throw std::runtime_error("ERROR: empty manifold selection");

  auto value = [&](std::size_t j) {
    double v = 0.0;
    if (manifolds.g) v += frame.g[j];
    if (manifolds.e1) v += frame.e1[j];
    if (manifolds.e2) v += frame.e2[j];
    return v;
  };

  // exact integral of the piecewise-linear interpolant over [q_lo, q_hi]
  double acc = 0.0;
  for (std::size_t j = 1; j < frame.q.size(); ++j) {
    const double a = frame.q[j - 1], b = frame.q[j];
    const double lo = std::max(a, q_lo), hi = std::min(b, q_hi);
    if (lo >= hi) continue;
    const double va = value(j - 1), vb = value(j);
    const double slope = (vb - va) / (b - a);
    const double ylo = va + slope * (lo - a);
    const double yhi = va + slope * (hi - a);
    acc += 0.5 * (hi - lo) * (ylo + yhi);
  }
  return acc;
}

YieldResult quantum_yield(const std::vector<WavepacketFrame>& frames, double window_lo,
                          double window_hi, double q_barrier) {
  if (frames.empty()) throw std::runtime_error("ERROR: no frames supplied");
  if (!(window_lo < window_hi))
    throw std::runtime_error("ERROR: analysis window must have positive length");

  std::vector<const WavepacketFrame*> sel;
  for (const auto& f : frames)
    if (f.t >= window_lo - 1e-9 && f.t <= window_hi + 1e-9) sel.push_back(&f);
  if (sel.empty() || sel.front()->t > window_lo + 1e-6 || sel.back()->t < window_hi - 1e-6)
    throw std::runtime_error("ERROR: frames do not cover the analysis window");

  std::vector<double> t(sel.size()), c(sel.size()), d(sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i) {
    const auto& f = *sel[i];
    if (q_barrier <= f.q.front() || q_barrier >= f.q.back())
      throw std::runtime_error("ERROR: q_barrier falls outside the projection grid");
    t[i] = f.t;
    c[i] = region_population(f, f.q.front(), q_barrier);
    d[i] = region_population(f, q_barrier, f.q.back());
  }

  YieldResult r;
  r.window_lo = window_lo;
  r.window_hi = window_hi;
  r.q_barrier = q_barrier;
  r.n_frames = static_cast<int>(sel.size());
  if (sel.size() == 1) {
    r.pop_c = c[0];
    r.pop_d = d[0];
  } else {
    const double span = t.back() - t.front();
    r.pop_c = trapezoid(t, c) / span;
    r.pop_d = trapezoid(t, d) / span;
  }
  if (r.pop_c + r.pop_d <= 0.0)
    throw std::runtime_error("ERROR: no excited population in the analysis window");
  r.yield = r.pop_d / (r.pop_c + r.pop_d);
  return r;
}

QtSeries expectation_qt(const std::vector<WavepacketFrame>& frames) {
  if (frames.empty()) throw std::runtime_error("ERROR: no frames supplied");
  QtSeries s;
  for (const auto& f : frames) {
    std::vector<double> exc(f.q.size()), moment(f.q.size());
    for (std::size_t j = 0; j < f.q.size(); ++j) {
      exc[j] = f.e1[j] + f.e2[j];
      moment[j] = f.q[j] * exc[j];
    }
    const double den = trapezoid(f.q, exc);
    if (den < 1e-12) {
      ++s.skipped;
      continue;
    }
    s.t.push_back(f.t);
    s.value.push_back(trapezoid(f.q, moment) / den);
  }
  return s;
}

double oscillation_period(const std::vector<double>& t, const std::vector<double>& x) {
  const std::size_t n = t.size();
  if (n != x.size() || n < 8)
    throw std::runtime_error("ERROR: series too short for period extraction");
  const double span = t.back() - t.front();
  if (span <= 0.0) throw std::runtime_error("ERROR: series has no time extent");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double amp = 0.0;
  for (double v : x) amp = std::max(amp, std::abs(v - mean));
  if (amp < 1e-12 * (1.0 + std::abs(mean)))
    throw std::runtime_error("ERROR: series has no oscillation");

  // Hann-windowed direct transform; handles nonuniform sampling
  double dt_min = span;
  for (std::size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
  if (dt_min <= 0.0) throw std::runtime_error("ERROR: series times must be increasing");
  const double f_lo = 1.0 / span;
  const double f_hi = 0.5 / dt_min;
  const double df = 1.0 / (16.0 * span);
  const int n_f = static_cast<int>((f_hi - f_lo) / df) + 1;
  if (n_f < 3) throw std::runtime_error("ERROR: series too short for period extraction");

  std::vector<double> w(n), xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * (t[i] - t.front()) / span));
    xs[i] = w[i] * (x[i] - mean);
  }
  std::vector<double> mag(n_f);
  double best = -1.0;
  int best_k = -1;
  for (int k = 0; k < n_f; ++k) {
    const double f = f_lo + k * df;
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = -2.0 * kPi * f * (t[i] - t.front());
      acc += xs[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    mag[k] = std::abs(acc);
    if (mag[k] > best) {
      best = mag[k];
      best_k = k;
    }
  }

  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n_f / 2, sorted.end());
  const double floor_mag = sorted[static_cast<std::size_t>(n_f) / 2];
  if (best_k <= 0 || best_k >= n_f - 1 || best < 5.0 * (floor_mag + 1e-300))
    throw std::runtime_error("ERROR: no dominant spectral peak in the series");

  // parabolic refinement around the discrete maximum
  const double y0 = mag[best_k - 1], y1 = mag[best_k], y2 = mag[best_k + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  const double shift = (denom != 0.0) ? 0.5 * (y0 - y2) / denom : 0.0;
  const double f_peak = f_lo + (best_k + shift) * df;
  return 1.0 / f_peak;
}

BarrierInfo find_barrier(const ModelParams& p) {
  auto lower = [&](double q) {
    const double v1 = p.eps1 + p.kappa1() * q;
    const double v2 = p.eps2 + p.kappa2() * q;
    return 0.5 * p.omega_t * q * q + 0.5 * (v1 + v2) - std::hypot(0.5 * (v1 - v2), p.v0);
  };

  const double q_lo = -6.0, q_hi = 6.0;
  const int n = 2401;
  std::vector<double> qs(n), vs(n);
  for (int i = 0; i < n; ++i) {
    qs[i] = q_lo + (q_hi - q_lo) * i / (n - 1);
    vs[i] = lower(qs[i]);
  }
  std::vector<int> minima;
  for (int i = 1; i + 1 < n; ++i)
    if (vs[i] < vs[i - 1] && vs[i] <= vs[i + 1]) minima.push_back(i);
  if (minima.size() < 2)
    throw std::runtime_error("ERROR: lower adiabatic surface does not have two minima");
  std::sort(minima.begin(), minima.end(),
            [&](int a, int b) { return vs[a] < vs[b]; });
  int ia = minima[0], ib = minima[1];
  if (qs[ia] > qs[ib]) std::swap(ia, ib);

  auto neg = [&](double q) { return -lower(q); };
  BarrierInfo info;
  info.q_left_min = golden_section_max(neg, qs[std::max(ia - 1, 0)], qs[std::min(ia + 1, n - 1)]);
  info.q_right_min = golden_section_max(neg, qs[std::max(ib - 1, 0)], qs[std::min(ib + 1, n - 1)]);
  info.q_barrier = golden_section_max(lower, info.q_left_min, info.q_right_min);
  return info;
}

}  // namespace cichirp
