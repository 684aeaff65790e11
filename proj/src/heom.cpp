#include "cichirp/heom.hpp"

#include <cmath>
#include <cstring>
#include <thread>

#include "cichirp/constants.hpp"

namespace cichirp {

namespace {

using cplx = std::complex<double>;

// out(i,j) = (-i (d_i - d_j) - damp) * in(i,j), initializing out
void diag_damp_init(const cplx* in, cplx* out, const double* d, double damp, int dim) {
  const double* __restrict x = reinterpret_cast<const double*>(in);
  double* __restrict o = reinterpret_cast<double*>(out);
  for (int j = 0; j < dim; ++j) {
    const double dj = d[j];
    const std::size_t base = 2 * static_cast<std::size_t>(j) * dim;
    for (int i = 0; i < dim; ++i) {
      const double w = d[i] - dj;
      const double xr = x[base + 2 * i];
      const double xi = x[base + 2 * i + 1];
      o[base + 2 * i] = -damp * xr + w * xi;
      o[base + 2 * i + 1] = -damp * xi - w * xr;
    }
  }
}

}  // namespace

struct BandView {
  int offset;
  int row_lo, row_hi;  // rows i with possibly nonzero w[i]
  const double* w;
  cplx scale_up, scale_dn;
};

namespace {

// out += pre * (A * in)
void band_left(cplx* out, const cplx* in, const BandView& t, cplx pre, int dim) {
  const cplx pu = pre * t.scale_up;
  const cplx pd = pre * t.scale_dn;
  const double pur = pu.real(), pui = pu.imag();
  const double pdr = pd.real(), pdi = pd.imag();
  const int s = t.offset;
  const int lo = std::max(t.row_lo, s);
  const int hi = std::min(t.row_hi, dim);
  const int lo2 = std::max(t.row_lo - s, 0);
  const int hi2 = std::min(t.row_hi - s, dim - s);
  const double* __restrict w = t.w;
  for (int j = 0; j < dim; ++j) {
    const double* __restrict ci =
        reinterpret_cast<const double*>(in + static_cast<std::size_t>(j) * dim);
    double* __restrict co = reinterpret_cast<double*>(out + static_cast<std::size_t>(j) * dim);
    for (int i = lo; i < hi; ++i) {
      const double wv = w[i];
      const double xr = ci[2 * (i - s)];
      const double xi = ci[2 * (i - s) + 1];
      co[2 * i] += wv * (pur * xr - pui * xi);
      co[2 * i + 1] += wv * (pur * xi + pui * xr);
    }
    for (int i = lo2; i < hi2; ++i) {
      const double wv = w[i + s];
      const double xr = ci[2 * (i + s)];
      const double xi = ci[2 * (i + s) + 1];
      co[2 * i] += wv * (pdr * xr - pdi * xi);
      co[2 * i + 1] += wv * (pdr * xi + pdi * xr);
    }
  }
}

// out += pre * (in * A)
void band_right(cplx* out, const cplx* in, const BandView& t, cplx pre, int dim) {
  const cplx pu = pre * t.scale_up;
  const cplx pd = pre * t.scale_dn;
  const int s = t.offset;
  for (int j = std::max(t.row_lo - s, 0); j < std::min(t.row_hi - s, dim - s); ++j) {
    // column j gains in(:, j+s) * A(j+s, j)
    const double wv = t.w[j + s];
    if (wv == 0.0) continue;
    const cplx f = pu * wv;
    const double fr = f.real(), fi = f.imag();
    const double* __restrict ci =
        reinterpret_cast<const double*>(in + static_cast<std::size_t>(j + s) * dim);
    double* __restrict co = reinterpret_cast<double*>(out + static_cast<std::size_t>(j) * dim);
    for (int i = 0; i < dim; ++i) {
      const double xr = ci[2 * i];
      const double xi = ci[2 * i + 1];
      co[2 * i] += fr * xr - fi * xi;
      co[2 * i + 1] += fr * xi + fi * xr;
    }
  }
  for (int j = std::max(t.row_lo, s); j < std::min(t.row_hi, dim); ++j) {
    // column j gains in(:, j-s) * A(j, j)... pair partner below the band
    const double wv = t.w[j];
    if (wv == 0.0) continue;
    const cplx f = pd * wv;
    const double fr = f.real(), fi = f.imag();
    const double* __restrict ci =
        reinterpret_cast<const double*>(in + static_cast<std::size_t>(j - s) * dim);
    double* __restrict co = reinterpret_cast<double*>(out + static_cast<std::size_t>(j) * dim);
    for (int i = 0; i < dim; ++i) {
      const double xr = ci[2 * i];
      const double xi = ci[2 * i + 1];
      co[2 * i] += fr * xr - fi * xi;
      co[2 * i + 1] += fr * xi + fi * xr;
    }
  }
}

// out += pre * [A, in]
void band_commutator(cplx* out, const cplx* in, const BandView& t, cplx pre, int dim) {
  band_left(out, in, t, pre, dim);
  band_right(out, in, t, -pre, dim);
}

void run_partitioned(int n, int threads, const std::function<void(int, int, int)>& work) {
  if (threads <= 1 || n <= 1) {
    work(0, 0, n);
    return;
  }
  const int used = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (int r = 0; r < used; ++r) {
    const int lo = static_cast<int>(static_cast<long>(n) * r / used);
    const int hi = static_cast<int>(static_cast<long>(n) * (r + 1) / used);
    pool.emplace_back(work, r, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

HeomPropagator::HeomPropagator(const ModelParams& model, const BathDecomposition& bath,
                               const PulseParams& pulse, const HeomParams& params)
    : model_(model), basis_(build_basis(model)), bath_(bath), pulse_(pulse), params_(params),
      table_(static_cast<int>(bath.modes.size()), params.depth) {
  if (params_.dt <= 0.0) throw std::runtime_error("ERROR: dt must be positive");
  if (params_.frame_stride < 1) throw std::runtime_error("ERROR: frame_stride must be >= 1");
  if (params_.depth < 0) throw std::runtime_error("ERROR: hierarchy depth must be >= 0");

  const double u = kRadFsPerWavenumber;
  const int dim = basis_.dim;
  const int m = basis_.block();
  mat_n_ = static_cast<std::size_t>(dim) * dim;

  diag_.resize(dim);
  const double eps[3] = {0.0, model_.eps1, model_.eps2};
  for (int i = 0; i < dim; ++i) {
    diag_[i] = u * (eps[basis_.elec_of(i)] + model_.omega_t * (basis_.nt_of(i) + 0.5) +
                    model_.omega_c * (basis_.nc_of(i) + 0.5));
  }

  auto qel = [](int n) { return std::sqrt(0.5 * n); };

  // intrastate tuning-mode gradients kappa_e Q_t on e1 / e2
  {
    BandTerm t;
    t.offset = basis_.n_c;
    t.w.assign(dim, 0.0);
    const double kap[3] = {0.0, model_.kappa1(), model_.kappa2()};
    for (int i = 0; i < dim; ++i) {
      const int e = basis_.elec_of(i);
      const int nt = basis_.nt_of(i);
      if (e > 0 && nt >= 1) t.w[i] = u * kap[e] * qel(nt);
    }
    h_terms_.push_back(std::move(t));
  }
  // interstate coupling lambda_cpl Q_c between e1 and e2 (two sub-bands)
  if (model_.lambda_cpl != 0.0 && basis_.n_c >= 2) {
    BandTerm lowered;  // links (2,nt,nc) <-> (1,nt,nc+1)
    lowered.offset = m - 1;
    lowered.w.assign(dim, 0.0);
    BandTerm raised;  // links (2,nt,nc) <-> (1,nt,nc-1)
    raised.offset = m + 1;
    raised.w.assign(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      if (basis_.elec_of(i) != 2) continue;
      const int nc = basis_.nc_of(i);
      if (nc + 1 < basis_.n_c) lowered.w[i] = u * model_.lambda_cpl * qel(nc + 1);
      if (nc >= 1) raised.w[i] = u * model_.lambda_cpl * qel(nc);
    }
    h_terms_.push_back(std::move(lowered));
    h_terms_.push_back(std::move(raised));
  }
  // static interstate coupling v0
  if (model_.v0 != 0.0) {
    BandTerm t;
    t.offset = m;
    t.w.assign(dim, 0.0);
    for (int i = 2 * m; i < 3 * m; ++i) t.w[i] = u * model_.v0;
    h_terms_.push_back(std::move(t));
  }

  // bare coupling-coordinate operators for the baths (dimensionless weights)
  for (int bathid = 0; bathid < 2; ++bathid) {
    BandTerm t;
    t.offset = (bathid == 0) ? basis_.n_c : 1;
    t.w.assign(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      const int n = (bathid == 0) ? basis_.nt_of(i) : basis_.nc_of(i);
      if (n >= 1) t.w[i] = qel(n);
    }
    q_op_[bathid] = std::move(t);
  }

  nu_fs_.reserve(bath_.modes.size());
  c_fs_.reserve(bath_.modes.size());
  double nu_max = 0.0;
  for (const auto& mk : bath_.modes) {
    nu_fs_.push_back(u * mk.nu);
    c_fs_.push_back(u * u * mk.c);
    nu_max = std::max(nu_max, u * mk.nu);
  }
  delta_r_fs_[0] = u * bath_.delta_r[0];
  delta_r_fs_[1] = u * bath_.delta_r[1];

  gamma_tier_.resize(table_.size());
  for (int a = 0; a < table_.size(); ++a) {
    double g = 0.0;
    for (int k = 0; k < table_.n_modes(); ++k) g += table_.occupation(a, k) * nu_fs_[k];
    gamma_tier_[a] = g;
  }

  // step-size guards: resolve the carrier and the fastest bath rate, and stay
  // inside the RK4 stability region for the spectral spread of H (Gershgorin)
  const double carrier = (pulse_.e0 > 0.0) ? u * pulse_.omega0 : 0.0;
  if (params_.dt * std::max(carrier, nu_max) >= 0.1)
    throw std::runtime_error("ERROR: dt too large to resolve the carrier frequency or the "
                             "fastest bath decay rate (need dt * rate < 0.1)");
  double radius = 0.0;
  for (int i = 0; i < dim; ++i) {
    double r = std::abs(diag_[i]);
    for (const auto& t : h_terms_) {
      if (i >= t.offset) r += std::abs(t.w[i]);
      if (i + t.offset < dim) r += std::abs(t.w[i + t.offset]);
    }
    r += u * std::abs(model_.dipole) * pulse_.e0;
    radius = std::max(radius, r);
  }
  if (params_.dt * 2.0 * radius > 2.8)
    throw std::runtime_error("ERROR: dt outside the RK4 stability region for this "
                             "Hamiltonian; reduce dt or the basis/energy scale");
}

void HeomPropagator::ado_derivative(const cplx* y, int a, const BandTerm& field,
                                    bool field_active, cplx* out, cplx* scratch) const {
  const int dim = basis_.dim;
  const cplx mi(0.0, -1.0);
  const cplx* ya = y + static_cast<std::size_t>(a) * mat_n_;

  diag_damp_init(ya, out, diag_.data(), gamma_tier_[a], dim);

  auto view = [dim](const BandTerm& t) {
    BandView v;
    v.offset = t.offset;
    v.w = t.w.data();
    v.scale_up = t.scale_up;
    v.scale_dn = t.scale_dn;
    // trim to the populated window of w
    int lo = 0, hi = dim;
    while (lo < dim && t.w[lo] == 0.0) ++lo;
    while (hi > lo && t.w[hi - 1] == 0.0) --hi;
    v.row_lo = lo;
    v.row_hi = hi;
    return v;
  };

  for (const auto& t : h_terms_) band_commutator(out, ya, view(t), mi, dim);
  if (field_active) band_commutator(out, ya, view(field), mi, dim);

  const BandView q[2] = {view(q_op_[0]), view(q_op_[1])};

  for (int b = 0; b < 2; ++b) {
    if (delta_r_fs_[b] == 0.0) continue;
    std::memset(static_cast<void*>(scratch), 0, mat_n_ * sizeof(cplx));
    band_commutator(scratch, ya, q[b], cplx(1.0, 0.0), dim);
    band_commutator(out, scratch, q[b], cplx(-delta_r_fs_[b], 0.0), dim);
  }

  for (int k = 0; k < table_.n_modes(); ++k) {
    const int b = bath_.modes[static_cast<std::size_t>(k)].bath;
    const int up = table_.up(a, k);
    if (up >= 0) {
      band_commutator(out, y + static_cast<std::size_t>(up) * mat_n_, q[b], mi, dim);
    } else if (params_.terminator == HeomParams::Terminator::markovian &&
               table_.tier(a) == params_.depth) {
      // time-local closure of the truncated tier
      const double nk1 = table_.occupation(a, k) + 1.0;
      std::memset(static_cast<void*>(scratch), 0, mat_n_ * sizeof(cplx));
      band_left(scratch, ya, q[b], c_fs_[k], dim);
      band_right(scratch, ya, q[b], -std::conj(c_fs_[k]), dim);
      const double denom = gamma_tier_[a] + nu_fs_[k];
      band_commutator(out, scratch, q[b], cplx(-nk1 / denom, 0.0), dim);
    }
    const int dn = table_.down(a, k);
    if (dn >= 0) {
      const double nk = table_.occupation(a, k);
      const cplx* yd = y + static_cast<std::size_t>(dn) * mat_n_;
      band_left(out, yd, q[b], mi * nk * c_fs_[k], dim);
      band_right(out, yd, q[b], -mi * nk * std::conj(c_fs_[k]), dim);
    }
  }
}

void HeomPropagator::rhs_flat(const cplx* y, double t, cplx* out,
                              std::vector<cplx>& scratch) const {
  // pulse coupling at this instant, converted to rad/fs
  BandTerm field;
  bool active = false;
  field.offset = 2 * basis_.block();
  field.w.assign(basis_.dim, 0.0);
  if (pulse_.e0 > 0.0) {
    const double u = kRadFsPerWavenumber;
    // skip the pulse term once the envelope has decayed to numerical noise
    // (1e-18 rad/fs is ~1e-15 of the peak amplitude at default settings)
    constexpr double tiny = 1e-18;
    if (params_.rwa) {
      const cplx a = u * rwa_amplitude(pulse_, model_.dipole, t);
      if (std::abs(a.real()) + std::abs(a.imag()) > tiny) {
        active = true;
        field.scale_up = a;
        field.scale_dn = std::conj(a);
      }
    } else {
      const double e = u * model_.dipole * cichirp::field(pulse_, t);
      if (std::abs(e) > tiny) {
        active = true;
        field.scale_up = e;
        field.scale_dn = e;
      }
    }
    for (int i = 2 * basis_.block(); i < basis_.dim; ++i) field.w[i] = 1.0;
  }

  const int n = table_.size();
  const int threads = std::max(params_.threads, 1);
  scratch.resize(static_cast<std::size_t>(std::min(threads, std::max(n, 1))) * mat_n_);
  cplx* scratch_base = scratch.data();
  const std::size_t mat_n = mat_n_;
  run_partitioned(n, threads, [&, scratch_base](int part, int lo, int hi) {
    // one scratch block per worker; partitions are disjoint in a
    cplx* scr = scratch_base + static_cast<std::size_t>(part) * mat_n;
    for (int a = lo; a < hi; ++a) {
      ado_derivative(y, a, field, active, out + static_cast<std::size_t>(a) * mat_n, scr);
    }
  });
}

std::vector<Eigen::MatrixXcd> HeomPropagator::rhs(const std::vector<Eigen::MatrixXcd>& ados,
                                                  double t) const {
  if (static_cast<int>(ados.size()) != table_.size())
    throw std::runtime_error("ERROR: hierarchy state has wrong number of ADOs");
  const int dim = basis_.dim;
  std::vector<cplx> y(static_cast<std::size_t>(table_.size()) * mat_n_);
  for (int a = 0; a < table_.size(); ++a) {
    if (ados[static_cast<std::size_t>(a)].rows() != dim ||
        ados[static_cast<std::size_t>(a)].cols() != dim)
      throw std::runtime_error("ERROR: ADO dimension mismatch");
    std::memcpy(y.data() + static_cast<std::size_t>(a) * mat_n_,
                ados[static_cast<std::size_t>(a)].data(), mat_n_ * sizeof(cplx));
  }
  std::vector<cplx> out(y.size());
  std::vector<cplx> scratch;
  rhs_flat(y.data(), t, out.data(), scratch);
  std::vector<Eigen::MatrixXcd> result(static_cast<std::size_t>(table_.size()));
  for (int a = 0; a < table_.size(); ++a) {
    result[static_cast<std::size_t>(a)] =
        Eigen::Map<const Eigen::MatrixXcd>(out.data() + static_cast<std::size_t>(a) * mat_n_,
                                           dim, dim);
  }
  return result;
}

PropagationSummary HeomPropagator::propagate(const Eigen::MatrixXcd& rho0,
                                             const FrameFn& on_frame) const {
  const int dim = basis_.dim;
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw std::runtime_error("ERROR: initial density matrix has wrong dimension");
  const double tr0 = rho0.trace().real();
  if (std::abs(tr0 - 1.0) > 1e-9)
    throw std::runtime_error("ERROR: initial density matrix must have unit trace");

  const std::size_t total = static_cast<std::size_t>(table_.size()) * mat_n_;
  std::vector<cplx> y(total, cplx(0.0, 0.0));
  std::memcpy(y.data(), rho0.data(), mat_n_ * sizeof(cplx));
  std::vector<cplx> k1(total), k2(total), k3(total), k4(total), tmp(total);
  std::vector<cplx> scratch;

  const double dt = params_.dt;
  const long n_steps = static_cast<long>(std::floor(params_.t_end / dt + 1e-9));

  PropagationSummary summary;

  auto emit = [&](int frame_idx, double t) {
    const auto rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim);
    const cplx total = rho.sum();
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
      throw PropagationError("ERROR: non-finite density matrix during propagation", t);
    const double tr = rho.trace().real();
    if (std::abs(tr - tr0) > 1e-6)
      throw PropagationError("ERROR: trace drift exceeded 1e-6 during propagation", t);
    summary.trace_drift = std::max(summary.trace_drift, std::abs(tr - tr0));
    if (on_frame) on_frame(frame_idx, t, rho);
  };

  auto axpy = [total](std::vector<cplx>& outv, const std::vector<cplx>& a, double alpha,
                      const std::vector<cplx>& b) {
    // outv = a + alpha*b
    Eigen::Map<Eigen::ArrayXcd> o(outv.data(), static_cast<long>(total));
    Eigen::Map<const Eigen::ArrayXcd> av(const_cast<cplx*>(a.data()), static_cast<long>(total));
    Eigen::Map<const Eigen::ArrayXcd> bv(const_cast<cplx*>(b.data()), static_cast<long>(total));
    o = av + alpha * bv;
  };

  int frame_idx = 0;
  emit(frame_idx++, 0.0);
  for (long step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    rhs_flat(y.data(), t, k1.data(), scratch);
    axpy(tmp, y, 0.5 * dt, k1);
    rhs_flat(tmp.data(), t + 0.5 * dt, k2.data(), scratch);
    axpy(tmp, y, 0.5 * dt, k2);
    rhs_flat(tmp.data(), t + 0.5 * dt, k3.data(), scratch);
    axpy(tmp, y, dt, k3);
    rhs_flat(tmp.data(), t + dt, k4.data(), scratch);
    {
      Eigen::Map<Eigen::ArrayXcd> yv(y.data(), static_cast<long>(total));
      Eigen::Map<const Eigen::ArrayXcd> a1(k1.data(), static_cast<long>(total));
      Eigen::Map<const Eigen::ArrayXcd> a2(k2.data(), static_cast<long>(total));
      Eigen::Map<const Eigen::ArrayXcd> a3(k3.data(), static_cast<long>(total));
      Eigen::Map<const Eigen::ArrayXcd> a4(k4.data(), static_cast<long>(total));
      yv += (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    }
    const long done = step + 1;
    if (done % params_.frame_stride == 0 || done == n_steps) {
      emit(frame_idx++, static_cast<double>(done) * dt);
    }
  }
  summary.n_steps = n_steps;
  summary.t_final = static_cast<double>(n_steps) * dt;
  return summary;
}

std::vector<HeomPropagator::Frame> HeomPropagator::propagate_collect(
    const Eigen::MatrixXcd& rho0, PropagationSummary* summary) const {
  std::vector<Frame> frames;
  auto s = propagate(rho0, [&frames](int, double t, const Eigen::MatrixXcd& rho) {
    frames.push_back({t, rho});
  });
  if (summary) *summary = s;
  return frames;
}

std::vector<Eigen::MatrixXcd> heom_rhs(const HierarchyTable& table,
                                       const std::vector<Eigen::MatrixXcd>& ados,
                                       const Eigen::MatrixXcd& h_total,
                                       const std::vector<Eigen::MatrixXcd>& coupling_ops,
                                       const std::vector<ExponentialMode>& modes,
                                       const double* delta_r) {
  if (static_cast<int>(ados.size()) != table.size())
    throw std::runtime_error("ERROR: hierarchy state has wrong number of ADOs");
  if (static_cast<int>(modes.size()) != table.n_modes())
    throw std::runtime_error("ERROR: mode list does not match hierarchy table");

  const double u = kRadFsPerWavenumber;
  const cplx mi(0.0, -1.0);
  const Eigen::MatrixXcd hu = u * h_total;

  std::vector<Eigen::MatrixXcd> out(ados.size());
  for (int a = 0; a < table.size(); ++a) {
    const auto& ya = ados[static_cast<std::size_t>(a)];
    double damp = 0.0;
    for (int k = 0; k < table.n_modes(); ++k)
      damp += table.occupation(a, k) * u * modes[static_cast<std::size_t>(k)].nu;
    Eigen::MatrixXcd d = mi * (hu * ya - ya * hu) - damp * ya;
    if (delta_r) {
      for (std::size_t b = 0; b < coupling_ops.size(); ++b) {
        if (delta_r[b] == 0.0) continue;
        const auto& q = coupling_ops[b];
        const Eigen::MatrixXcd inner = q * ya - ya * q;
        d -= (u * delta_r[b]) * (q * inner - inner * q);
      }
    }
    for (int k = 0; k < table.n_modes(); ++k) {
      const auto& mk = modes[static_cast<std::size_t>(k)];
      const auto& q = coupling_ops[static_cast<std::size_t>(mk.bath)];
      const int up = table.up(a, k);
      if (up >= 0) {
        const auto& yu = ados[static_cast<std::size_t>(up)];
        d += mi * (q * yu - yu * q);
      }
      const int dn = table.down(a, k);
      if (dn >= 0) {
        const auto& yd = ados[static_cast<std::size_t>(dn)];
        const cplx ck = u * u * mk.c;
        d += mi * static_cast<double>(table.occupation(a, k)) *
             (ck * q * yd - std::conj(ck) * yd * q);
      }
    }
    out[static_cast<std::size_t>(a)] = std::move(d);
  }
  return out;
}

}  // namespace cichirp
