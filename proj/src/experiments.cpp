#include "cichirp/experiments.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "json.hpp"

#include "cichirp/constants.hpp"

namespace cichirp {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ERROR: cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("ERROR: short write to '" + path + "'");
}

std::string sanitize(const std::string& s) {
  std::string r;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
                    c == '_' || c == '+';
    r += ok ? c : '_';
  }
  return r;
}

std::string param_tail(const std::string& param) {
  const auto dot = param.rfind('.');
  return dot == std::string::npos ? param : param.substr(dot + 1);
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

ordered_json json_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

RunRecord run_single(const RunConfig& cfg_in, const std::string& outdir) {
  const auto wall_start = std::chrono::steady_clock::now();
  RunConfig cfg = cfg_in;
  resolve(cfg);
  if (cfg.pulse.e0 <= 0.0)
    throw ConfigError(
        "ERROR: zero-field pulse leaves the excited manifolds empty; the yield "
        "is undefined");

  RunRecord rec;
  rec.period_fs = nan_value();

  // construction failures are configuration problems, not numerical ones
  BathDecomposition decomp;
  std::unique_ptr<HeomPropagator> prop;
  try {
    decomp = bath_decomposition(cfg.bath);
    prop = std::make_unique<HeomPropagator>(cfg.model, decomp, cfg.pulse, cfg.heom);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }

  const std::vector<double> grid = analysis_grid(cfg.analysis);
  const VibronicBasis& basis = prop->basis();

  std::vector<WavepacketFrame> frames;
  std::string frames_csv = "t_fs,q,p_e1,p_e2,p_total\n";
  bool warned_narrow = false;
  auto on_frame = [&](int, double t, const Eigen::MatrixXcd& rho) {
    WavepacketFrame f = project_qt(rho, basis, grid, t);
    if (f.narrow_grid && !warned_narrow) {
      rec.warnings.push_back("projection grid misses >= 1% of the trace");
      warned_narrow = true;
    }
    const std::string ts = format_double(t);
    for (std::size_t j = 0; j < f.q.size(); ++j) {
      frames_csv += ts;
      frames_csv += ',';
      frames_csv += format_double(f.q[j]);
      frames_csv += ',';
      frames_csv += format_double(f.e1[j]);
      frames_csv += ',';
      frames_csv += format_double(f.e2[j]);
      frames_csv += ',';
      frames_csv += format_double(f.g[j] + f.e1[j] + f.e2[j]);
      frames_csv += '\n';
    }
    frames.push_back(std::move(f));
  };

  try {
    rec.summary = prop->propagate(ground_state(cfg.model, basis), on_frame);
  } catch (const PropagationError& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.error_t = e.t;
  }

  BarrierInfo barrier;
  bool have_barrier = false;
  if (cfg.analysis.q_barrier_auto) {
    try {
      barrier = find_barrier(cfg.model);
      rec.q_barrier = barrier.q_barrier;
      have_barrier = true;
    } catch (const std::runtime_error& e) {
      if (!rec.failed) {
        rec.failed = true;
        rec.error = e.what();
      }
    }
  } else {
    rec.q_barrier = cfg.analysis.q_barrier;
  }

  if (!rec.failed) {
    try {
      rec.yield = quantum_yield(frames, cfg.analysis.window_lo, cfg.analysis.window_hi,
                                rec.q_barrier);
      const double h = 0.05;
      const double yp =
          quantum_yield(frames, cfg.analysis.window_lo, cfg.analysis.window_hi,
                        rec.q_barrier + h)
              .yield;
      const double ym =
          quantum_yield(frames, cfg.analysis.window_lo, cfg.analysis.window_hi,
                        rec.q_barrier - h)
              .yield;
      rec.yield_sensitivity = (yp - ym) / (2.0 * h);
    } catch (const std::runtime_error& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  }

  if (!rec.failed) {
    const auto& last = frames.back();
    rec.final_populations[0] =
        region_population(last, grid.front(), grid.back(), {true, false, false});
    rec.final_populations[1] =
        region_population(last, grid.front(), grid.back(), {false, true, false});
    rec.final_populations[2] =
        region_population(last, grid.front(), grid.back(), {false, false, true});
    for (const auto& f : frames)
      rec.excited_peak =
          std::max(rec.excited_peak, region_population(f, grid.front(), grid.back()));

    const QtSeries s = expectation_qt(frames);
    if (s.skipped > 0)
      rec.warnings.push_back(std::to_string(s.skipped) +
                             " frames lacked excited population for <Q_t>");
    std::vector<double> ts, xs;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.t[i] >= 200.0 && s.t[i] <= 800.0) {
        ts.push_back(s.t[i]);
        xs.push_back(s.value[i]);
      }
    }
    if (ts.size() >= 8) {
      try {
        rec.period_fs = oscillation_period(ts, xs);
      } catch (const std::runtime_error&) {
        rec.period_fs = nan_value();
      }
    }
  }

  if (!outdir.empty()) {
    fs::create_directories(outdir);

    ordered_json manifest;
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    ordered_json jc = ordered_json::object();
    for (const auto& [key, value] : config_items(cfg)) jc[key] = value;
    manifest["config"] = jc;

    ordered_json jd = ordered_json::object();
    jd["kappa1"] = cfg.model.kappa1();
    jd["kappa2"] = cfg.model.kappa2();
    try {
      jd["q_ci"] = locate_ci(cfg.model);
    } catch (const std::runtime_error&) {
      jd["q_ci"] = nullptr;
    }
    jd["q_barrier"] = rec.q_barrier;
    if (have_barrier) {
      jd["q_left_min"] = barrier.q_left_min;
      jd["q_right_min"] = barrier.q_right_min;
    }
    jd["omega0"] = cfg.pulse.omega0;
    jd["t_center"] = cfg.pulse.t_center;
    jd["dim"] = basis.dim;
    jd["n_ados"] = prop->n_ados();
    jd["n_modes"] = static_cast<int>(decomp.modes.size());
    jd["delta_r_t"] = decomp.delta_r[0];
    jd["delta_r_c"] = decomp.delta_r[1];
    jd["low_temp_active"] = decomp.low_temp_active;
    manifest["derived"] = jd;

    ordered_json jr = ordered_json::object();
    jr["n_steps"] = rec.summary.n_steps;
    jr["t_final"] = rec.summary.t_final;
    jr["trace_drift"] = rec.summary.trace_drift;
    jr["n_frames"] = static_cast<int>(frames.size());
    if (!rec.failed) {
      jr["yield"] = rec.yield.yield;
      jr["pop_c"] = rec.yield.pop_c;
      jr["pop_d"] = rec.yield.pop_d;
      jr["window_lo"] = rec.yield.window_lo;
      jr["window_hi"] = rec.yield.window_hi;
      jr["window_frames"] = rec.yield.n_frames;
      jr["yield_sensitivity"] = rec.yield_sensitivity;
      jr["final_pop_g"] = rec.final_populations[0];
      jr["final_pop_e1"] = rec.final_populations[1];
      jr["final_pop_e2"] = rec.final_populations[2];
      jr["excited_peak"] = rec.excited_peak;
      jr["period_fs"] = json_or_null(rec.period_fs);
    }
    manifest["results"] = jr;
    manifest["warnings"] = rec.warnings;
    if (rec.failed) {
      manifest["error"] = {{"message", rec.error}, {"t_fs", rec.error_t}};
    } else {
      manifest["error"] = nullptr;
    }
    write_file(outdir + "/manifest.json", manifest.dump(2) + "\n");

    write_file(outdir + "/frames.csv", frames_csv);

    std::string pulse_csv = "t_fs,field,envelope,frequency_cm\n";
    const double dt_out = cfg.heom.dt * cfg.heom.frame_stride;
    for (double t = 0.0; t <= cfg.heom.t_end + 1e-9; t += dt_out) {
      pulse_csv += format_double(t);
      pulse_csv += ',';
      pulse_csv += format_double(field(cfg.pulse, t));
      pulse_csv += ',';
      pulse_csv += format_double(envelope(cfg.pulse, t));
      pulse_csv += ',';
      pulse_csv += format_double(instantaneous_frequency(cfg.pulse, t));
      pulse_csv += '\n';
    }
    write_file(outdir + "/pulse.csv", pulse_csv);

    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - wall_start)
                             .count();
    std::string log = "status: ";
    log += rec.failed ? "failed" : "ok";
    log += "\nwall_ms: " + std::to_string(wall_ms) + "\n";
    if (rec.failed) log += "error: " + rec.error + "\n";
    write_file(outdir + "/run.log", log);
  }
  return rec;
}

SweepResult run_sweep(const RunConfig& base, const SweepAxis& a,
                      const std::optional<SweepAxis>& b, const std::string& outdir,
                      int workers) {
  if (a.param.empty() || a.values.empty())
    throw ConfigError("ERROR: sweep axis needs a parameter and at least one value");
  if (b && (b->param.empty() || b->values.empty()))
    throw ConfigError("ERROR: second sweep axis needs a parameter and at least one value");

  // fail fast on unknown keys or malformed values before any propagation
  {
    RunConfig scratch = base;
    for (const auto& v : a.values) apply_override(scratch, a.param, v);
    if (b)
      for (const auto& v : b->values) apply_override(scratch, b->param, v);
  }

  SweepResult result;
  result.n_a = static_cast<int>(a.values.size());
  result.n_b = b ? static_cast<int>(b->values.size()) : 1;
  const int n = result.n_a * result.n_b;
  result.cells.resize(static_cast<std::size_t>(n));

  std::vector<std::string> dirs(static_cast<std::size_t>(n));
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    for (int i = 0; i < n; ++i) {
      const int ia = i / result.n_b;
      const int ib = i % result.n_b;
      char idx[16];
      std::snprintf(idx, sizeof(idx), "%03d", i);
      std::string name = std::string("cell_") + idx + "_" + sanitize(param_tail(a.param)) +
                         "_" + sanitize(a.values[static_cast<std::size_t>(ia)]);
      if (b)
        name += "_" + sanitize(param_tail(b->param)) + "_" +
                sanitize(b->values[static_cast<std::size_t>(ib)]);
      dirs[static_cast<std::size_t>(i)] = outdir + "/" + name;
    }
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const int ia = i / result.n_b;
      const int ib = i % result.n_b;
      RunConfig cfg = base;
      RunRecord& rec = result.cells[static_cast<std::size_t>(i)];
      try {
        apply_override(cfg, a.param, a.values[static_cast<std::size_t>(ia)]);
        if (b) apply_override(cfg, b->param, b->values[static_cast<std::size_t>(ib)]);
        rec = run_single(cfg, dirs[static_cast<std::size_t>(i)]);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
    }
  };

  const int used = std::max(1, std::min(workers, n));
  if (used == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used));
    for (int r = 0; r < used; ++r) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!outdir.empty()) {
    std::string csv = "index," + a.param;
    if (b) csv += "," + b->param;
    csv += ",yield,pop_c,pop_d,excited_peak,period_fs,trace_drift,status\n";
    for (int i = 0; i < n; ++i) {
      const int ia = i / result.n_b;
      const int ib = i % result.n_b;
      const RunRecord& rec = result.cells[static_cast<std::size_t>(i)];
      csv += std::to_string(i);
      csv += ',' + a.values[static_cast<std::size_t>(ia)];
      if (b) csv += ',' + b->values[static_cast<std::size_t>(ib)];
      if (rec.failed) {
        csv += ",,,,,,error\n";
      } else {
        csv += ',' + format_double(rec.yield.yield);
        csv += ',' + format_double(rec.yield.pop_c);
        csv += ',' + format_double(rec.yield.pop_d);
        csv += ',' + format_double(rec.excited_peak);
        csv += ',';
        if (std::isfinite(rec.period_fs)) csv += format_double(rec.period_fs);
        csv += ',' + format_double(rec.summary.trace_drift);
        csv += ",ok\n";
      }
    }
    write_file(outdir + "/sweep.csv", csv);
  }
  return result;
}

SweepResult sweep_eta(const RunConfig& base, const SweepAxis& eta, const std::string& outdir,
                      int workers) {
  SweepAxis a = eta;
  a.param = "pulse.eta";
  return run_sweep(base, a, std::nullopt, outdir, workers);
}

SweepResult sweep_gap(const RunConfig& base, const SweepAxis& gap, const SweepAxis& eta,
                      const std::string& outdir, int workers) {
  SweepAxis a = gap;
  a.param = "model.gap";
  SweepAxis b = eta;
  b.param = "pulse.eta";
  return run_sweep(base, a, b, outdir, workers);
}

SweepResult sweep_lambda_eta(const RunConfig& base, const SweepAxis& lambda,
                             const SweepAxis& eta, const std::string& outdir, int workers) {
  SweepAxis a = lambda;
  a.param = "bath.lambda";
  SweepAxis b = eta;
  b.param = "pulse.eta";
  return run_sweep(base, a, b, outdir, workers);
}

void export_surfaces(const RunConfig& cfg_in, const std::string& path) {
  RunConfig cfg = cfg_in;
  if (cfg.analysis.q_points < 2 || cfg.analysis.q_min >= cfg.analysis.q_max)
    throw ConfigError("ERROR: invalid analysis grid for surface export");
  const auto grid = analysis_grid(cfg.analysis);
  SurfaceTable table;
  try {
    table = adiabatic_surfaces(cfg.model, grid);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  std::string csv = "q,ground,diabat_e1,diabat_e2,adiabatic_lower,adiabatic_upper\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = grid[i];
    const double harm = 0.5 * cfg.model.omega_t * q * q;
    csv += format_double(q);
    csv += ',' + format_double(table.ground[i]);
    csv += ',' + format_double(cfg.model.eps1 + cfg.model.kappa1() * q + harm);
    csv += ',' + format_double(cfg.model.eps2 + cfg.model.kappa2() * q + harm);
    csv += ',' + format_double(table.lower[i]);
    csv += ',' + format_double(table.upper[i]);
    csv += '\n';
  }
  write_file(path, csv);
}

void export_pulse(const RunConfig& cfg_in, const std::string& path) {
  RunConfig cfg = cfg_in;
  resolve(cfg);
  const double t_end = std::max(2.0 * cfg.pulse.t_center,
                                cfg.pulse.t_center + 6.0 * effective_duration(cfg.pulse));
  std::string csv = "t_fs,field,envelope,frequency_cm\n";
  for (double t = 0.0; t <= t_end + 1e-9; t += 0.1) {
    csv += format_double(t);
    csv += ',' + format_double(field(cfg.pulse, t));
    csv += ',' + format_double(envelope(cfg.pulse, t));
    csv += ',' + format_double(instantaneous_frequency(cfg.pulse, t));
    csv += '\n';
  }
  write_file(path, csv);

  std::vector<double> omegas;
  for (double w = cfg.pulse.omega0 - 2500.0; w <= cfg.pulse.omega0 + 2500.0 + 1e-9; w += 2.5)
    omegas.push_back(w);
  const std::vector<double> mag = spectrum(cfg.pulse, omegas);
  std::string spec_csv = "omega_cm,magnitude\n";
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    spec_csv += format_double(omegas[i]);
    spec_csv += ',' + format_double(mag[i]);
    spec_csv += '\n';
  }
  write_file(path + ".spectrum.csv", spec_csv);
}

std::vector<std::string> linspace_values(double from, double to, int steps) {
  if (steps < 1) throw ConfigError("ERROR: sweep needs at least one step");
  std::vector<std::string> v;
  v.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v.push_back(format_double(from));
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v.push_back(format_double(from + (to - from) * i / (steps - 1)));
  return v;
}

}  // namespace cichirp
