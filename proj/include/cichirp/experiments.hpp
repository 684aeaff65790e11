#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cichirp/config.hpp"
#include "cichirp/heom.hpp"
#include "cichirp/observables.hpp"

// Run orchestration and persistence.  One directory per run: manifest.json,
// frames.csv, pulse.csv, run.log.  Sweeps add per-cell directories plus a
// sweep.csv index.  All outputs except run.log (which carries wall time) are
// byte-deterministic for a given configuration.

namespace cichirp {

struct RunRecord {
  YieldResult yield;
  double yield_sensitivity = 0.0;  // d yield / d q_barrier, central difference
  double q_barrier = 0.0;
  std::array<double, 3> final_populations{};  // g, e1, e2 at the last frame
  double excited_peak = 0.0;                  // max excited population seen
  double period_fs = 0.0;  // <Q_t> period in the early window; NaN if absent
  PropagationSummary summary;
  std::vector<std::string> warnings;
  bool failed = false;       // aborted; partial outputs were still written
  std::string error;         // message when failed
  double error_t = 0.0;      // simulated time of the abort [fs]
};

// propagate one configuration and write its outputs; outdir "" skips writing
RunRecord run_single(const RunConfig& cfg, const std::string& outdir);

struct SweepAxis {
  std::string param;                // dotted path; bath.lambda and model.gap
                                    // address linked fields
  std::vector<std::string> values;  // applied via apply_override, in order
};

struct SweepResult {
  std::vector<RunRecord> cells;  // row-major over (a, b)
  int n_a = 0, n_b = 1;
};

// cartesian sweep over one or two axes; failed cells are recorded and the
// sweep continues; cells may run on parallel workers, outputs are identical
// for any worker count
SweepResult run_sweep(const RunConfig& base, const SweepAxis& a,
                      const std::optional<SweepAxis>& b, const std::string& outdir,
                      int workers = 1);

// campaign wrappers
SweepResult sweep_eta(const RunConfig& base, const SweepAxis& eta,
                      const std::string& outdir, int workers = 1);
SweepResult sweep_gap(const RunConfig& base, const SweepAxis& gap, const SweepAxis& eta,
                      const std::string& outdir, int workers = 1);
SweepResult sweep_lambda_eta(const RunConfig& base, const SweepAxis& lambda,
                             const SweepAxis& eta, const std::string& outdir,
                             int workers = 1);

// potential-surface table on the analysis grid
void export_surfaces(const RunConfig& cfg, const std::string& path);

// field trace to `path` and magnitude spectrum to `path`.spectrum.csv
void export_pulse(const RunConfig& cfg, const std::string& path);

// evenly spaced sweep values, formatted
std::vector<std::string> linspace_values(double from, double to, int steps);

}  // namespace cichirp
