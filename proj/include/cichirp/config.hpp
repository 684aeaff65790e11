#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cichirp/bath.hpp"
#include "cichirp/heom.hpp"
#include "cichirp/model.hpp"
#include "cichirp/pulse.hpp"

// Flat key-value run configuration. Keys are dotted paths mirroring the
// parameter structs (model.omega_t, bath.lambda_t, pulse.eta, ...); every
// default lives in the shipped defaults file, which is embedded in the binary
// at build time.

namespace cichirp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisParams {
  double q_min = -4.5;
  double q_max = 4.5;
  int q_points = 181;
  double window_lo = 1800.0;  // yield averaging window [fs]
  double window_hi = 2000.0;
  double q_barrier = 0.0;     // region boundary; used when q_barrier_auto is false
  bool q_barrier_auto = true;
};

struct RunConfig {
  ModelParams model;
  BathParams bath;
  PulseParams pulse;
  HeomParams heom;
  AnalysisParams analysis;
  bool omega0_auto = true;    // pulse.omega0 = vertical gap (eps2) when true
  bool t_center_auto = true;  // pulse.t_center = 3 * stretched duration when true
};

// configuration shipped with the tool (configs/defaults.cfg, embedded)
RunConfig default_config();

// defaults overlaid with the given file
RunConfig load_config(const std::string& path);

// defaults overlaid with config text (tests); origin names the source in errors
RunConfig parse_config(const std::string& text, const std::string& origin);

// set one dotted key; also accepts the linked paths bath.lambda (both baths)
// and model.gap (eps2 = eps1 + gap)
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// fill auto-derived fields and cross-validate; throws ConfigError
void resolve(RunConfig& cfg);

// the projection grid described by the analysis block
std::vector<double> analysis_grid(const AnalysisParams& a);

// (key, value) pairs for every configuration key, in the defaults-file order,
// with auto fields emitted as their resolved values
std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& cfg);

// shortest round-trip decimal form, locale-independent
std::string format_double(double v);

}  // namespace cichirp
