#include "cichirp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cichirp/default_config.hpp"

namespace cichirp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError("ERROR: key '" + key + "' expects a number, got '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError("ERROR: key '" + key + "' expects an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("ERROR: key '" + key + "' expects true or false, got '" + value + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto num = [&] { return parse_double(key, value); };
  auto integer = [&] { return parse_int(key, value); };

  if (key == "model.omega_t") cfg.model.omega_t = num();
  else if (key == "model.omega_c") cfg.model.omega_c = num();
  else if (key == "model.delta1") cfg.model.delta1 = num();
  else if (key == "model.delta2") cfg.model.delta2 = num();
  else if (key == "model.eps1") cfg.model.eps1 = num();
  else if (key == "model.eps2") cfg.model.eps2 = num();
  else if (key == "model.gap") cfg.model.eps2 = cfg.model.eps1 + num();
  else if (key == "model.v0") cfg.model.v0 = num();
  else if (key == "model.lambda_cpl") cfg.model.lambda_cpl = num();
  else if (key == "model.dipole") cfg.model.dipole = num();
  else if (key == "model.n_t") cfg.model.n_t = integer();
  else if (key == "model.n_c") cfg.model.n_c = integer();
  else if (key == "bath.lambda_t") cfg.bath.lambda_t = num();
  else if (key == "bath.lambda_c") cfg.bath.lambda_c = num();
  else if (key == "bath.lambda") cfg.bath.lambda_t = cfg.bath.lambda_c = num();
  else if (key == "bath.gamma") cfg.bath.gamma = num();
  else if (key == "bath.temperature") cfg.bath.temperature = num();
  else if (key == "bath.matsubara") cfg.bath.n_matsubara = integer();
  else if (key == "bath.low_temp") {
    if (value == "auto") cfg.bath.low_temp = BathParams::LowTemp::automatic;
    else if (value == "on") cfg.bath.low_temp = BathParams::LowTemp::on;
    else if (value == "off") cfg.bath.low_temp = BathParams::LowTemp::off;
    else throw ConfigError("ERROR: key 'bath.low_temp' expects auto, on, or off");
  }
  else if (key == "pulse.e0") cfg.pulse.e0 = num();
  else if (key == "pulse.t0") cfg.pulse.t0 = num();
  else if (key == "pulse.omega0") {
    if (value == "auto") cfg.omega0_auto = true;
    else { cfg.pulse.omega0 = num(); cfg.omega0_auto = false; }
  }
  else if (key == "pulse.eta") cfg.pulse.eta = num();
  else if (key == "pulse.t_center") {
    if (value == "auto") cfg.t_center_auto = true;
    else { cfg.pulse.t_center = num(); cfg.t_center_auto = false; }
  }
  else if (key == "heom.depth") cfg.heom.depth = integer();
  else if (key == "heom.dt") cfg.heom.dt = num();
  else if (key == "heom.t_end") cfg.heom.t_end = num();
  else if (key == "heom.frame_stride") cfg.heom.frame_stride = integer();
  else if (key == "heom.terminator") {
    if (value == "zero") cfg.heom.terminator = HeomParams::Terminator::zero;
    else if (value == "markovian") cfg.heom.terminator = HeomParams::Terminator::markovian;
    else throw ConfigError("ERROR: key 'heom.terminator' expects zero or markovian");
  }
  else if (key == "heom.threads") cfg.heom.threads = integer();
  else if (key == "heom.rwa") cfg.heom.rwa = parse_bool(key, value);
  else if (key == "analysis.q_min") cfg.analysis.q_min = num();
  else if (key == "analysis.q_max") cfg.analysis.q_max = num();
  else if (key == "analysis.q_points") cfg.analysis.q_points = integer();
  else if (key == "analysis.window_lo") cfg.analysis.window_lo = num();
  else if (key == "analysis.window_hi") cfg.analysis.window_hi = num();
  else if (key == "analysis.q_barrier") {
    if (value == "auto") cfg.analysis.q_barrier_auto = true;
    else { cfg.analysis.q_barrier = num(); cfg.analysis.q_barrier_auto = false; }
  }
  else throw ConfigError("ERROR: unknown configuration key '" + key + "'");
}

namespace {

void apply_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("ERROR: " + origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("ERROR: " + origin + ":" + std::to_string(line_no) +
                        ": empty key or value");
    try {
      apply_override(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (" + origin + ":" +
                        std::to_string(line_no) + ")");
    }
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  apply_text(cfg, kDefaultConfigText, "defaults.cfg");
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg = default_config();
  apply_text(cfg, text, origin);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("ERROR: cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void resolve(RunConfig& cfg) {
  if (cfg.omega0_auto) cfg.pulse.omega0 = cfg.model.eps2;
  if (cfg.t_center_auto) cfg.pulse.t_center = 3.0 * effective_duration(cfg.pulse);

  if (cfg.analysis.q_min >= cfg.analysis.q_max)
    throw ConfigError("ERROR: analysis.q_min must be below analysis.q_max");
  if (cfg.analysis.q_points < 2)
    throw ConfigError("ERROR: analysis.q_points must be at least 2");
  if (cfg.analysis.q_min > -4.0 || cfg.analysis.q_max < 4.0)
    throw ConfigError("ERROR: the projection grid must span at least [-4, 4]");
  if (!(cfg.analysis.window_lo < cfg.analysis.window_hi))
    throw ConfigError("ERROR: the analysis window must have positive length");
  if (cfg.heom.t_end < cfg.analysis.window_hi)
    throw ConfigError("ERROR: heom.t_end must reach the end of the analysis window");
  if (!cfg.analysis.q_barrier_auto &&
      (cfg.analysis.q_barrier <= cfg.analysis.q_min ||
       cfg.analysis.q_barrier >= cfg.analysis.q_max))
    throw ConfigError("ERROR: analysis.q_barrier must lie inside the projection grid");
  if (cfg.heom.threads < 1)
    throw ConfigError("ERROR: heom.threads must be at least 1");
}

std::vector<double> analysis_grid(const AnalysisParams& a) {
  std::vector<double> q(static_cast<std::size_t>(a.q_points));
  for (int i = 0; i < a.q_points; ++i)
    q[static_cast<std::size_t>(i)] =
        a.q_min + (a.q_max - a.q_min) * i / (a.q_points - 1);
  return q;
}

std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& cfg) {
  auto d = [](double v) { return format_double(v); };
  auto i = [](int v) { return std::to_string(v); };
  const char* low_temp =
      cfg.bath.low_temp == BathParams::LowTemp::automatic
          ? "auto"
          : (cfg.bath.low_temp == BathParams::LowTemp::on ? "on" : "off");
  const char* terminator =
      cfg.heom.terminator == HeomParams::Terminator::zero ? "zero" : "markovian";
  return {
      {"model.omega_t", d(cfg.model.omega_t)},
      {"model.omega_c", d(cfg.model.omega_c)},
      {"model.delta1", d(cfg.model.delta1)},
      {"model.delta2", d(cfg.model.delta2)},
      {"model.eps1", d(cfg.model.eps1)},
      {"model.eps2", d(cfg.model.eps2)},
      {"model.v0", d(cfg.model.v0)},
      {"model.lambda_cpl", d(cfg.model.lambda_cpl)},
      {"model.dipole", d(cfg.model.dipole)},
      {"model.n_t", i(cfg.model.n_t)},
      {"model.n_c", i(cfg.model.n_c)},
      {"bath.lambda_t", d(cfg.bath.lambda_t)},
      {"bath.lambda_c", d(cfg.bath.lambda_c)},
      {"bath.gamma", d(cfg.bath.gamma)},
      {"bath.temperature", d(cfg.bath.temperature)},
      {"bath.matsubara", i(cfg.bath.n_matsubara)},
      {"bath.low_temp", low_temp},
      {"pulse.e0", d(cfg.pulse.e0)},
      {"pulse.t0", d(cfg.pulse.t0)},
      {"pulse.omega0", d(cfg.pulse.omega0)},
      {"pulse.eta", d(cfg.pulse.eta)},
      {"pulse.t_center", d(cfg.pulse.t_center)},
      {"heom.depth", i(cfg.heom.depth)},
      {"heom.dt", d(cfg.heom.dt)},
      {"heom.t_end", d(cfg.heom.t_end)},
      {"heom.frame_stride", i(cfg.heom.frame_stride)},
      {"heom.terminator", terminator},
      {"heom.threads", i(cfg.heom.threads)},
      {"heom.rwa", cfg.heom.rwa ? "true" : "false"},
      {"analysis.q_min", d(cfg.analysis.q_min)},
      {"analysis.q_max", d(cfg.analysis.q_max)},
      {"analysis.q_points", i(cfg.analysis.q_points)},
      {"analysis.window_lo", d(cfg.analysis.window_lo)},
      {"analysis.window_hi", d(cfg.analysis.window_hi)},
      {"analysis.q_barrier",
       cfg.analysis.q_barrier_auto ? std::string("auto") : d(cfg.analysis.q_barrier)},
  };
}

}  // namespace cichirp
