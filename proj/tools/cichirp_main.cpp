#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cichirp/constants.hpp"
#include "cichirp/experiments.hpp"

namespace {

using namespace cichirp;

std::string trim_ws(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

RunConfig make_config(const std::string& config_path, const std::vector<std::string>& sets) {
  RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("ERROR: --set expects key=value, got '" + kv + "'");
    apply_override(cfg, trim_ws(kv.substr(0, eq)), trim_ws(kv.substr(eq + 1)));
  }
  return cfg;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item =
        trim_ws(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct AxisCli {
  std::string param;
  std::string values;
  double from = 0.0, to = 0.0;
  int steps = 0;
};

SweepAxis make_axis(const AxisCli& cli) {
  SweepAxis ax;
  ax.param = cli.param;
  if (!cli.values.empty()) {
    ax.values = split_csv(cli.values);
    if (ax.values.empty())
      throw ConfigError("ERROR: sweep axis '" + cli.param + "' has an empty value list");
  } else if (cli.steps > 0) {
    ax.values = linspace_values(cli.from, cli.to, cli.steps);
  } else {
    throw ConfigError("ERROR: sweep axis '" + cli.param +
                      "' needs --values or --from/--to/--steps");
  }
  return ax;
}

int report_sweep(const SweepResult& result, const std::string& outdir) {
  int failed = 0;
  for (const auto& c : result.cells) failed += c.failed ? 1 : 0;
  std::cout << result.cells.size() << " cells -> " << outdir << "\n";
  if (failed > 0) {
    std::cerr << "ERROR: " << failed << " of " << result.cells.size()
              << " cells failed; see per-cell manifests\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + kToolVersion +
               ": chirped-pulse control at a conical intersection"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "configuration file (defaults apply otherwise)");
  app.add_option("--set", sets, "override one key, e.g. --set pulse.eta=-10")
      ->take_all();

  auto* cmd_run = app.add_subcommand("run", "propagate one configuration");
  std::string run_out;
  cmd_run->add_option("--out", run_out, "output directory")->required();

  auto* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter");
  AxisCli ax1;
  std::string sweep_out;
  int workers = 1;
  cmd_sweep->add_option("--param", ax1.param, "dotted parameter path")->required();
  cmd_sweep->add_option("--values", ax1.values, "comma-separated values");
  cmd_sweep->add_option("--from", ax1.from, "range start");
  cmd_sweep->add_option("--to", ax1.to, "range end");
  cmd_sweep->add_option("--steps", ax1.steps, "range point count");
  cmd_sweep->add_option("--out", sweep_out, "output directory")->required();
  cmd_sweep->add_option("--workers", workers, "parallel cells");

  auto* cmd_sweep2d = app.add_subcommand("sweep2d", "sweep two parameters");
  AxisCli ax2a, ax2b;
  std::string sweep2d_out;
  int workers2d = 1;
  cmd_sweep2d->add_option("--param-a", ax2a.param, "first (outer) parameter")->required();
  cmd_sweep2d->add_option("--values-a,--values", ax2a.values, "values for axis a");
  cmd_sweep2d->add_option("--from-a", ax2a.from, "axis-a range start");
  cmd_sweep2d->add_option("--to-a", ax2a.to, "axis-a range end");
  cmd_sweep2d->add_option("--steps-a", ax2a.steps, "axis-a point count");
  cmd_sweep2d->add_option("--param-b", ax2b.param, "second (inner) parameter")->required();
  cmd_sweep2d->add_option("--values-b", ax2b.values, "values for axis b");
  cmd_sweep2d->add_option("--from-b,--from", ax2b.from, "axis-b range start");
  cmd_sweep2d->add_option("--to-b,--to", ax2b.to, "axis-b range end");
  cmd_sweep2d->add_option("--steps-b,--steps", ax2b.steps, "axis-b point count");
  cmd_sweep2d->add_option("--out", sweep2d_out, "output directory")->required();
  cmd_sweep2d->add_option("--workers", workers2d, "parallel cells");

  auto* cmd_surfaces = app.add_subcommand("surfaces", "export potential surfaces");
  std::string surfaces_out;
  cmd_surfaces->add_option("--out", surfaces_out, "output CSV file")->required();

  auto* cmd_pulse = app.add_subcommand("pulse", "export the field trace and spectrum");
  std::string pulse_out;
  cmd_pulse->add_option("--out", pulse_out,
                        "output CSV file; the spectrum goes to <out>.spectrum.csv")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_run->parsed()) {
      const RunConfig cfg = make_config(config_path, sets);
      const RunRecord rec = run_single(cfg, run_out);
      if (rec.failed) {
        std::cerr << rec.error << " (t = " << rec.error_t << " fs)\n";
        return 2;
      }
      std::cout << "yield " << format_double(rec.yield.yield) << " (pop_c "
                << format_double(rec.yield.pop_c) << ", pop_d "
                << format_double(rec.yield.pop_d) << ") -> " << run_out << "\n";
      return 0;
    }
    if (cmd_sweep->parsed()) {
      const RunConfig cfg = make_config(config_path, sets);
      const SweepResult result =
          run_sweep(cfg, make_axis(ax1), std::nullopt, sweep_out, workers);
      return report_sweep(result, sweep_out);
    }
    if (cmd_sweep2d->parsed()) {
      const RunConfig cfg = make_config(config_path, sets);
      const SweepResult result =
          run_sweep(cfg, make_axis(ax2a), make_axis(ax2b), sweep2d_out, workers2d);
      return report_sweep(result, sweep2d_out);
    }
    if (cmd_surfaces->parsed()) {
      RunConfig cfg = make_config(config_path, sets);
      export_surfaces(cfg, surfaces_out);
      std::cout << "surfaces -> " << surfaces_out << "\n";
      try {
        std::cout << "q_ci " << format_double(locate_ci(cfg.model)) << ", q_barrier "
                  << format_double(find_barrier(cfg.model).q_barrier) << "\n";
      } catch (const std::runtime_error& e) {
        std::cout << e.what() << "\n";
      }
      return 0;
    }
    if (cmd_pulse->parsed()) {
      const RunConfig cfg = make_config(config_path, sets);
      export_pulse(cfg, pulse_out);
      std::cout << "pulse -> " << pulse_out << " and " << pulse_out << ".spectrum.csv\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const PropagationError& e) {
    std::cerr << e.what() << " (t = " << e.t << " fs)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
