// crossroads: command-line driver for the crossing simulations.
//
//   crossroads run --scenario test2-mixed --out runs/mixed
//   crossroads metrics --probes runs/mixed/probes.csv --from 20 --to 60
//   crossroads config --scenario test1-multiscale > my.json

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "crossroads/config.hpp"
#include "crossroads/output.hpp"
#include "crossroads/sim.hpp"

namespace {

using namespace crossroads;

constexpr const char* kOutDirEnv = "CROSSROADS_OUT_DIR";

struct RunOptions {
  std::string scenario;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_max;
  std::optional<double> snapshot_every;
  std::optional<double> probe_every;
  std::optional<double> theta;
  std::string out_dir;
  bool quiet = false;
};

ScenarioConfig resolve_config(const RunOptions& o) {
  ScenarioConfig c = parse_config(o.config_path.empty() ? o.scenario : o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.t_max) {
    c.t_max = *o.t_max;
    c.totals = planned_totals(c.t_max, c.injection_period);
  }
  if (o.snapshot_every) c.snapshot_every = *o.snapshot_every;
  if (o.probe_every) c.probe_every = *o.probe_every;
  if (o.theta) {
    if (!(*o.theta >= 0.0 && *o.theta <= 1.0)) {
      throw ConfigError({"--theta-override must lie in [0, 1]"});
    }
    c.theta = ThetaField::constant(*o.theta);
  }
  validate(c);
  return c;
}

int do_run(const RunOptions& o) {
  const ScenarioConfig config = resolve_config(o);
  std::string out = o.out_dir;
  if (out.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    out = env && *env ? env : "out";
  }

  RunTiming timing{utc_timestamp(), {}};
  const auto wall0 = std::chrono::steady_clock::now();
  std::optional<RunResult> outcome;
  try {
    outcome.emplace(run(config));
  } catch (const SimulationError& e) {
    write_state_dump(e.state(), config, out);
    std::cerr << "error: " << e.what() << "\nstate dumped to " << out << "/failure_dump\n";
    return 3;
  }
  timing.finished = utc_timestamp();
  const RunResult& result = *outcome;
  const auto files = write_run(result, config, out, timing);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (!o.quiet) {
    const auto metrics = summary_metrics(result, config);
    std::cout << "scenario " << config.name << "  seed " << config.seed << "  t_max " << config.t_max
              << " s  steps " << result.steps.size() << "  wall " << secs << " s\n";
    std::cout << "injected " << result.final_state.injected << "  retired " << result.final_state.retired
              << "  alive " << result.final_state.agents.size() << "\n";
    for (const auto& m : metrics["oscillation_index"]) {
      std::cout << "oscillation index road " << m["road"] << " x=" << m["position"].get<double>()
                << " over [" << m["window"][0].get<double>() << ", " << m["window"][1].get<double>()
                << "]: " << m["value"] << "\n";
    }
    std::cout << "wrote";
    for (const auto& f : files) std::cout << ' ' << f.name << " (" << f.rows << " rows)";
    std::cout << ' ' << kManifestFile << " to " << out << "\n";
  }
  return 0;
}

int do_metrics(const std::string& path, double t0, double t1) {
  const auto series = read_probe_file(path);
  if (series.empty()) {
    std::cerr << "error: no probe samples in " << path << "\n";
    return 2;
  }
  int status = 0;
  for (const auto& s : series) {
    std::cout << "road " << label_of(s.road) << " x=" << s.position << " [" << t0 << ", " << t1 << "]: ";
    try {
      std::cout << oscillation_index(s.times, s.values, t0, t1) << "\n";
    } catch (const std::invalid_argument& e) {
      std::cout << "n/a (" << e.what() << ")\n";
      status = 2;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale two-road crossing simulator"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write snapshot files");
  auto* scen = run_cmd->add_option("--scenario", ro.scenario, "Built-in scenario name");
  auto* cfg = run_cmd->add_option("--config", ro.config_path, "JSON scenario file");
  scen->excludes(cfg);
  run_cmd->add_option("--seed", ro.seed, "RNG seed");
  run_cmd->add_option("--tmax", ro.t_max, "Final time [s] (re-derives planned car totals)");
  run_cmd->add_option("--out", ro.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
  run_cmd->add_option("--snapshot-every", ro.snapshot_every, "Snapshot period [s]");
  run_cmd->add_option("--probe-every", ro.probe_every, "Probe sampling period [s]");
  run_cmd->add_option("--theta-override", ro.theta, "Replace theta by this constant");
  run_cmd->add_flag("--quiet", ro.quiet, "Print nothing on success");

  std::string probes_path;
  double t0 = 20.0, t1 = 60.0;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute oscillation indices from a probes file");
  metrics_cmd->add_option("--probes", probes_path, "probes.csv written by 'run'")->required();
  metrics_cmd->add_option("--from", t0, "Window start [s]");
  metrics_cmd->add_option("--to", t1, "Window end [s]");

  std::string show_name;
  auto* config_cmd = app.add_subcommand("config", "Print a scenario as JSON");
  config_cmd->add_option("--scenario", show_name, "Built-in scenario name or JSON file")->required();

  auto* list_cmd = app.add_subcommand("scenarios", "List built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (ro.scenario.empty() && ro.config_path.empty()) {
        std::cerr << "error: run needs --scenario or --config\n";
        return 2;
      }
      return do_run(ro);
    }
    if (*metrics_cmd) return do_metrics(probes_path, t0, t1);
    if (*config_cmd) {
      std::cout << to_json(parse_config(show_name)).dump(2) << "\n";
      return 0;
    }
    if (*list_cmd) {
      for (const auto& n : builtin_scenario_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
