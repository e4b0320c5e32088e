#include "crossroads/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crossroads {

namespace {

// Keeps the accepted Courant number strictly below 1 so that rounding in the
// upwind update cannot push a cell below zero.
constexpr double kCflSafety = 1.0 - 1e-12;

// Clock tolerance for hitting output times and t_max.
constexpr double kTimeEps = 1e-9;

using CellSpeeds = std::array<std::vector<double>, 2>;

CellSpeeds sample_cell_speeds(const SimulationState& state, const ScenarioConfig& config,
                              const Model& model) {
  CellSpeeds s;
  const ScalesView view = state.view();
  for (Population p : kPopulations) {
    const RoadSpec& road = config.domain.road(p);
    const MacroGrid& grid = state.density(p).grid;
    auto& out = s[index_of(p)];
    out.resize(grid.cells());
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      out[i] = projected_speed(p, road.point(grid.center(i), road.centerline()), view, model);
    }
  }
  return s;
}

[[noreturn]] void fail(const std::string& what, const SimulationState& state) {
  std::ostringstream os;
  os << what << " at t=" << state.time << " (step " << state.steps << ", " << state.agents.size()
     << " agents)";
  throw SimulationError(os.str(), state);
}

}  // namespace

InflowSpec ScenarioConfig::inflow(Population p) const {
  const RoadSpec& road = domain.road(p);
  return InflowSpec::from_totals(totals(p), road.desired_velocity.norm(), injection_period,
                                 road.width());
}

PopulationTotals planned_totals(double t_max, double injection_period) {
  const double n = std::max(1.0, std::ceil(t_max / injection_period - 1e-12));
  return PopulationTotals{{n, n}};
}

SimulationState initial_state(const ScenarioConfig& config) {
  return SimulationState{0.0,
                         {},
                         DensityField(config.grid(Population::one)),
                         DensityField(config.grid(Population::two)),
                         Injector(config.seed),
                         0,
                         0,
                         0};
}

StepResult step(const SimulationState& state, const ScenarioConfig& config, double t_stop) {
  const Model model = config.model();
  const CellSpeeds speeds = sample_cell_speeds(state, config, model);

  for (Population p : kPopulations) {
    const auto& sp = speeds[index_of(p)];
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (!std::isfinite(sp[i])) {
        fail("non-finite speed on road " + std::to_string(label_of(p)) + " cell " + std::to_string(i),
             state);
      }
    }
  }

  const std::array<std::span<const double>, 2> per_road{speeds[0], speeds[1]};
  const double dx = std::min(state.density1.grid.dx(), state.density2.grid.dx());
  const double dt_cfl = cfl_dt(per_road, dx);
  const double to_stop = t_stop - state.time;
  double dt = std::max(std::min({config.dt_max, dt_cfl * kCflSafety, to_stop}), 0.0);
  // Absorb a rounding sliver before t_stop instead of taking a vanishing extra step.
  if (std::isfinite(t_stop) && dt == config.dt_max &&
      to_stop - dt <= kTimeEps * std::max(1.0, std::abs(t_stop))) {
    dt = to_stop;
  }

  StepResult out{state, {}};
  StepDiagnostics& diag = out.diagnostics;
  SimulationState& next = out.state;
  diag.dt = dt;
  diag.min_density = std::numeric_limits<double>::infinity();

  for (Population p : kPopulations) {
    const std::size_t k = index_of(p);
    const double width = config.domain.road(p).width();
    const DensityField& before = state.density(p);
    TransportResult tr = transport_step(before, speeds[k], dt, config.inflow(p));

    double max_speed = 0.0;
    for (double s : speeds[k]) max_speed = std::max(max_speed, std::abs(s));
    diag.courant = std::max(diag.courant, dt * max_speed / before.grid.dx());

    diag.mass_before[k] = total_mass(before, width);
    diag.mass_after[k] = total_mass(tr.field, width);
    diag.fluxes[k] = tr.fluxes;
    const double boundary = dt * width * (tr.fluxes.inflow - tr.fluxes.outflow);
    const double scale = std::max({diag.mass_before[k], diag.mass_after[k],
                                   dt * width * (std::abs(tr.fluxes.inflow) + std::abs(tr.fluxes.outflow)),
                                   std::numeric_limits<double>::min()});
    const double err = std::abs((diag.mass_after[k] - diag.mass_before[k]) - boundary) / scale;
    diag.mass_balance_error = std::max(diag.mass_balance_error, err);

    for (std::size_t i = 0; i < tr.field.values.size(); ++i) {
      const double v = tr.field.values[i];
      if (!std::isfinite(v)) {
        fail("non-finite density on road " + std::to_string(label_of(p)) + " cell " + std::to_string(i),
             state);
      }
      diag.min_density = std::min(diag.min_density, v);
    }
    next.density(p) = std::move(tr.field);
  }

  const ScalesView view = state.view();
  const VelocitySampler sampler = [&](Population p, Vec2 x) {
    return multiscale_velocity(p, x, view, model);
  };
  try {
    next.agents = advance_agents(state.agents, sampler, dt);
  } catch (const NumericalError& e) {
    fail(e.what(), state);
  }

  next.time = dt == to_stop ? t_stop : state.time + dt;

  const InjectionSpec injection{config.injection_period, config.seed};
  auto fresh = inject_agents(next.time, injection, config.domain, next.injector);
  diag.injected = fresh.size();
  next.injected += fresh.size();
  next.agents.insert(next.agents.end(), fresh.begin(), fresh.end());

  RetireResult retired = retire_agents(next.agents, config.domain);
  diag.retired = retired.removed;
  next.retired += retired.removed;
  next.agents = std::move(retired.kept);

  ++next.steps;
  diag.time = next.time;
  return out;
}

double probe_value(const SimulationState& state, const Probe& probe) noexcept {
  return state.density(probe.road).at(probe.position);
}

namespace {

SnapshotRecord capture(const SimulationState& state, const ScenarioConfig& config, double dt,
                       double courant) {
  SnapshotRecord r;
  r.time = state.time;
  r.density[0] = state.density1.values;
  r.density[1] = state.density2.values;
  r.agents = state.agents;
  r.probe_values.reserve(config.probes.size());
  for (const auto& pr : config.probes) r.probe_values.push_back(probe_value(state, pr));
  r.dt = dt;
  r.courant = courant;
  return r;
}

ProbeSample sample_probes(const SimulationState& state, const ScenarioConfig& config) {
  ProbeSample s{state.time, {}};
  s.values.reserve(config.probes.size());
  for (const auto& pr : config.probes) s.values.push_back(probe_value(state, pr));
  return s;
}

// Tracks the next multiple of `period` the clock has to reach.
class Schedule {
 public:
  explicit Schedule(double period) : period_(period) {}
  bool due(double t) {
    if (!(period_ > 0.0)) return false;
    if (t + kTimeEps * std::max(1.0, t) < static_cast<double>(next_) * period_) return false;
    next_ = static_cast<std::uint64_t>(std::floor((t + kTimeEps * std::max(1.0, t)) / period_)) + 1;
    return true;
  }

 private:
  double period_;
  std::uint64_t next_{0};
};

}  // namespace

RunResult run(const ScenarioConfig& config) {
  std::vector<SnapshotRecord> snaps;
  std::vector<ProbeSample> series;
  std::vector<StepDiagnostics> steps;
  SimulationState state = initial_state(config);
  Schedule snapshot_schedule(config.snapshot_every);
  Schedule probe_schedule(config.probe_every);

  snapshot_schedule.due(0.0);
  probe_schedule.due(0.0);
  snaps.push_back(capture(state, config, 0.0, 0.0));
  series.push_back(sample_probes(state, config));

  while (state.time < config.t_max) {
    StepResult sr = step(state, config, config.t_max);
    state = std::move(sr.state);
    const bool last = state.time >= config.t_max;
    if (snapshot_schedule.due(state.time) || last) {
      snaps.push_back(capture(state, config, sr.diagnostics.dt, sr.diagnostics.courant));
    }
    if (probe_schedule.due(state.time) || last) series.push_back(sample_probes(state, config));
    steps.push_back(sr.diagnostics);
  }
  return RunResult{std::move(snaps), std::move(series), std::move(steps), std::move(state)};
}

double oscillation_index(std::span<const double> times, std::span<const double> values, double t0,
                         double t1) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("oscillation_index: times and values differ in length");
  }
  std::vector<double> window;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t0 && times[i] <= t1) window.push_back(values[i]);
  }
  if (window.size() < kMinOscillationSamples) {
    throw std::invalid_argument("oscillation_index: " + std::to_string(window.size()) +
                                " samples in window, need at least " +
                                std::to_string(kMinOscillationSamples));
  }
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  if (*lo == *hi) return 0.0;
  const double n = static_cast<double>(window.size());
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : window) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (mean == 0.0) return sd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sd / std::abs(mean);
}

}  // namespace crossroads
