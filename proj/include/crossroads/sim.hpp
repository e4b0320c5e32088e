#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "crossroads/coupling.hpp"
#include "crossroads/macro.hpp"
#include "crossroads/micro.hpp"

namespace crossroads {

/// Fixed observation point on one road.
struct Probe {
  Population road{Population::two};
  double position{0.0};  ///< longitudinal coordinate [m]
  bool operator==(const Probe&) const = default;
};

struct ScenarioConfig {
  std::string name{"custom"};
  DomainSpec domain{reference_domain()};
  std::size_t cells{100};
  InteractionParams params;
  ThetaField theta;
  PopulationTotals totals;
  QuadratureOptions quadrature;
  double dt_max{0.05};
  double injection_period{0.9};
  double t_max{60.0};
  std::uint64_t seed{1};
  double snapshot_every{1.0};
  double probe_every{0.1};
  std::vector<Probe> probes{{Population::two, 120.0}, {Population::two, 60.0}};

  Model model() const { return Model{domain, params, theta, totals, quadrature}; }
  InflowSpec inflow(Population p) const;
  MacroGrid grid(Population p) const { return MacroGrid(p, cells, domain.road(p).length); }
  bool operator==(const ScenarioConfig&) const = default;
};

/// N^p = ceil(t_max / dt_b), at least 1.
PopulationTotals planned_totals(double t_max, double injection_period);

struct SimulationState {
  double time{0.0};
  std::vector<AgentState> agents;
  DensityField density1;
  DensityField density2;
  Injector injector;
  std::uint64_t injected{0};
  std::uint64_t retired{0};
  std::uint64_t steps{0};

  const DensityField& density(Population p) const noexcept {
    return p == Population::one ? density1 : density2;
  }
  DensityField& density(Population p) noexcept { return p == Population::one ? density1 : density2; }
  ScalesView view() const noexcept { return ScalesView{agents, density1, density2}; }
};

/// Empty roads at t = 0.
SimulationState initial_state(const ScenarioConfig& config);

struct StepDiagnostics {
  double time{0.0};  ///< clock after the step
  double dt{0.0};
  double courant{0.0};
  std::array<double, 2> mass_before{};
  std::array<double, 2> mass_after{};
  std::array<BoundaryFluxes, 2> fluxes{};
  /// max over roads of |dM - dt*w*(F_in - F_out)| / max(M_before, M_after, dt*w*(|F_in|+|F_out|))
  double mass_balance_error{0.0};
  double min_density{0.0};
  std::size_t injected{0};
  std::size_t retired{0};
};

struct StepResult {
  SimulationState state;
  StepDiagnostics diagnostics;
};

/// A step failed on non-finite values; carries the pre-step state for dumping.
class SimulationError : public NumericalError {
 public:
  SimulationError(const std::string& what, SimulationState state)
      : NumericalError(what), state_(std::move(state)) {}
  const SimulationState& state() const noexcept { return state_; }

 private:
  SimulationState state_;
};

/// Advances both scales by one step from a single snapshot:
///  1. projected speeds at every cell centre and full velocities at every agent,
///  2. dt = min(dt_max, dt_cfl, t_stop - time),
///  3. upwind transport of both densities and Euler update of the agents,
///  4. injection then retirement,
///  5. clock update.
StepResult step(const SimulationState& state, const ScenarioConfig& config,
                double t_stop = std::numeric_limits<double>::infinity());

/// Full record of the system at one instant.
struct SnapshotRecord {
  double time{0.0};
  std::array<std::vector<double>, 2> density;
  std::vector<AgentState> agents;
  std::vector<double> probe_values;
  double dt{0.0};       ///< step that produced this state; 0 at t = 0
  double courant{0.0};
};

struct ProbeSample {
  double time{0.0};
  std::vector<double> values;  ///< one per configured probe
};

struct RunResult {
  std::vector<SnapshotRecord> snapshots;
  std::vector<ProbeSample> probe_series;
  std::vector<StepDiagnostics> steps;
  SimulationState final_state;
};

double probe_value(const SimulationState& state, const Probe& probe) noexcept;

/// Runs [0, t_max]. Snapshots are taken at t = 0, at every multiple of
/// snapshot_every reached by the clock, and at t_max; probes likewise at
/// multiples of probe_every. Deterministic for a given config.
RunResult run(const ScenarioConfig& config);

/// Coefficient of variation (population std / mean) of the samples with
/// time in [t0, t1]. Returns 0 for an identically zero series and +infinity
/// when the mean is zero but the series is not. Throws std::invalid_argument
/// with fewer than 20 samples in the window.
double oscillation_index(std::span<const double> times, std::span<const double> values, double t0,
                         double t1);

inline constexpr std::size_t kMinOscillationSamples = 20;

}  // namespace crossroads
