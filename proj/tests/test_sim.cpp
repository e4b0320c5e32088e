#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crossroads/config.hpp"
#include "crossroads/sim.hpp"

using namespace crossroads;
using P = Population;

namespace {

ScenarioConfig free_flow(double t_max) {
  ScenarioConfig c = builtin_scenario("test1-multiscale");
  c.params.eta = PairTable::symmetric(0.0, 0.0);
  c.t_max = t_max;
  c.totals = planned_totals(t_max, c.injection_period);
  return c;
}

}  // namespace

TEST_CASE("planned totals") {
  CHECK(planned_totals(60.0, 0.9).cars[0] == 67.0);
  CHECK(planned_totals(90.0, 0.9).cars[1] == 100.0);
  CHECK(planned_totals(0.0, 0.9).cars[0] == 1.0);
}

TEST_CASE("first step from empty roads") {
  const ScenarioConfig c = builtin_scenario("test1-macro");
  const auto r = step(initial_state(c), c);
  CHECK(r.diagnostics.dt == 0.05);
  CHECK(r.state.time == 0.05);
  CHECK(r.diagnostics.injected == 2);
  CHECK(r.state.agents.size() == 2);
  CHECK(r.diagnostics.courant == doctest::Approx(0.25));
}

TEST_CASE("free-flow agent crosses the road in 20 s") {
  const ScenarioConfig c = free_flow(30.0);
  SimulationState s = step(initial_state(c), c).state;
  REQUIRE(s.agents.size() == 2);
  const AgentState first = s.agents[0];
  CHECK(first.position.x1 == 0.0);
  const double t_in = s.time;
  while (s.time < t_in + 20.0 - 1e-9) s = step(s, c).state;
  const AgentState* a = nullptr;
  for (const auto& x : s.agents) if (x.id == first.id) a = &x;
  REQUIRE(a != nullptr);
  CHECK(a->position.x1 == 200.0);
  CHECK(a->position.x2 == first.position.x2);
  s = step(s, c).state;
  for (const auto& x : s.agents) CHECK(x.id != first.id);
}

TEST_CASE("step stops exactly at the requested time") {
  const ScenarioConfig c = builtin_scenario("test1-macro");
  const auto r = step(initial_state(c), c, 0.03);
  CHECK(r.diagnostics.dt == doctest::Approx(0.03));
  CHECK(r.state.time == 0.03);
}

TEST_CASE("run bookkeeping") {
  ScenarioConfig c = builtin_scenario("test1-macro");
  c.t_max = 12.0;
  c.totals = planned_totals(c.t_max, c.injection_period);
  const RunResult r = run(c);

  CHECK(r.snapshots.size() == 13);
  CHECK(r.snapshots.front().time == 0.0);
  CHECK(r.snapshots.back().time == 12.0);
  CHECK(r.probe_series.size() == 121);

  double clock = 0.0;
  for (const auto& d : r.steps) {
    clock += d.dt;
    CHECK(d.courant <= 1.0);
    CHECK(d.mass_balance_error <= 1e-12);
    CHECK(d.min_density >= 0.0);
  }
  CHECK(std::abs(clock - c.t_max) <= c.dt_max);
  CHECK(r.final_state.injected == 2 * 14);  // epochs 0, 0.9, ..., 11.7
  CHECK(r.final_state.agents.size() == r.final_state.injected - r.final_state.retired);
}

TEST_CASE("test1-macro injects the planned cars") {
  const ScenarioConfig c = builtin_scenario("test1-macro");
  const RunResult r = run(c);
  CHECK(r.final_state.injected == 2 * 67);
  CHECK(r.snapshots.size() == 61);
}

TEST_CASE("zero duration gives the initial snapshot only") {
  ScenarioConfig c = builtin_scenario("test2-mixed");
  c.t_max = 0.0;
  const RunResult r = run(c);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.snapshots[0].time == 0.0);
  CHECK(r.snapshots[0].agents.empty());
  CHECK(r.steps.empty());
}

TEST_CASE("runs are repeatable") {
  ScenarioConfig c = builtin_scenario("test2-micro");
  c.t_max = 10.0;
  const RunResult a = run(c), b = run(c);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    CHECK(a.snapshots[i].time == b.snapshots[i].time);
    CHECK(a.snapshots[i].density == b.snapshots[i].density);
    CHECK(a.snapshots[i].agents == b.snapshots[i].agents);
  }
}

TEST_CASE("oscillation index") {
  std::vector<double> t, flat, alt, zero;
  for (int i = 0; i < 40; ++i) {
    t.push_back(i * 0.5);
    flat.push_back(0.2);
    alt.push_back(i % 2 ? 3.0 : 1.0);
    zero.push_back(0.0);
  }
  CHECK(oscillation_index(t, flat, 0.0, 20.0) == 0.0);
  CHECK(oscillation_index(t, alt, 0.0, 20.0) == doctest::Approx(0.5));
  CHECK(oscillation_index(t, zero, 0.0, 20.0) == 0.0);
  CHECK_THROWS_AS(oscillation_index(t, flat, 0.0, 9.0), std::invalid_argument);  // 19 samples
  CHECK_NOTHROW(oscillation_index(t, flat, 0.0, 9.5));

  std::vector<double> centred(alt);
  for (auto& v : centred) v -= 2.0;
  CHECK(oscillation_index(t, centred, 0.0, 20.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("uniform inflow without interactions does not oscillate") {
  const ScenarioConfig c = free_flow(60.0);
  const RunResult r = run(c);
  std::vector<double> t, v;
  for (const auto& s : r.probe_series) {
    t.push_back(s.time);
    v.push_back(s.values[0]);
  }
  CHECK(oscillation_index(t, v, 20.0, 60.0) < 0.05);
}
