#include "crossroads/micro.hpp"

#include <string>

namespace crossroads {

std::vector<AgentState> advance_agents(std::span<const AgentState> agents,
                                       const VelocitySampler& velocity, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("advance_agents: negative dt");
  std::vector<Vec2> v;
  v.reserve(agents.size());
  for (const auto& a : agents) {
    const Vec2 vel = velocity(a.population, a.position);
    if (!vel.finite()) {
      throw NumericalError("non-finite velocity for agent " + std::to_string(a.id) + " (population " +
                           std::to_string(label_of(a.population)) + ")");
    }
    v.push_back(vel);
  }
  std::vector<AgentState> out(agents.begin(), agents.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].position = out[i].position + dt * v[i];
  }
  return out;
}

double uniform01(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<AgentState> inject_agents(double t, const InjectionSpec& spec,
                                      const DomainSpec& domain, Injector& injector) {
  if (!(spec.period > 0.0)) throw std::invalid_argument("inject_agents: period must be positive");
  std::vector<AgentState> fresh;
  while (static_cast<double>(injector.next_epoch) * spec.period < t) {
    for (Population p : kPopulations) {
      const RoadSpec& road = domain.road(p);
      const double across = road.band.lo + road.width() * uniform01(injector.rng);
      fresh.push_back(AgentState{injector.next_id++, p, road.point(0.0, across)});
    }
    ++injector.next_epoch;
  }
  return fresh;
}

RetireResult retire_agents(std::span<const AgentState> agents, const DomainSpec& domain) {
  RetireResult r;
  r.kept.reserve(agents.size());
  for (const auto& a : agents) {
    const RoadSpec& road = domain.road(a.population);
    if (road.longitudinal(a.position) > road.length) {
      ++r.removed;
    } else {
      r.kept.push_back(a);
    }
  }
  return r;
}

}  // namespace crossroads
