#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "crossroads/geometry.hpp"

namespace crossroads {

using AgentId = std::uint64_t;

/// A point car.
struct AgentState {
  AgentId id{0};
  Population population{Population::one};
  Vec2 position;

  bool operator==(const AgentState&) const = default;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VelocitySampler = std::function<Vec2(Population, Vec2)>;

/// Explicit Euler: X <- X + dt * v(p, X). Every velocity is sampled before any
/// position changes, so the result does not depend on agent order.
/// Throws NumericalError naming the agent if a sampled velocity is not finite.
std::vector<AgentState> advance_agents(std::span<const AgentState> agents,
                                       const VelocitySampler& velocity, double dt);

/// Portable uniform draw in [0, 1) from the top 53 bits of a 64-bit word.
/// std::uniform_real_distribution is implementation-defined, this is not.
double uniform01(std::mt19937_64& rng) noexcept;

struct InjectionSpec {
  double period{0.9};  ///< dt_b [s]
  std::uint64_t seed{0};
};

/// Injection bookkeeping carried in the simulation state.
struct Injector {
  std::mt19937_64 rng;
  std::uint64_t next_epoch{0};  ///< index k of the next injection time k * period
  AgentId next_id{0};

  explicit Injector(std::uint64_t seed) : rng(seed) {}
  bool operator==(const Injector&) const = default;
};

/// Emits one car per population for every epoch k * period strictly before
/// `t` that has not been emitted yet. Cars enter at longitudinal coordinate 0
/// with a transverse coordinate uniform over the road band. Within an epoch
/// population 1 is drawn before population 2.
std::vector<AgentState> inject_agents(double t, const InjectionSpec& spec,
                                      const DomainSpec& domain, Injector& injector);

struct RetireResult {
  std::vector<AgentState> kept;
  std::size_t removed{0};
};

/// Drops cars whose longitudinal coordinate (along their own road) exceeds the road length.
RetireResult retire_agents(std::span<const AgentState> agents, const DomainSpec& domain);

}  // namespace crossroads
