#pragma once

#include <array>

#include "crossroads/geometry.hpp"

namespace crossroads {

/// 2x2 table indexed by (observer population p, source population q).
struct PairTable {
  std::array<std::array<double, 2>, 2> v{};

  double operator()(Population p, Population q) const noexcept {
    return v[index_of(p)][index_of(q)];
  }
  double& operator()(Population p, Population q) noexcept { return v[index_of(p)][index_of(q)]; }
  bool operator==(const PairTable&) const = default;

  /// Table with one value on the diagonal (endogenous) and one off it (exogenous).
  static PairTable symmetric(double endogenous, double exogenous) noexcept {
    return PairTable{{{{endogenous, exogenous}, {exogenous, endogenous}}}};
  }
};

struct InteractionParams {
  PairTable eta;     ///< interaction rate [m^2/s when gamma = 1]
  PairTable cap;     ///< sensitivity threshold M [m/s]
  PairTable radius;  ///< neighbourhood radius R [m]
  double gamma{1.0};

  bool operator==(const InteractionParams&) const = default;
};

/// Bounded repulsive interaction felt at x (population p) from a presence
/// at y (population q):
///
///   K(x, y) = -min(eta / |y - x|^gamma, M) * 1_{S_R(x)}(y) * (y - x) / |y - x|
///
/// Zero whenever y is outside the neighbourhood, including y == x.
Vec2 kernel_eval(Population p, Population q, Vec2 x, Vec2 y, const InteractionParams& params,
                 const DomainSpec& domain) noexcept;

/// True iff the neighbourhood indicator is 1 and the singular branch
/// eta / |y - x|^gamma exceeds the cap M.
bool kernel_cap_active(Population p, Population q, Vec2 x, Vec2 y,
                       const InteractionParams& params, const DomainSpec& domain) noexcept;

}  // namespace crossroads
