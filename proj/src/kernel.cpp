#include "crossroads/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace crossroads {

namespace {

double singular_branch(double eta, double r, double gamma) noexcept {
  return gamma == 1.0 ? eta / r : eta / std::pow(r, gamma);
}

}  // namespace

Vec2 kernel_eval(Population p, Population q, Vec2 x, Vec2 y, const InteractionParams& params,
                 const DomainSpec& domain) noexcept {
  if (!in_interaction_set(p, q, x, y, params.radius(p, q), domain)) return {};
  const Vec2 d = y - x;
  const double r = d.norm();
  const double magnitude = std::min(singular_branch(params.eta(p, q), r, params.gamma), params.cap(p, q));
  return Vec2{-magnitude * d.x1 / r, -magnitude * d.x2 / r};
}

bool kernel_cap_active(Population p, Population q, Vec2 x, Vec2 y,
                       const InteractionParams& params, const DomainSpec& domain) noexcept {
  if (!in_interaction_set(p, q, x, y, params.radius(p, q), domain)) return false;
  const double r = (y - x).norm();
  return singular_branch(params.eta(p, q), r, params.gamma) > params.cap(p, q);
}

}  // namespace crossroads
