#include "crossroads/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossroads {

ThetaField::ThetaField(Constant c) : repr_(c) {
  if (!(c.value >= 0.0 && c.value <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
}

double ThetaField::at(Vec2 x) const noexcept {
  if (const auto* c = std::get_if<Constant>(&repr_)) return c->value;
  return std::get<Indicator>(repr_).region.contains(x) ? 1.0 : 0.0;
}

Vec2 micro_sum(Population p, Vec2 x, std::span<const AgentState> agents,
               const InteractionParams& params, const DomainSpec& domain) noexcept {
  Vec2 sum;
  for (const auto& a : agents) sum += kernel_eval(p, a.population, x, a.position, params, domain);
  return sum;
}

namespace {

// Midpoint value of K over a sub-cell. The sub-cell is split 2x2 while the
// evaluation point is within one diagonal of its centre (up to `near` times)
// or the neighbourhood circle crosses it (up to `edge` times).
Vec2 mean_kernel(Population p, Population q, Vec2 x, const RoadSpec& road, double along,
                 double across, double size_along, double size_across, int near, int edge,
                 const Model& model) noexcept {
  const Vec2 centre = road.point(along, across);
  if (near > 0 || edge > 0) {
    const double diagonal = std::hypot(size_along, size_across);
    const double r = (centre - x).norm();
    const bool split_near = near > 0 && r < diagonal;
    const bool split_edge = edge > 0 && std::abs(r - model.params.radius(p, q)) < 0.5 * diagonal;
    if (split_near || split_edge) {
      const double a = 0.25 * size_along, b = 0.25 * size_across;
      Vec2 sum;
      for (double da : {-a, a}) {
        for (double db : {-b, b}) {
          sum += mean_kernel(p, q, x, road, along + da, across + db, 0.5 * size_along,
                             0.5 * size_across, near - 1, edge - 1, model);
        }
      }
      return 0.25 * sum;
    }
  }
  return kernel_eval(p, q, x, centre, model.params, model.domain);
}

}  // namespace

Vec2 macro_integral(Population p, Population q, Vec2 x, const DensityField& density_q,
                    const Model& model) noexcept {
  const RoadSpec& road = model.domain.road(q);
  const MacroGrid& grid = density_q.grid;
  const double radius = model.params.radius(p, q);
  const double centre = road.longitudinal(x);
  const double lo = std::max(centre - radius, 0.0);
  const double hi = std::min(centre + radius, grid.length());
  if (lo > hi) return {};

  // The neighbourhood's straight edges are axis-aligned, so sub-cells are
  // clipped to them exactly; only the circular edge is left to the midpoint rule.
  Interval along_ok{lo, hi};
  Interval across_ok = road.band;
  if (p == q) {
    along_ok.lo = std::max(along_ok.lo, centre);
  } else {
    along_ok.hi = std::min(along_ok.hi, centre);
    across_ok.lo = std::max(across_ok.lo, model.domain.road(p).longitudinal(x));
  }
  if (along_ok.lo >= along_ok.hi || across_ok.lo >= across_ok.hi) return {};

  const double dx = grid.dx();
  const double target = std::min(dx, radius / model.quadrature.longitudinal_divisor);
  const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(dx / target - 1e-9)));
  const double h = dx / static_cast<double>(sub);
  const int nt = std::max(model.quadrature.transverse_cells, 1);
  const double strip = road.width() / nt;

  Vec2 sum;
  for (std::size_t k = grid.cell_of(along_ok.lo), last = grid.cell_of(along_ok.hi); k <= last; ++k) {
    const double rho = density_q.values[k];
    if (rho == 0.0) continue;
    Vec2 cell_sum;
    for (std::size_t j = 0; j < sub; ++j) {
      const double s0 = static_cast<double>(k) * dx + static_cast<double>(j) * h;
      const double a0 = std::max(s0, along_ok.lo), a1 = std::min(s0 + h, along_ok.hi);
      if (a0 >= a1) continue;
      for (int t = 0; t < nt; ++t) {
        const double c0 = road.band.lo + t * strip;
        const double b0 = std::max(c0, across_ok.lo), b1 = std::min(c0 + strip, across_ok.hi);
        if (b0 >= b1) continue;
        const double area = (a1 - a0) * (b1 - b0);
        cell_sum += area * mean_kernel(p, q, x, road, 0.5 * (a0 + a1), 0.5 * (b0 + b1), a1 - a0,
                                       b1 - b0, model.quadrature.refine_levels,
                                       model.quadrature.edge_refine_levels, model);
      }
    }
    sum += rho * cell_sum;
  }
  return model.totals(q) * sum;
}

VelocityTerms velocity_terms(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept {
  VelocityTerms terms;
  terms.desired = model.domain.road(p).desired_velocity;
  terms.micro = micro_sum(p, x, state.agents, model.params, model.domain);
  for (Population q : kPopulations) terms.macro += macro_integral(p, q, x, state.density(q), model);
  return terms;
}

Vec2 multiscale_velocity(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept {
  const double theta = model.theta.at(x);
  Vec2 v = model.domain.road(p).desired_velocity;
  if (theta != 0.0) v += theta * micro_sum(p, x, state.agents, model.params, model.domain);
  if (theta != 1.0) {
    Vec2 macro;
    for (Population q : kPopulations) macro += macro_integral(p, q, x, state.density(q), model);
    v += (1.0 - theta) * macro;
  }
  return v;
}

double project(Population p, Vec2 v, const DomainSpec& domain) noexcept {
  return dot(v, domain.road(p).longitudinal_unit());
}

double projected_speed(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept {
  return project(p, multiscale_velocity(p, x, state, model), model.domain);
}

}  // namespace crossroads
