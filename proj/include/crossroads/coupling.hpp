#pragma once

#include <array>
#include <span>
#include <variant>

#include "crossroads/geometry.hpp"
#include "crossroads/kernel.hpp"
#include "crossroads/macro.hpp"
#include "crossroads/micro.hpp"

namespace crossroads {

/// Weight of the microscopic (Dirac) part of the perceived car distribution.
class ThetaField {
 public:
  struct Constant {
    double value{0.0};
    bool operator==(const Constant&) const = default;
  };
  /// 1 inside the closed rectangle, 0 outside.
  struct Indicator {
    Rect region;
    bool operator==(const Indicator&) const = default;
  };

  ThetaField() = default;
  ThetaField(Constant c);
  ThetaField(Indicator i) : repr_(i) {}

  static ThetaField constant(double value) { return ThetaField(Constant{value}); }
  static ThetaField indicator(Rect region) { return ThetaField(Indicator{region}); }

  double at(Vec2 x) const noexcept;
  const std::variant<Constant, Indicator>& repr() const noexcept { return repr_; }
  bool operator==(const ThetaField&) const = default;

 private:
  std::variant<Constant, Indicator> repr_{Constant{0.0}};
};

/// Planned number of cars N^q per population over the whole run.
struct PopulationTotals {
  std::array<double, 2> cars{1.0, 1.0};

  double operator()(Population q) const noexcept { return cars[index_of(q)]; }
  bool operator==(const PopulationTotals&) const = default;
};

/// Midpoint-rule settings for the density integral: longitudinal sub-cell
/// size is min(dx, R / longitudinal_divisor); the road width is cut into
/// `transverse_cells` strips. Sub-cells close to the evaluation point, where
/// the kernel is steep, are split 2x2 up to `refine_levels` times; sub-cells
/// cut by the neighbourhood circle up to `edge_refine_levels` times.
struct QuadratureOptions {
  int transverse_cells{5};
  double longitudinal_divisor{10.0};
  int refine_levels{6};
  int edge_refine_levels{2};
  bool operator==(const QuadratureOptions&) const = default;
};

/// Everything that defines the velocity field apart from the evolving state.
struct Model {
  DomainSpec domain;
  InteractionParams params;
  ThetaField theta;
  PopulationTotals totals;
  QuadratureOptions quadrature;
};

/// Read-only view of the evolving scales.
struct ScalesView {
  std::span<const AgentState> agents;
  const DensityField& density1;
  const DensityField& density2;

  const DensityField& density(Population q) const noexcept {
    return q == Population::one ? density1 : density2;
  }
};

/// Sum over both populations and all alive agents of K^{pq}(x, X_j).
/// The 1/N^q of the empirical measure cancels the N^q prefactor.
Vec2 micro_sum(Population p, Vec2 x, std::span<const AgentState> agents,
               const InteractionParams& params, const DomainSpec& domain) noexcept;

/// N^q times the integral of K^{pq}(x, y) rho^q(y) over road q, by the midpoint
/// rule on sub-cells nested inside the macro cells.
Vec2 macro_integral(Population p, Population q, Vec2 x, const DensityField& density_q,
                    const Model& model) noexcept;

/// Contributions to the velocity at x, before weighting by theta.
struct VelocityTerms {
  Vec2 desired;
  Vec2 micro;  ///< micro_sum
  Vec2 macro;  ///< sum over q of macro_integral

  Vec2 combine(double theta) const noexcept { return desired + theta * micro + (1.0 - theta) * macro; }
};

VelocityTerms velocity_terms(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept;

/// v_des^p + theta(x) * micro + (1 - theta(x)) * macro. Terms whose weight is
/// exactly zero are skipped.
Vec2 multiscale_velocity(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept;

/// Longitudinal component of multiscale_velocity on road p.
double projected_speed(Population p, Vec2 x, const ScalesView& state, const Model& model) noexcept;

/// v . u_p
double project(Population p, Vec2 v, const DomainSpec& domain) noexcept;

}  // namespace crossroads
