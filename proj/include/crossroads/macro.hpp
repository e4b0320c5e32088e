#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "crossroads/geometry.hpp"

namespace crossroads {

/// Uniform 1D finite-volume grid along one road.
class MacroGrid {
 public:
  MacroGrid(Population road, std::size_t cells, double length);

  Population road() const noexcept { return road_; }
  std::size_t cells() const noexcept { return cells_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }
  /// Index of the cell containing longitudinal coordinate s (clamped to the grid).
  std::size_t cell_of(double s) const noexcept;

  bool operator==(const MacroGrid&) const = default;

 private:
  Population road_;
  std::size_t cells_;
  double length_;
  double dx_;
};

/// Per-cell 2D probability density [1/m^2], constant across the road width.
struct DensityField {
  MacroGrid grid;
  std::vector<double> values;

  explicit DensityField(MacroGrid g) : grid(g), values(g.cells(), 0.0) {}
  DensityField(MacroGrid g, std::vector<double> v);

  /// Density at longitudinal coordinate s; zero off the grid.
  double at(double s) const noexcept;
  bool operator==(const DensityField&) const = default;
};

/// Upstream boundary state. `density` is the ghost-cell value rho_b.
struct InflowSpec {
  double density{0.0};

  /// rho_b = 1 / (N |v_des| dt_b width): over the planned run the inflow
  /// carries unit probability mass, matching N injected cars.
  static InflowSpec from_totals(double total_cars, double desired_speed, double injection_period,
                                double width);
};

struct BoundaryFluxes {
  double inflow{0.0};   ///< rho * speed through x = 0 [1/(m s)]
  double outflow{0.0};  ///< rho * speed through x = L
};

struct TransportResult {
  DensityField field;
  BoundaryFluxes fluxes;
};

class CflViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One explicit step of the conservative first-order upwind scheme for
/// d_t rho + d_s(rho * speed) = 0 with per-cell speeds at cell centres.
/// Interface flux: max(s_i, 0) rho_i + min(s_{i+1}, 0) rho_{i+1}.
/// The upstream ghost holds rho_b with the first cell's speed, the
/// downstream ghost holds 0. Throws CflViolation if dt * max|s| > dx.
TransportResult transport_step(const DensityField& field, std::span<const double> cell_speeds,
                               double dt, const InflowSpec& inflow);

/// dx / max |s| over all roads; +infinity when every speed is zero.
double cfl_dt(std::span<const std::span<const double>> speeds_per_road, double dx) noexcept;

/// Sum of rho * dx * width.
double total_mass(const DensityField& field, double width) noexcept;

}  // namespace crossroads
