#include "crossroads/macro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace crossroads {

MacroGrid::MacroGrid(Population road, std::size_t cells, double length)
    : road_(road), cells_(cells), length_(length), dx_(length / static_cast<double>(cells)) {
  if (cells < 2) throw std::invalid_argument("MacroGrid needs at least 2 cells");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("MacroGrid length must be positive and finite");
  }
}

std::size_t MacroGrid::cell_of(double s) const noexcept {
  if (!(s > 0.0)) return 0;
  const auto i = static_cast<std::size_t>(std::floor(s / dx_));
  return std::min(i, cells_ - 1);
}

DensityField::DensityField(MacroGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.cells()) throw std::invalid_argument("DensityField size mismatch");
}

double DensityField::at(double s) const noexcept {
  if (s < 0.0 || s > grid.length()) return 0.0;
  return values[grid.cell_of(s)];
}

InflowSpec InflowSpec::from_totals(double total_cars, double desired_speed,
                                   double injection_period, double width) {
  if (!(total_cars > 0.0) || !(desired_speed > 0.0) || !(injection_period > 0.0) ||
      !(width > 0.0)) {
    throw std::invalid_argument("InflowSpec::from_totals: all inputs must be positive");
  }
  return InflowSpec{1.0 / (total_cars * desired_speed * injection_period * width)};
}

TransportResult transport_step(const DensityField& field, std::span<const double> cell_speeds,
                               double dt, const InflowSpec& inflow) {
  const std::size_t n = field.grid.cells();
  if (cell_speeds.size() != n) throw std::invalid_argument("transport_step: speed count mismatch");
  if (!(dt >= 0.0)) throw std::invalid_argument("transport_step: negative dt");

  const double dx = field.grid.dx();
  double max_speed = 0.0;
  for (double s : cell_speeds) {
    if (!std::isfinite(s)) throw std::invalid_argument("transport_step: non-finite speed");
    max_speed = std::max(max_speed, std::abs(s));
  }
  const double courant = dt * max_speed / dx;
  if (courant > 1.0 + 1e-12) {
    throw CflViolation("transport_step: Courant number " + std::to_string(courant) + " > 1");
  }

  // flux[k] is the flux through the left face of cell k; flux[n] the outlet.
  std::vector<double> flux(n + 1);
  const auto& rho = field.values;
  flux[0] = std::max(cell_speeds[0], 0.0) * inflow.density + std::min(cell_speeds[0], 0.0) * rho[0];
  for (std::size_t k = 1; k < n; ++k) {
    flux[k] = std::max(cell_speeds[k - 1], 0.0) * rho[k - 1] + std::min(cell_speeds[k], 0.0) * rho[k];
  }
  flux[n] = std::max(cell_speeds[n - 1], 0.0) * rho[n - 1];

  TransportResult out{DensityField(field.grid), BoundaryFluxes{flux[0], flux[n]}};
  const double lambda = dt / dx;
  for (std::size_t k = 0; k < n; ++k) {
    out.field.values[k] = rho[k] - lambda * (flux[k + 1] - flux[k]);
  }
  return out;
}

double cfl_dt(std::span<const std::span<const double>> speeds_per_road, double dx) noexcept {
  double max_speed = 0.0;
  for (auto road : speeds_per_road) {
    for (double s : road) max_speed = std::max(max_speed, std::abs(s));
  }
  if (max_speed == 0.0) return std::numeric_limits<double>::infinity();
  return dx / max_speed;
}

double total_mass(const DensityField& field, double width) noexcept {
  double sum = 0.0;
  for (double v : field.values) sum += v;
  return sum * field.grid.dx() * width;
}

}  // namespace crossroads
