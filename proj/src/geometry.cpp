#include "crossroads/geometry.hpp"

#include <algorithm>
#include <string>

namespace crossroads {

Population population_from_label(int label) {
  if (label == 1) return Population::one;
  if (label == 2) return Population::two;
  throw std::invalid_argument("population label must be 1 or 2, got " + std::to_string(label));
}

Rect intersect(const Rect& a, const Rect& b) noexcept {
  return Rect{{std::max(a.x1.lo, b.x1.lo), std::min(a.x1.hi, b.x1.hi)},
              {std::max(a.x2.lo, b.x2.lo), std::min(a.x2.hi, b.x2.hi)}};
}

DomainSpec make_domain(double length, Interval band1, Interval band2, double speed1,
                       double speed2) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("road length must be positive and finite");
  }
  if (!(band1.length() > 0.0) || !(band2.length() > 0.0)) {
    throw std::invalid_argument("road width must be positive");
  }
  if (!(speed1 > 0.0) || !(speed2 > 0.0)) {
    throw std::invalid_argument("desired speeds must be positive");
  }
  DomainSpec d;
  d.road1 = RoadSpec{Population::one, length, band1, Vec2{speed1, 0.0}};
  d.road2 = RoadSpec{Population::two, length, band2, Vec2{0.0, speed2}};
  d.junction = intersect(d.road1.rect(), d.road2.rect());
  if (d.junction.empty()) throw std::invalid_argument("roads do not intersect");
  return d;
}

DomainSpec reference_domain() {
  return make_domain(200.0, {95.0, 105.0}, {95.0, 105.0}, 10.0, 10.0);
}

bool road_contains(const RoadSpec& road, Vec2 point) noexcept {
  return road.rect().contains(point);
}

bool in_interaction_set(Population p, Population q, Vec2 x, Vec2 y, double radius,
                        const DomainSpec& domain) noexcept {
  const Vec2 d = y - x;
  if (d.norm() > radius) return false;
  const double ahead = dot(d, domain.road(p).longitudinal_unit());
  if (p == q) {
    if (!(ahead > 0.0)) return false;
  } else {
    const double along_other = dot(d, domain.road(q).longitudinal_unit());
    if (!(ahead >= 0.0) || !(along_other <= 0.0) || (d.x1 == 0.0 && d.x2 == 0.0)) return false;
  }
  return domain.contains(y);
}

Vec2 unit_separation(Vec2 x, Vec2 y) {
  const Vec2 d = y - x;
  const double r = d.norm();
  if (r == 0.0) throw std::domain_error("unit_separation: coincident points");
  return Vec2{d.x1 / r, d.x2 / r};
}

}  // namespace crossroads
