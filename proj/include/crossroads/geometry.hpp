#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace crossroads {

/// Car population, identified with the road it travels on.
/// `one` is the horizontal (rightward) road, `two` the vertical (upward) one.
enum class Population : std::uint8_t { one = 1, two = 2 };

inline constexpr std::array<Population, 2> kPopulations{Population::one, Population::two};

constexpr std::size_t index_of(Population p) noexcept { return p == Population::one ? 0 : 1; }
constexpr int label_of(Population p) noexcept { return static_cast<int>(p); }
constexpr Population other(Population p) noexcept {
  return p == Population::one ? Population::two : Population::one;
}
Population population_from_label(int label);

struct Vec2 {
  double x1{0.0};
  double x2{0.0};

  constexpr Vec2 operator+(Vec2 o) const noexcept { return {x1 + o.x1, x2 + o.x2}; }
  constexpr Vec2 operator-(Vec2 o) const noexcept { return {x1 - o.x1, x2 - o.x2}; }
  constexpr Vec2 operator-() const noexcept { return {-x1, -x2}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x1 * s, x2 * s}; }
  constexpr Vec2& operator+=(Vec2 o) noexcept {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const noexcept { return std::hypot(x1, x2); }
  bool finite() const noexcept { return std::isfinite(x1) && std::isfinite(x2); }
};

constexpr Vec2 operator*(double s, Vec2 v) noexcept { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x1 * b.x1 + a.x2 * b.x2; }

/// Closed interval [lo, hi].
struct Interval {
  double lo{0.0};
  double hi{0.0};

  constexpr double length() const noexcept { return hi - lo; }
  constexpr double mid() const noexcept { return 0.5 * (lo + hi); }
  constexpr bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  constexpr bool operator==(const Interval&) const = default;
};

/// Closed axis-aligned rectangle.
struct Rect {
  Interval x1;
  Interval x2;

  constexpr bool contains(Vec2 p) const noexcept { return x1.contains(p.x1) && x2.contains(p.x2); }
  constexpr bool empty() const noexcept { return x1.hi < x1.lo || x2.hi < x2.lo; }
  constexpr bool operator==(const Rect&) const = default;
};

Rect intersect(const Rect& a, const Rect& b) noexcept;

/// A straight one-way road stripe. The longitudinal coordinate runs over
/// [0, length] along `longitudinal_unit`; `band` is the transverse extent.
struct RoadSpec {
  Population population{Population::one};
  double length{200.0};
  Interval band{95.0, 105.0};
  Vec2 desired_velocity{10.0, 0.0};

  /// 0 for a horizontal road (x1 is longitudinal), 1 for a vertical one.
  int axis() const noexcept { return population == Population::one ? 0 : 1; }
  Vec2 longitudinal_unit() const noexcept {
    return axis() == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  }
  double width() const noexcept { return band.length(); }
  double centerline() const noexcept { return band.mid(); }

  double longitudinal(Vec2 p) const noexcept { return axis() == 0 ? p.x1 : p.x2; }
  double transverse(Vec2 p) const noexcept { return axis() == 0 ? p.x2 : p.x1; }
  /// Point with the given longitudinal and transverse coordinates.
  Vec2 point(double along, double across) const noexcept {
    return axis() == 0 ? Vec2{along, across} : Vec2{across, along};
  }
  Rect rect() const noexcept {
    const Interval along{0.0, length};
    return axis() == 0 ? Rect{along, band} : Rect{band, along};
  }
  bool operator==(const RoadSpec&) const = default;
};

/// Two crossing roads; road1 horizontal, road2 vertical.
struct DomainSpec {
  RoadSpec road1;
  RoadSpec road2;
  Rect junction;

  const RoadSpec& road(Population p) const noexcept {
    return p == Population::one ? road1 : road2;
  }
  bool contains(Vec2 p) const noexcept { return road1.rect().contains(p) || road2.rect().contains(p); }
  bool operator==(const DomainSpec&) const = default;
};

/// Builds and validates a crossing. Throws std::invalid_argument if a road
/// has non-positive width or length, a desired velocity is not parallel to
/// its road, or the roads do not intersect.
DomainSpec make_domain(double length, Interval band1, Interval band2, double speed1,
                       double speed2);

/// The reference crossing: two 200 m roads, 10 m wide, centred on 100 m, both at 10 m/s.
DomainSpec reference_domain();

bool road_contains(const RoadSpec& road, Vec2 point) noexcept;

/// Membership of `y` in the interaction neighbourhood S_R(x) of a car of
/// population p looking at population q.
///
/// Endogenous (p == q): forward half-ball, (y - x) . u_p > 0.
/// Exogenous (p != q): forward quarter that faces the incoming crossing flow,
/// (y - x) . u_p >= 0 and (y - x) . u_q <= 0, with y != x.
/// In both cases |y - x| <= R and y must lie on the domain.
bool in_interaction_set(Population p, Population q, Vec2 x, Vec2 y, double radius,
                        const DomainSpec& domain) noexcept;

/// (y - x) / |y - x|. Throws std::domain_error for coincident points.
Vec2 unit_separation(Vec2 x, Vec2 y);

}  // namespace crossroads
