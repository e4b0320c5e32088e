#include "doctest.h"

#include <cmath>
#include <random>

#include "crossroads/kernel.hpp"

using namespace crossroads;
using P = Population;

namespace {

InteractionParams unit_params() {
  return {PairTable::symmetric(1.0, 1.0), PairTable::symmetric(15.0, 15.0),
          PairTable::symmetric(10.0, 10.0), 1.0};
}

}  // namespace

TEST_CASE("kernel values") {
  const DomainSpec d = reference_domain();
  const auto k = unit_params();

  CHECK(kernel_eval(P::one, P::one, {50, 100}, {52, 100}, k, d) == Vec2{-0.5, 0.0});
  CHECK_FALSE(kernel_cap_active(P::one, P::one, {50, 100}, {52, 100}, k, d));

  CHECK(kernel_eval(P::one, P::one, {50, 100}, {50.001, 100}, k, d) == Vec2{-15.0, 0.0});
  CHECK(kernel_cap_active(P::one, P::one, {50, 100}, {50.001, 100}, k, d));

  CHECK(kernel_eval(P::one, P::one, {50, 100}, {48, 100}, k, d) == Vec2{});
  CHECK(kernel_eval(P::one, P::one, {50, 100}, {50, 100}, k, d) == Vec2{});
  CHECK(kernel_eval(P::one, P::one, {50, 100}, {61, 100}, k, d) == Vec2{});

  // Crossing flow: a car of road 2 ahead-right of a road 1 car pushes it back and up.
  const Vec2 v = kernel_eval(P::one, P::two, {96, 100}, {99, 96}, k, d);
  CHECK(v.x1 == doctest::Approx(-0.12));
  CHECK(v.x2 == doctest::Approx(0.16));
}

TEST_CASE("kernel with gamma != 1") {
  const DomainSpec d = reference_domain();
  auto k = unit_params();
  k.gamma = 2.0;
  k.eta = PairTable::symmetric(8.0, 8.0);
  CHECK(kernel_eval(P::one, P::one, {50, 100}, {54, 100}, k, d).x1 == doctest::Approx(-0.5));
  CHECK(kernel_eval(P::one, P::one, {50, 100}, {50.5, 100}, k, d).x1 == doctest::Approx(-15.0));
}

TEST_CASE("kernel per-pair parameters") {
  const DomainSpec d = reference_domain();
  InteractionParams k{PairTable::symmetric(1.0, 35.0), PairTable::symmetric(15.0, 50.0),
                      PairTable::symmetric(10.0, 20.0), 1.0};
  // Exogenous radius 20 reaches a car 15 m away, endogenous radius 10 does not.
  CHECK(kernel_eval(P::one, P::two, {85, 100}, {100, 99}, k, d).norm() > 0.0);
  CHECK(kernel_eval(P::one, P::one, {85, 100}, {100, 99}, k, d) == Vec2{});
  // Exogenous cap 50 vs eta 35 at distance 0.01: eta/r = 3500 is capped.
  CHECK(kernel_eval(P::one, P::two, {99, 100}, {99.01, 100}, k, d).norm() == doctest::Approx(50.0));
}

TEST_CASE("kernel properties on random inputs") {
  const DomainSpec d = reference_domain();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> along(0.0, 200.0), across(95.0, 105.0), off(-25.0, 25.0),
      param(0.01, 50.0), radius(0.5, 25.0);

  for (int n = 0; n < 20000; ++n) {
    const P p = (n & 1) ? P::one : P::two;
    const P q = (n & 2) ? P::one : P::two;
    InteractionParams k;
    k.eta(p, q) = param(rng);
    k.cap(p, q) = param(rng);
    k.radius(p, q) = radius(rng);
    k.gamma = (n % 3 == 0) ? 1.0 : 0.5 + 2.0 * (param(rng) / 50.0);
    const Vec2 x = d.road(p).point(along(rng), across(rng));
    const Vec2 y = x + Vec2{off(rng), off(rng)};
    const Vec2 kv = kernel_eval(p, q, x, y, k, d);
    const Vec2 sep = y - x;
    const double r = sep.norm();
    const double up = dot(sep, d.road(p).longitudinal_unit());
    const double uq = dot(sep, d.road(q).longitudinal_unit());

    REQUIRE(kv.finite());
    CHECK(kv.norm() <= k.cap(p, q) * (1.0 + 1e-12));
    CHECK(dot(kv, sep) <= 0.0);
    if (r > k.radius(p, q) || !d.contains(y) || r == 0.0) CHECK(kv == Vec2{});
    if (p == q && up <= 0.0) CHECK(kv == Vec2{});
    if (p != q && (up < 0.0 || uq > 0.0)) CHECK(kv == Vec2{});
    if (kernel_cap_active(p, q, x, y, k, d)) CHECK(kv.norm() == doctest::Approx(k.cap(p, q)));
  }
}
