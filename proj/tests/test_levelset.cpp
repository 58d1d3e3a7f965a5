/*
 * Copyright 2026 The ldphull Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ldphull/errors.hpp"
#include "ldphull/levelset.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ldphull;
using ldphull::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

IncrementModel gaussian(Vec2 mean = Vec2::Zero(), double var = 1.0) {
  return IncrementModel::gaussian(mean, var * Mat2::Identity());
}

IncrementModel square_atoms() {
  return IncrementModel::atoms({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}},
                               {0.25, 0.25, 0.25, 0.25});
}

IncrementModel skewed_atoms() {
  return IncrementModel::atoms({{2, 0}, {-1, 1.5}, {-0.5, -1}},
                               {0.3, 0.3, 0.4});
}

}  // namespace

TEST_CASE("level_radius examples") {
  for (double th = 0.0; th < 2 * kPi; th += 0.3) {
    CHECK(level_radius(gaussian(), 0.5, unit_direction(th)) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(level_radius(gaussian({1, 0}), 1.5, {1, 0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(level_radius(gaussian(), 2.0, {0, 1}) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(level_radius(gaussian(), 0.0, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(level_radius(gaussian(), -1.0, {1, 0}), std::invalid_argument);
  const auto lattice = IncrementModel::atoms({{1, 1}, {1, -1}}, {0.5, 0.5});
  try {
    level_radius(lattice, 1.0, {1, 0});
    FAIL("expected NotFullPlane");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFullPlane);
  }
}

TEST_CASE("property: ray solves land on the level set") {
  Gen gen(31);
  const IncrementModel models[] = {gaussian({0.4, -0.7}, 0.6), square_atoms(),
                                   skewed_atoms(), regularize(square_atoms(), 0.01)};
  for (const auto& model : models) {
    for (int trial = 0; trial < 100; ++trial) {
      const double alpha = std::exp(gen.uniform(-4.0, 2.0));
      const Vec2 dir = unit_direction(gen.uniform(0.0, 2 * kPi));
      const double r = level_radius(model, alpha, dir);
      CHECK(r > 0.0);
      CHECK(std::abs(cumulant(model, r * dir) - alpha) <= 1e-12 * std::max(1.0, alpha));
    }
  }
}

TEST_CASE("trace_level") {
  CHECK_THROWS_AS(trace_level(gaussian(), 0.5, 7), std::invalid_argument);

  const auto poly = trace_level(gaussian(), 0.5, 4096);
  CHECK(poly.closed());
  CHECK(std::abs(hull_area(poly) - kPi) <= 1e-5);

  // Convex: every vertex is a vertex of the hull, and turns are one-sided.
  for (const auto& model : {gaussian({1, 0}), skewed_atoms()}) {
    const auto level = trace_level(model, 1.5, 256);
    const auto& v = level.vertices();
    CHECK(convex_hull({v.data(), v.size() - 1}).size() == v.size() - 1);
    const auto e = level.edges();
    for (std::size_t i = 0; i + 1 < e.size(); ++i) CHECK(cross(e[i], e[i + 1]) > 0.0);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      CHECK(std::abs(cumulant(model, v[i]) - 1.5) <= 1e-12 * 1.5);
    }
  }
}

TEST_CASE("sub-level areas") {
  CHECK(sublevel_area(gaussian(), 0.5) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(sublevel_area(gaussian(), 3.0) == doctest::Approx(6 * kPi).epsilon(1e-12));
  Gen gen(1);
  for (int i = 0; i < 10; ++i) {
    const Vec2 ell = unit_direction(gen.uniform(0.0, 2 * kPi));
    for (Side s : {Side::Positive, Side::Negative}) {
      CHECK(half_area(gaussian(), 0.5, ell, s) == doctest::Approx(kPi / 2).epsilon(1e-12));
    }
  }
  const auto drifted = gaussian({1, 0});
  const double e = sublevel_area(drifted, 1.5);
  const double sum = half_area(drifted, 1.5, {0, 1}, Side::Positive) +
                     half_area(drifted, 1.5, {0, 1}, Side::Negative);
  CHECK(std::abs(sum - e) <= 1e-6 * e);
  // Drift (1,0): the level set is the circle about -mean of radius sqrt(2 alpha + 1).
  CHECK(e == doctest::Approx(kPi * 4.0).epsilon(1e-12));

  // The traced polygon converges to the same area.
  const auto atoms = skewed_atoms();
  CHECK(std::abs(hull_area(trace_level(atoms, 0.8, 8192)) - sublevel_area(atoms, 0.8)) <=
        1e-5 * sublevel_area(atoms, 0.8));
}

TEST_CASE("arc mass") {
  CHECK(arc_mass(gaussian(), 0.5, {1, 0}, Side::Positive) ==
        doctest::Approx(kPi).epsilon(1e-12));
  // Var 2: K = |u|^2, level 1 is the unit circle with |grad K| = 2.
  CHECK(arc_mass(gaussian(Vec2::Zero(), 2.0), 1.0, {0, 1}, Side::Negative) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
  for (double alpha : {0.1, 1.0, 7.0}) {
    CHECK(level_mass(gaussian(), alpha) == doctest::Approx(2 * kPi).epsilon(1e-12));
  }
  Gen gen(2);
  const auto sq = square_atoms();
  for (int i = 0; i < 20; ++i) {
    const Vec2 ell = unit_direction(gen.uniform(0.0, kPi));
    const double alpha = gen.uniform(0.1, 3.0);
    CHECK(std::abs(arc_mass(sq, alpha, ell, Side::Positive) -
                   arc_mass(sq, alpha, ell, Side::Negative)) <=
          1e-8 * arc_mass(sq, alpha, ell, Side::Positive));
  }
}

TEST_CASE("property: coarea identity against finite differences") {
  Gen gen(3);
  const IncrementModel models[] = {gaussian({1, 0}), skewed_atoms()};
  for (const auto& model : models) {
    for (int i = 0; i < 20; ++i) {
      const double alpha = gen.uniform(0.2, 3.0);
      const Vec2 ell = unit_direction(gen.uniform(0.0, 2 * kPi));
      const Side side = i % 2 ? Side::Positive : Side::Negative;
      const double h = 1e-4;
      const double fd = (half_area(model, alpha + h, ell, side) -
                         half_area(model, alpha - h, ell, side)) /
                        (2 * h);
      const double lam = dE_dalpha(model, alpha, ell, side);
      CHECK(lam == arc_mass(model, alpha, ell, side));
      CHECK(std::abs(fd - lam) <= 1e-3 * lam);
    }
  }
  const auto m = level_measures(gaussian({0.3, 0.2}, 0.5), 1.2);
  CHECK(m.mass == level_mass(gaussian({0.3, 0.2}, 0.5), 1.2));
  CHECK(m.area == sublevel_area(gaussian({0.3, 0.2}, 0.5), 1.2));
}

TEST_CASE("arc parametrization") {
  const auto arc = arc_parametrization(gaussian(), 0.5, {1, 0}, Side::Positive, 201);
  CHECK(arc.mass == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(arc.area == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK((arc.samples.front() - Vec2(1, 0)).norm() <= 1e-12);
  CHECK((arc.samples.back() - Vec2(-1, 0)).norm() <= 1e-12);
  CHECK((arc.samples[100] - Vec2(0, 1)).norm() <= 1e-12);
  for (const Vec2& d : arc.derivs) CHECK(std::abs(d.norm() - kPi) <= 1e-4);

  const auto neg = arc_parametrization(gaussian(), 0.5, {1, 0}, Side::Negative, 201);
  CHECK((neg.samples[100] - Vec2(0, -1)).norm() <= 1e-12);
}

TEST_CASE("property: speed law and linear cumulative mass") {
  Gen gen(4);
  const IncrementModel models[] = {gaussian({1, 0}), skewed_atoms(),
                                   regularize(square_atoms(), 0.05)};
  for (const auto& model : models) {
    for (int trial = 0; trial < 6; ++trial) {
      const double alpha = gen.uniform(0.3, 2.0);
      const Vec2 ell = unit_direction(gen.uniform(0.0, 2 * kPi));
      const Side side = trial % 2 ? Side::Positive : Side::Negative;
      const int n = 513;
      const auto arc = arc_parametrization(model, alpha, ell, side, n);
      CHECK(arc.times.size() == static_cast<std::size_t>(n));

      // |g'(t)| = lambda |grad K(g(t))|, and g' is tangent to the level set.
      for (int i = 1; i + 1 < n; ++i) {
        const Vec2 grad = cumulant_gradient(model, arc.samples[i]);
        CHECK(std::abs(arc.derivs[i].norm() - arc.mass * grad.norm()) <=
              1e-6 * arc.mass * grad.norm());
        CHECK(std::abs(arc.derivs[i].dot(grad)) <= 1e-8 * arc.derivs[i].norm() * grad.norm());
      }

      // Cumulative mass from chords weighted by 1/|grad K| grows like t lambda.
      double cum = 0.0;
      double worst = 0.0;
      for (int i = 1; i < n; ++i) {
        const Vec2 mid = 0.5 * (arc.samples[i] + arc.samples[i - 1]);
        const double chord = (arc.samples[i] - arc.samples[i - 1]).norm();
        cum += chord / cumulant_gradient(model, mid).norm();
        worst = std::max(worst, std::abs(cum - arc.times[i] * arc.mass));
      }
      CHECK(worst <= 1e-4 * arc.mass);
    }
  }
}

TEST_CASE("property: sqrt E is strictly concave") {
  const IncrementModel models[] = {gaussian({1, 0}), skewed_atoms(), square_atoms()};
  for (const auto& model : models) {
    const double da = 0.05;
    double prev_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 60; ++i) {
      const double a0 = 0.05 + i * da;
      const double slope =
          (std::sqrt(sublevel_area(model, a0 + da)) - std::sqrt(sublevel_area(model, a0))) /
          da;
      CHECK(slope < prev_slope - 1e-8);
      prev_slope = slope;
    }
  }
}
