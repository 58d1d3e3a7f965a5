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
#include "ldphull/legendre.hpp"
#include "ldphull/oracle.hpp"
#include "ldphull/solver.hpp"

#include "support/closed_forms.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

using namespace ldphull;
using ldphull::testing::drifted_gaussian_rate;
using ldphull::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

IncrementModel gaussian(Vec2 mean = Vec2::Zero()) {
  return IncrementModel::gaussian(mean, Mat2::Identity());
}

// Positions of every occurrence of v.
std::vector<std::size_t> occurrences(const std::vector<Vec2>& seq, const Vec2& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] == v) idx.push_back(i);
  }
  return idx;
}

}  // namespace

TEST_CASE("discrete curve bookkeeping") {
  const std::vector<Vec2> v{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto curve = make_discrete_curve(gaussian(), v);
  CHECK(curve.n == 4);
  CHECK(curve.area == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(curve.energy == doctest::Approx(0.5).epsilon(1e-15));
  const auto pts = curve.points();
  REQUIRE(pts.size() == 5);
  CHECK(pts.front() == Vec2::Zero());
  CHECK(pts[2] == Vec2(0.25, 0.25));
  CHECK(pts.back().norm() <= 1e-16);

  // Energy is a sorted sum, so any permutation gives the identical double.
  Gen gen(8);
  const auto model = gen.gaussian();
  std::vector<Vec2> w;
  for (int i = 0; i < 40; ++i) w.push_back(gen.vec(3.0));
  const double e = discrete_energy(model, w);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(w.begin(), w.end(), gen.engine());
    CHECK(discrete_energy(model, w) == e);
  }
}

TEST_CASE("minimize_discrete examples") {
  const auto iso = minimize_discrete(gaussian(), 1.0, 64);
  CHECK(std::abs(iso.curve.energy - kPi) <= 0.02 * kPi);
  CHECK(iso.feasibility <= 1e-6);
  CHECK(iso.stationarity <= 1e-4);
  CHECK(std::abs(std::abs(iso.curve.area) - 1.0) <= 1e-6);

  const double drift_ref = drifted_gaussian_rate(1.0);
  const auto drift = minimize_discrete(gaussian({1, 0}), 1.0, 64);
  CHECK(std::abs(drift.curve.energy - drift_ref) <= 0.02 * drift_ref);
  CHECK(drift.feasibility <= 1e-6);

  // Small areas pull the velocities onto the drift.
  const Vec2 mu(0.5, -0.2);
  double prev = std::numeric_limits<double>::infinity();
  for (double a : {1e-1, 1e-2, 1e-3}) {
    const auto r = minimize_discrete(gaussian(mu), a, 32);
    CHECK(r.curve.energy < prev);
    prev = r.curve.energy;
    if (a == 1e-3) {
      CHECK(r.curve.energy <= 0.05);
      for (const Vec2& v : r.curve.velocities) CHECK((v - mu).norm() <= 0.3);
    }
  }
}

TEST_CASE("minimize_discrete errors") {
  CHECK_THROWS_AS(minimize_discrete(gaussian(), 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(minimize_discrete(gaussian(), 0.0, 16), std::invalid_argument);
  try {
    minimize_discrete(IncrementModel::atoms({{1, 1}, {1, -1}}, {0.5, 0.5}), 0.1, 16);
    FAIL("expected NotFullPlane");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFullPlane);
  }
  OracleOptions starved;
  starved.max_outer = 1;
  starved.max_inner = 2;
  try {
    minimize_discrete(gaussian(), 1.0, 64, starved);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("oracle agrees with the closed forms from above") {
  for (double a : {0.5, 1.0}) {
    const double iso_ref = rate_of_area(gaussian(), a).jA;
    const double drift_ref = rate_of_area(gaussian({1, 0}), a).jA;
    const double iso = minimize_discrete(gaussian(), a, 128).curve.energy;
    const double drift = minimize_discrete(gaussian({1, 0}), a, 128).curve.energy;
    CHECK(iso <= 1.03 * iso_ref);
    CHECK(iso >= iso_ref - 1e-3);
    CHECK(drift <= 1.03 * drift_ref);
    CHECK(drift >= drift_ref - 1e-3);
  }
}

TEST_CASE("oracle energies do not increase under refinement") {
  for (const auto& model : {gaussian(), gaussian({1, 0})}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {16, 32, 64, 128}) {
      const double e = minimize_discrete(model, 1.0, n).curve.energy;
      CHECK(e <= prev + 1e-6);
      prev = e;
    }
  }
}

TEST_CASE("convexify_curve") {
  const auto model = gaussian({0.2, 0.1});
  // Already convex: counterclockwise turning with the chord as reference.
  const std::vector<Vec2> convex{{1, -1}, {1, 0}, {1, 1}};
  const auto same = convexify_curve(make_discrete_curve(model, convex),
                                    Orientation::Counterclockwise);
  CHECK(same.velocities == convex);

  // Cross-module agreement on a zigzag.
  const std::vector<Vec2> zig{{1, 1}, {1, -1}, {1, 1}, {1, -1}};
  const auto curve = make_discrete_curve(model, zig);
  for (auto o : {Orientation::Clockwise, Orientation::Counterclockwise}) {
    const auto c = convexify_curve(curve, o);
    const auto line = convexify(PolygonalLine(curve.points()), o);
    CHECK(hull_area(PolygonalLine(c.points())) ==
          doctest::Approx(hull_area(line)).epsilon(1e-14));
    CHECK(hull_area(PolygonalLine(c.points())) >
          hull_area(PolygonalLine(curve.points())));
    CHECK(c.energy == curve.energy);
  }
}

TEST_CASE("property: convexify_curve preserves energy and grows areas") {
  Gen gen(1000);
  const auto model = gen.gaussian();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Vec2> v;
    const int n = gen.integer(2, 16);
    for (int i = 0; i < n; ++i) v.push_back(gen.vec(2.0));
    const auto curve = make_discrete_curve(model, v);
    const auto o = trial % 2 ? Orientation::Clockwise : Orientation::Counterclockwise;
    const auto c = convexify_curve(curve, o);
    CHECK(c.energy == curve.energy);
    CHECK(std::abs(discrete_energy(model, c.velocities) - curve.energy) <=
          1e-12 * std::max(1.0, curve.energy));
    const double before = hull_area(PolygonalLine(curve.points()));
    const double after = hull_area(PolygonalLine(c.points()));
    CHECK(before <= after + 1e-12);
    CHECK(std::abs(curve.area) <= after + 1e-12);
    CHECK(std::abs(c.area) == doctest::Approx(after).epsilon(1e-9));

    // Idempotent on the exact velocity sequence.
    CHECK(convexify_curve(c, o).velocities == c.velocities);
  }
}

TEST_CASE("property: runs of equal velocities stay contiguous") {
  Gen gen(31);
  const auto model = gaussian();
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Vec2> v;
    const int n = 4 * gen.integer(2, 6);
    for (int i = 0; i < n; ++i) v.push_back(gen.dyadic_vec());
    // A dyadic block on which the curve is affine.
    const int block = 4;
    const int start = block * gen.integer(0, n / block - 1);
    const Vec2 w = gen.dyadic_vec();
    for (int i = start; i < start + block; ++i) v[i] = w;

    const auto c = convexify_curve(make_discrete_curve(model, v),
                                   Orientation::Counterclockwise);
    const auto before = occurrences(v, w);
    const auto after = occurrences(c.velocities, w);
    CHECK(after.size() == before.size());
    CHECK(after.back() - after.front() + 1 == after.size());
  }
}
