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

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace ldphull {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Counterclockwise rotation through pi/2.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline double cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline Vec2 unit_direction(double theta) {
  return {std::cos(theta), std::sin(theta)};
}

/// Area of the convex hull of a point set (monotone chain + shoelace).
/// Zero for fewer than three points or collinear inputs.
double convex_hull_area(std::span<const Vec2> points);

/// Vertices of the convex hull in counterclockwise order, collinear points
/// dropped.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Shoelace sum 1/2 * sum a_i x a_{i+1} over consecutive vertices, without
/// an implicit closing edge.
double shoelace(std::span<const Vec2> vertices);

}  // namespace ldphull
