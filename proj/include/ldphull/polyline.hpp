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

#include "ldphull/geometry.hpp"
#include "ldphull/legendre.hpp"

#include <cstddef>
#include <vector>

namespace ldphull {

enum class Orientation { Clockwise, Counterclockwise };

/// Directed polygonal line [a_1, ..., a_n], n >= 2, consecutive vertices
/// distinct. Closed when a_1 == a_n.
class PolygonalLine {
 public:
  explicit PolygonalLine(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool closed() const { return vertices_.front() == vertices_.back(); }

  /// Edge vectors a_{i+1} - a_i in traversal order.
  std::vector<Vec2> edges() const;

 private:
  std::vector<Vec2> vertices_;
};

/// Order in which convexification traverses the edges: edges sorted by the
/// angle, measured in the given orientation, from `reference`; ties broken by
/// increasing norm, then by original index. Returns indices into `edges`.
std::vector<std::size_t> convexification_order(const std::vector<Vec2>& edges,
                                               const Vec2& reference,
                                               Orientation orientation);

/// Convex polygonal line from a_1 with the same edge multiset. The reference
/// direction is a_1 - a_n, or (1, 0) for closed lines.
PolygonalLine convexify(const PolygonalLine& line, Orientation orientation);

/// Area of the convex hull of the vertices.
double hull_area(const PolygonalLine& line);

/// 1/2 sum a_i x a_{i+1} over the edges, i.e. 1/2 int (h1 h2' - h1' h2) dt
/// for any parametrization of the line.
double signed_area_integral(const PolygonalLine& line);

/// 1/2 int (h1 h2' - h1' h2) dt by the trapezoid rule on the sample grid.
double signed_area_integral(const Trajectory& traj);

/// Winding-number signed area of a closed line, evaluated as the sum of
/// signed areas of the fan triangles [a_1, a_{i+1}, a_{i+2}].
/// Throws std::invalid_argument for open lines.
double winding_signed_area(const PolygonalLine& line);

}  // namespace ldphull
