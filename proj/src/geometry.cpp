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

#include "ldphull/geometry.hpp"

#include <algorithm>

namespace ldphull {

namespace {

double turn(const Vec2& o, const Vec2& a, const Vec2& b) {
  return cross(a - o, b - o);
}

}  // namespace

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double shoelace(std::span<const Vec2> vertices) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    twice += cross(vertices[i], vertices[i + 1]);
  }
  return 0.5 * twice;
}

double convex_hull_area(std::span<const Vec2> points) {
  auto hull = convex_hull(points);
  if (hull.size() < 3) return 0.0;
  // Shift to the first vertex so the sum does not depend on the origin.
  const Vec2 base = hull.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
    twice += cross(hull[i] - base, hull[i + 1] - base);
  }
  return 0.5 * std::abs(twice);
}

}  // namespace ldphull
