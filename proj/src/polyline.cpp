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

#include "ldphull/polyline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ldphull {

PolygonalLine::PolygonalLine(std::vector<Vec2> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument("polygonal line needs at least two vertices");
  }
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[i + 1]) {
      throw std::invalid_argument("consecutive vertices must be distinct");
    }
  }
  for (const Vec2& v : vertices_) {
    if (!v.allFinite()) throw std::invalid_argument("vertices must be finite");
  }
}

std::vector<Vec2> PolygonalLine::edges() const {
  std::vector<Vec2> out;
  out.reserve(vertices_.size() - 1);
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    out.push_back(vertices_[i + 1] - vertices_[i]);
  }
  return out;
}

std::vector<std::size_t> convexification_order(const std::vector<Vec2>& edges,
                                               const Vec2& reference,
                                               Orientation orientation) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  struct Key {
    double angle;
    double norm;
    std::size_t index;
  };
  std::vector<Key> keys;
  keys.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    double angle = std::atan2(cross(reference, edges[i]), reference.dot(edges[i]));
    if (orientation == Orientation::Clockwise) angle = -angle;
    if (angle < 0.0) angle += kTwoPi;
    if (angle >= kTwoPi) angle -= kTwoPi;
    keys.push_back({angle, edges[i].norm(), i});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.angle, a.norm, a.index) <
           std::tie(b.angle, b.norm, b.index);
  });
  std::vector<std::size_t> order;
  order.reserve(keys.size());
  for (const auto& k : keys) order.push_back(k.index);
  return order;
}

PolygonalLine convexify(const PolygonalLine& line, Orientation orientation) {
  const auto& v = line.vertices();
  const auto edges = line.edges();
  const Vec2 reference = line.closed() ? Vec2(1.0, 0.0) : Vec2(v.front() - v.back());
  const auto order = convexification_order(edges, reference, orientation);

  std::vector<Vec2> out;
  out.reserve(v.size());
  out.push_back(v.front());
  for (std::size_t idx : order) out.push_back(out.back() + edges[idx]);
  if (line.closed()) out.back() = out.front();
  return PolygonalLine(std::move(out));
}

double hull_area(const PolygonalLine& line) {
  return convex_hull_area(line.vertices());
}

double signed_area_integral(const PolygonalLine& line) {
  return shoelace(line.vertices());
}

double signed_area_integral(const Trajectory& traj) {
  if (traj.points.size() != traj.times.size() ||
      traj.derivs.size() != traj.times.size()) {
    throw std::invalid_argument("trajectory samples are misaligned");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double f0 = cross(traj.points[i], traj.derivs[i]);
    const double f1 = cross(traj.points[i + 1], traj.derivs[i + 1]);
    total += 0.5 * (f0 + f1) * (traj.times[i + 1] - traj.times[i]);
  }
  return 0.5 * total;
}

double winding_signed_area(const PolygonalLine& line) {
  if (!line.closed()) {
    throw std::invalid_argument("winding_signed_area requires a closed line");
  }
  const auto& v = line.vertices();
  const Vec2& apex = v.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 2 < v.size(); ++i) {
    twice += cross(v[i] - apex, v[i + 1] - apex);
  }
  return 0.5 * twice;
}

}  // namespace ldphull
