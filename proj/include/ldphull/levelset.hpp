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

/**
 * @file  levelset.hpp
 * @brief Level sets K^{-1}(alpha) of a full-plane cumulant generating function.
 *
 * The level curve is star-shaped about the origin (K(0) = 0 < alpha and K is
 * convex), so it is parametrized by polar angle: u(theta) = r(theta) e_theta,
 * with r found by a ray solve. Along this parametrization
 *
 *   area element          dE      = r^2 / 2                dtheta
 *   mass element  dsigma / |grad K| = r^2 / (grad K(u) . u) dtheta
 *
 * and the mass element equals d(dE)/dalpha, which is the coarea identity used
 * for alpha-derivatives. All integrals use adaptive composite Gauss-Legendre
 * quadrature in theta.
 *
 * Arcs are indexed by a unit direction ell and a side: the Positive arc is
 * {u : u . perp(ell) >= 0} traversed counterclockwise from the ray through ell
 * to the ray through -ell, the Negative arc is the other half traversed
 * clockwise.
 */

#pragma once

#include "ldphull/increments.hpp"
#include "ldphull/polyline.hpp"

#include <vector>

namespace ldphull {

enum class Side : int { Positive = 1, Negative = -1 };

inline double sign(Side side) { return static_cast<int>(side); }

/// Sampled arc g of K^{-1}(alpha) with |g'(t)| = mass |grad K(g(t))|.
struct LevelArc {
  double alpha = 0.0;
  Vec2 ell = Vec2::UnitX();
  Side side = Side::Positive;
  std::vector<double> times;
  std::vector<Vec2> samples;
  std::vector<Vec2> derivs;
  double mass = 0.0;  // lambda: integral of 1/|grad K| over the arc
  double area = 0.0;  // E^side(alpha, ell)
};

struct QuadratureOptions {
  double rel_tol = 1e-13;
  int initial_panels = 16;
  int max_depth = 24;
};

/// Unique r > 0 with K(r dir) = alpha. Throws std::invalid_argument for
/// alpha <= 0 and Error{NotFullPlane} for models without full-plane support.
double level_radius(const IncrementModel& model, double alpha, const Vec2& dir);

/// m >= 8 ray solves at angles 2 pi k / m, k = 0..m-1, as a closed polygon.
PolygonalLine trace_level(const IncrementModel& model, double alpha, int m);

/// E(alpha): area of the sub-level set K <= alpha.
double sublevel_area(const IncrementModel& model, double alpha,
                     const QuadratureOptions& opts = {});

/// E^side(alpha, ell): part of the sub-level set on the given side of ell R.
double half_area(const IncrementModel& model, double alpha, const Vec2& ell,
                 Side side, const QuadratureOptions& opts = {});

/// lambda^side_{alpha, ell}: integral of 1/|grad K| over the arc.
double arc_mass(const IncrementModel& model, double alpha, const Vec2& ell,
                Side side, const QuadratureOptions& opts = {});

/// Area and mass of one arc from a single pass over the ray solves.
struct ArcMeasures {
  double area;
  double mass;
};

/// E(alpha) and E'(alpha) for the whole level curve.
ArcMeasures level_measures(const IncrementModel& model, double alpha,
                           const QuadratureOptions& opts = {});

/// Integral of 1/|grad K| over the whole level curve, i.e. E'(alpha).
double level_mass(const IncrementModel& model, double alpha,
                  const QuadratureOptions& opts = {});

/// d E^side / d alpha, evaluated through the coarea identity as arc_mass.
double dE_dalpha(const IncrementModel& model, double alpha, const Vec2& ell,
                 Side side, const QuadratureOptions& opts = {});

/// E^side(alpha, ell) and lambda^side_{alpha, ell} from one quadrature pass.
ArcMeasures arc_measures(const IncrementModel& model, double alpha,
                         const Vec2& ell, Side side,
                         const QuadratureOptions& opts = {});

/// Parametrization g of the arc on the uniform grid t_i = i / (n - 1), n >= 2,
/// with cumulative mass t * lambda up to g(t).
LevelArc arc_parametrization(const IncrementModel& model, double alpha,
                             const Vec2& ell, Side side, int n,
                             const QuadratureOptions& opts = {});

}  // namespace ldphull
