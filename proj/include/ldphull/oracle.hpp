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
 * @file  oracle.hpp
 * @brief Brute-force discretized minimizer of the path energy under a
 *        signed-area constraint.
 *
 * A curve with n segments is h(t_i) = sum_{j <= i} v_j / n. Its energy is
 * sum_i I(v_i) / n and its signed area is the exact shoelace area of the
 * polygonal line with the closing chord,
 *
 *   A~ = 1/(2 n^2) sum_{j < i} v_j x v_i.
 *
 * Piecewise-linear curves are admissible for the continuous problem, so the
 * discrete optimum never falls below J_A(a).
 */

#pragma once

#include "ldphull/increments.hpp"
#include "ldphull/polyline.hpp"

#include <vector>

namespace ldphull {

struct DiscreteCurve {
  int n = 0;
  std::vector<Vec2> velocities;
  double energy = 0.0;
  double area = 0.0;  // signed area A~

  /// Vertices h(t_0) = 0, ..., h(t_n).
  std::vector<Vec2> points() const;
};

/// sum_i I(v_i) / n, summed in ascending order of the terms so that the value
/// does not depend on the order of the velocities.
double discrete_energy(const IncrementModel& model,
                       const std::vector<Vec2>& velocities);

double discrete_signed_area(const std::vector<Vec2>& velocities);

/// Curve with both fields recomputed from the velocities.
DiscreteCurve make_discrete_curve(const IncrementModel& model,
                                  std::vector<Vec2> velocities);

struct OracleOptions {
  double feas_tol = 1e-6;
  double stat_tol = 1e-4;
  int max_outer = 60;
  int max_inner = 5000;
};

struct OracleResult {
  DiscreteCurve curve;
  double feasibility = 0.0;   // | |A~| - a |
  double stationarity = 0.0;  // scaled KKT residual, see minimize_discrete
  int outer_iterations = 0;   // of the reported sign
};

/// Augmented Lagrangian on sign * A~ = a for both signs, inner L-BFGS with
/// backtracking. Stationarity is max_k |n dL/dv_k| / (1 + max_k |grad I(v_k)|).
/// Throws Error{NotFullPlane} and Error{NoConvergence}.
OracleResult minimize_discrete(const IncrementModel& model, double a, int n,
                               const OracleOptions& opts = {});

/// Reorders the velocities in convexification order (reference -h(1), or
/// (1, 0) for closed curves). Energy is carried over unchanged.
DiscreteCurve convexify_curve(const DiscreteCurve& curve,
                              Orientation orientation);

}  // namespace ldphull
