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
 * @file  solver.hpp
 * @brief Optimal trajectories and the rate J_A(a) for the convex-hull area.
 *
 * Full-plane models: every minimizer is a rotated and rescaled arc g of a
 * level set K^{-1}(alpha) whose endpoints on a line ell R are centrally
 * symmetric,
 *
 *   h(t) = -(g(t) - g(0))^perp / (tau lambda),   h'(t) = grad K(g(t)),
 *
 * with alpha fixed by d/dalpha sqrt(E^tau(alpha, ell)) = 1 / (2 sqrt(a)).
 * The energy of such a curve is 2 E^tau / lambda - alpha, since
 * I(grad K(g)) = g . grad K(g) - alpha.
 *
 * Graph models (X = (mu1, Y)): the two minimizers are explicit in terms of
 * K_2(u) = K(0, u) and the root u_a of |mu1| E'(u) = 4a, with
 * E(u) = int_{-1}^{1} K_2(u s) ds.
 */

#pragma once

#include "ldphull/levelset.hpp"

#include <optional>
#include <vector>

namespace ldphull {

struct SolverOptions {
  int samples = 1024;     // trajectory grid size
  int directions = 256;   // half-circle scan for the endpoint condition
  double eps = 0.0;       // smoothing applied to ProperSubsetOfPlane models
  QuadratureOptions quadrature{};
};

enum class CandidateKind { LevelArc, Graph };

struct Candidate {
  CandidateKind kind = CandidateKind::LevelArc;
  double alpha = 0.0;            // level (LevelArc)
  Vec2 ell = Vec2::UnitX();      // endpoint direction (LevelArc)
  Side side = Side::Positive;    // orientation tau
  double mass = 0.0;             // lambda^tau (LevelArc), u_a (Graph)
  double half_area = 0.0;        // E^tau (LevelArc)
  double multiplier = 0.0;       // Euler-Lagrange multiplier
  double energy = 0.0;           // I_C(h) by high-order quadrature
  Trajectory trajectory;         // trajectory.energy: trapezoid on the grid
};

struct RateResult {
  double a = 0.0;
  double epsilon = 0.0;          // smoothing of the model actually solved
  std::vector<Candidate> candidates;  // ascending energy
  double jA = 0.0;
  std::optional<double> a_max;   // finite when areas are bounded
};

/// Either every direction qualifies (centrally symmetric models) or the
/// listed (ell, side) pairs do.
struct DirectionSet {
  bool all_directions = false;
  std::vector<std::pair<Vec2, Side>> pairs;
};

/// Directions ell on whose line the level set K^{-1}(alpha) has centrally
/// symmetric intersection points, i.e. roots of r(theta) - r(theta + pi)
/// found on a k-point half-circle scan.
DirectionSet candidate_directions(const IncrementModel& model, double alpha,
                                  int k);

/// Unique alpha with (sqrt E)'(alpha) = 1 / sqrt(2a) for centrally symmetric
/// full-plane models. Throws Error{NotSymmetric} or Error{OutOfRange}.
double symmetric_alpha(const IncrementModel& model, double a,
                       const QuadratureOptions& quad = {});

/// sup of attainable areas for centrally symmetric full-plane models;
/// infinite unless the support is a finite atom set without smoothing.
double symmetric_area_limit(const IncrementModel& model);

/// Trajectory of the form above on a uniform n-point grid.
Trajectory build_trajectory(const IncrementModel& model, double alpha,
                            const Vec2& ell, Side side, int n,
                            const QuadratureOptions& quad = {});

/// Solves for J_A(a). Graph models are dispatched to graph_trajectory;
/// ProperSubsetOfPlane models are smoothed with opts.eps (NotFullPlane when
/// it is zero). Throws Error{OutOfRange} carrying a_max, Error{NoCandidate}.
RateResult rate_of_area(const IncrementModel& model, double a,
                        const SolverOptions& opts = {});

struct GraphSolution {
  Trajectory plus;
  Trajectory minus;
  double u = 0.0;       // u_a
  double jA = 0.0;
  double a_max = 0.0;   // +infinity for unbounded y-support
};

/// a_max = |mu1| lim_{u->inf} E'(u) / 4 for graph models.
double graph_area_limit(const IncrementModel& model);

/// E'(u) = int_{-1}^{1} s K_2'(u s) ds.
double graph_energy_slope(const IncrementModel& model, double u);

GraphSolution graph_trajectory(const IncrementModel& model, double a,
                               int n = 1024);

struct ElResidual {
  double interior = 0.0;  // max_i |lambda h^perp - grad I(h') + grad I(h'(0))|
  double boundary = 0.0;  // |grad I(h'(1)) + grad I(h'(0))|
  bool candidate = true;  // false when lambda == 0
  double total() const { return interior + boundary; }
};

ElResidual el_residual(const IncrementModel& model, const Trajectory& traj,
                       double lambda);

/// One-dimensional analogue for graph models:
/// lambda mu1 t = I_2'(h_2'(t)) - I_2'(h_2'(0)), I_2'(h_2'(1)) = -I_2'(h_2'(0)).
ElResidual el_residual_1d(const IncrementModel& model, const Trajectory& traj,
                          double lambda);

struct LadderRung {
  double eps;
  double alpha;
  double jA;
};

/// J_A(a) of the model smoothed by each eps in turn.
std::vector<LadderRung> regularization_ladder(const IncrementModel& model,
                                              double a,
                                              const std::vector<double>& eps,
                                              const SolverOptions& opts = {});

}  // namespace ldphull
