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
 * @file  legendre.hpp
 * @brief Rate function I = K* (convex conjugate of the cumulant generating
 *        function), its gradient, the one-dimensional rate of graph models and
 *        trajectory energies int_0^1 I(h'(t)) dt.
 *
 * I(v) is evaluated as u*.v - K(u*) where u* solves grad K(u) = v. Values
 * outside the effective domain of I are reported as +infinity. Near the
 * boundary of that domain (atom models) Newton conditioning degrades and
 * convergence slows; the solver only queries strictly interior velocities.
 */

#pragma once

#include "ldphull/increments.hpp"

#include <vector>

namespace ldphull {

/// Sampled curve h on [0, 1] with h(0) = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec2> points;
  std::vector<Vec2> derivs;
  double energy = 0.0;

  std::size_t size() const { return times.size(); }
};

struct ConjugateOptions {
  int max_iterations = 100;
  double tolerance = 1e-10;  // on |grad K(u) - v| / (1 + |v|)
};

struct ConjugateSolution {
  double value;  // I(v)
  Vec2 dual;     // u* = grad I(v)
  int iterations;
};

/// Solves sup_u (u.v - K(u)). Throws Error{NotFullPlane} unless the model is
/// FullPlane, Error{OutsideDomain} if v is outside the closure of the
/// effective domain, and Error{NoConvergence} if Newton stalls.
ConjugateSolution solve_conjugate(const IncrementModel& model, const Vec2& v,
                                  const ConjugateOptions& opts = {});

/// I(v); +infinity outside the effective domain.
double rate(const IncrementModel& model, const Vec2& v,
            const ConjugateOptions& opts = {});

/// grad I(v), i.e. the maximizer u* with grad K(u*) = v.
Vec2 rate_gradient(const IncrementModel& model, const Vec2& v,
                   const ConjugateOptions& opts = {});

/// I_2(v) = I(mu1, v) for graph models: the conjugate of u -> K(0, u).
/// +infinity outside the closed hull of the y-support; at an endpoint of the
/// hull the finite limit -log P(Y = endpoint) is returned.
double rate_1d(const IncrementModel& model, double v);

/// I_2'(v). Throws Error{OutsideDomain} unless v is interior to the hull.
double rate_1d_gradient(const IncrementModel& model, double v);

/// Composite trapezoid quadrature of I(h'(t)); also stores it in traj.energy.
/// Graph models (vertical-line support) use I(v) = I_2(v_2) when v_1 = mu1
/// and +infinity otherwise.
double energy(const IncrementModel& model, Trajectory& traj);

}  // namespace ldphull
