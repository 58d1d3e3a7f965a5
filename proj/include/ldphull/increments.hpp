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
 * @file  increments.hpp
 * @brief Planar increment distributions and their cumulant generating
 *        function K(u) = log E exp(u.X), with optional Gaussian smoothing
 *        K_eps(u) = K(u) + eps |u|^2 / 2.
 *
 * Every representable law has a Laplace transform that is finite on the whole
 * plane, so K, its gradient and its Hessian are finite everywhere.
 */

#pragma once

#include "ldphull/geometry.hpp"

#include <variant>
#include <vector>

namespace ldphull {

struct Gaussian2D {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Identity();
};

struct Atoms2D {
  std::vector<Vec2> points;
  std::vector<double> probs;
};

struct Gaussian1D {
  double mean = 0.0;
  double variance = 1.0;
};

struct Atoms1D {
  std::vector<double> points;
  std::vector<double> probs;
};

using Model1D = std::variant<Gaussian1D, Atoms1D>;

/// X = (mu1, Y): the walk is the graph of a one-dimensional walk.
struct Graph1D {
  double mu1 = 1.0;
  Model1D y;
};

using ModelKind = std::variant<Gaussian2D, Atoms2D, Graph1D>;

/// Cumulant generating function of Y and its first two derivatives.
struct Cumulant1D {
  double value;
  double d1;
  double d2;
};

Cumulant1D cumulant_1d(const Model1D& y, double u);

/// Closed convex hull [min, max] of the support of Y; infinite for Gaussians.
struct Interval {
  double lo;
  double hi;
};
Interval support_hull_1d(const Model1D& y);

enum class SupportTag { FullPlane, ProperSubsetOfPlane, VerticalLine };

struct SupportClass {
  SupportTag tag;
  double mu1 = 0.0;  // meaningful for VerticalLine only
};

class IncrementModel {
 public:
  /// Validates the kind-specific invariants; throws std::invalid_argument.
  explicit IncrementModel(ModelKind kind, double epsilon = 0.0);

  static IncrementModel gaussian(const Vec2& mean, const Mat2& cov,
                                 double epsilon = 0.0);
  static IncrementModel atoms(std::vector<Vec2> points,
                              std::vector<double> probs, double epsilon = 0.0);
  static IncrementModel graph(double mu1, Model1D y, double epsilon = 0.0);

  const ModelKind& kind() const { return kind_; }
  double epsilon() const { return epsilon_; }

  bool is_graph() const { return std::holds_alternative<Graph1D>(kind_); }
  const Graph1D& graph() const { return std::get<Graph1D>(kind_); }

  /// Drift mu = E X = grad K(0).
  Vec2 drift() const;

 private:
  ModelKind kind_;
  double epsilon_;
};

double cumulant(const IncrementModel& model, const Vec2& u);
Vec2 cumulant_gradient(const IncrementModel& model, const Vec2& u);
Mat2 cumulant_hessian(const IncrementModel& model, const Vec2& u);

/// K restricted to the vertical axis, u -> K(0, u), including smoothing.
Cumulant1D vertical_cumulant(const IncrementModel& model, double u);

SupportClass support_class(const IncrementModel& model);

/// Returns the model with its smoothing strength increased by eps.
IncrementModel regularize(const IncrementModel& model, double eps);

/// Probes K(u) = K(-u) on a polar grid of radii up to 4.
bool is_centrally_symmetric(const IncrementModel& model, double tol = 1e-10);

}  // namespace ldphull
