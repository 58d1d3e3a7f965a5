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

#include "ldphull/increments.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ldphull {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kProbSumTol = 1e-12;
constexpr double kCollinearTol = 1e-12;

void check_probs(const std::vector<double>& probs, std::size_t n) {
  if (probs.size() != n || n == 0) {
    throw std::invalid_argument("atoms: points and probs must be non-empty "
                                "and of equal length");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("atoms: probs must be > 0");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw std::invalid_argument("atoms: probs must sum to 1");
  }
}

void validate(const Gaussian2D& g) {
  if (!g.mean.allFinite() || !g.cov.allFinite()) {
    throw std::invalid_argument("gaussian: non-finite parameters");
  }
  const double scale = std::max(1.0, g.cov.cwiseAbs().maxCoeff());
  if (std::abs(g.cov(0, 1) - g.cov(1, 0)) > 1e-12 * scale) {
    throw std::invalid_argument("gaussian: covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat2> eig(g.cov);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument("gaussian: covariance must be PSD");
  }
}

void validate(const Atoms2D& a) {
  check_probs(a.probs, a.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    for (std::size_t j = i + 1; j < a.points.size(); ++j) {
      if (a.points[i] == a.points[j]) {
        throw std::invalid_argument("atoms: points must be distinct");
      }
    }
  }
}

void validate(const Model1D& y) {
  std::visit(overloaded{
                 [](const Gaussian1D& g) {
                   if (!(g.variance > 0.0)) {
                     throw std::invalid_argument(
                         "graph1d: y variance must be positive");
                   }
                 },
                 [](const Atoms1D& a) {
                   check_probs(a.probs, a.points.size());
                   auto sorted = a.points;
                   std::sort(sorted.begin(), sorted.end());
                   if (std::adjacent_find(sorted.begin(), sorted.end()) !=
                       sorted.end()) {
                     throw std::invalid_argument(
                         "graph1d: y points must be distinct");
                   }
                   if (sorted.size() < 2) {
                     throw std::invalid_argument(
                         "graph1d: y must be non-constant");
                   }
                 },
             },
             y);
}

void validate(const Graph1D& g) {
  if (!(g.mu1 != 0.0) || !std::isfinite(g.mu1)) {
    throw std::invalid_argument("graph1d: mu1 must be non-zero");
  }
  validate(g.y);
}

// Softmax weights of {u.p_i + log q_i}; returns the log normalizer.
template <class Dot>
double log_sum_exp(std::size_t n, const std::vector<double>& probs, Dot dot,
                   std::vector<double>& weights) {
  weights.resize(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = dot(i) + std::log(probs[i]);
    peak = std::max(peak, weights[i]);
  }
  double total = 0.0;
  for (auto& w : weights) {
    w = std::exp(w - peak);
    total += w;
  }
  for (auto& w : weights) w /= total;
  return peak + std::log(total);
}

double mean_1d(const Model1D& y) {
  return std::visit(
      overloaded{
          [](const Gaussian1D& g) { return g.mean; },
          [](const Atoms1D& a) {
            return std::transform_reduce(a.points.begin(), a.points.end(),
                                         a.probs.begin(), 0.0);
          },
      },
      y);
}

}  // namespace

Cumulant1D cumulant_1d(const Model1D& y, double u) {
  return std::visit(
      overloaded{
          [u](const Gaussian1D& g) {
            return Cumulant1D{u * g.mean + 0.5 * g.variance * u * u,
                              g.mean + g.variance * u, g.variance};
          },
          [u](const Atoms1D& a) {
            if (u == 0.0) {
              const double m = mean_1d(a);
              double var = 0.0;
              for (std::size_t i = 0; i < a.points.size(); ++i) {
                var += a.probs[i] * (a.points[i] - m) * (a.points[i] - m);
              }
              return Cumulant1D{0.0, m, var};
            }
            std::vector<double> w;
            const double k = log_sum_exp(
                a.points.size(), a.probs,
                [&](std::size_t i) { return u * a.points[i]; }, w);
            double m = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * a.points[i];
            double var = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
              var += w[i] * (a.points[i] - m) * (a.points[i] - m);
            }
            return Cumulant1D{k, m, var};
          },
      },
      y);
}

Interval support_hull_1d(const Model1D& y) {
  return std::visit(
      overloaded{
          [](const Gaussian1D&) {
            constexpr double inf = std::numeric_limits<double>::infinity();
            return Interval{-inf, inf};
          },
          [](const Atoms1D& a) {
            auto [lo, hi] = std::minmax_element(a.points.begin(), a.points.end());
            return Interval{*lo, *hi};
          },
      },
      y);
}

IncrementModel::IncrementModel(ModelKind kind, double epsilon)
    : kind_(std::move(kind)), epsilon_(epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be a finite non-negative real");
  }
  std::visit([](const auto& k) { validate(k); }, kind_);
}

IncrementModel IncrementModel::gaussian(const Vec2& mean, const Mat2& cov,
                                        double epsilon) {
  return IncrementModel(Gaussian2D{mean, cov}, epsilon);
}

IncrementModel IncrementModel::atoms(std::vector<Vec2> points,
                                     std::vector<double> probs,
                                     double epsilon) {
  return IncrementModel(Atoms2D{std::move(points), std::move(probs)}, epsilon);
}

IncrementModel IncrementModel::graph(double mu1, Model1D y, double epsilon) {
  return IncrementModel(Graph1D{mu1, std::move(y)}, epsilon);
}

Vec2 IncrementModel::drift() const {
  return std::visit(
      overloaded{
          [](const Gaussian2D& g) -> Vec2 { return g.mean; },
          [](const Atoms2D& a) -> Vec2 {
            Vec2 m = Vec2::Zero();
            for (std::size_t i = 0; i < a.points.size(); ++i) {
              m += a.probs[i] * a.points[i];
            }
            return m;
          },
          [](const Graph1D& g) -> Vec2 { return {g.mu1, mean_1d(g.y)}; },
      },
      kind_);
}

double cumulant(const IncrementModel& model, const Vec2& u) {
  if (u.isZero(0.0)) return 0.0;
  const double base = std::visit(
      overloaded{
          [&](const Gaussian2D& g) {
            return u.dot(g.mean) + 0.5 * u.dot(g.cov * u);
          },
          [&](const Atoms2D& a) {
            std::vector<double> w;
            return log_sum_exp(
                a.points.size(), a.probs,
                [&](std::size_t i) { return u.dot(a.points[i]); }, w);
          },
          [&](const Graph1D& g) {
            return u.x() * g.mu1 + cumulant_1d(g.y, u.y()).value;
          },
      },
      model.kind());
  return base + 0.5 * model.epsilon() * u.squaredNorm();
}

Vec2 cumulant_gradient(const IncrementModel& model, const Vec2& u) {
  if (u.isZero(0.0)) return model.drift();
  const Vec2 base = std::visit(
      overloaded{
          [&](const Gaussian2D& g) -> Vec2 { return g.mean + g.cov * u; },
          [&](const Atoms2D& a) -> Vec2 {
            std::vector<double> w;
            log_sum_exp(
                a.points.size(), a.probs,
                [&](std::size_t i) { return u.dot(a.points[i]); }, w);
            Vec2 m = Vec2::Zero();
            for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * a.points[i];
            return m;
          },
          [&](const Graph1D& g) -> Vec2 {
            return {g.mu1, cumulant_1d(g.y, u.y()).d1};
          },
      },
      model.kind());
  return base + model.epsilon() * u;
}

Mat2 cumulant_hessian(const IncrementModel& model, const Vec2& u) {
  const Mat2 base = std::visit(
      overloaded{
          [&](const Gaussian2D& g) -> Mat2 { return g.cov; },
          [&](const Atoms2D& a) -> Mat2 {
            std::vector<double> w;
            log_sum_exp(
                a.points.size(), a.probs,
                [&](std::size_t i) { return u.dot(a.points[i]); }, w);
            Vec2 m = Vec2::Zero();
            for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * a.points[i];
            Mat2 h = Mat2::Zero();
            for (std::size_t i = 0; i < w.size(); ++i) {
              const Vec2 d = a.points[i] - m;
              h += w[i] * d * d.transpose();
            }
            return h;
          },
          [&](const Graph1D& g) -> Mat2 {
            Mat2 h = Mat2::Zero();
            h(1, 1) = cumulant_1d(g.y, u.y()).d2;
            return h;
          },
      },
      model.kind());
  return base + model.epsilon() * Mat2::Identity();
}

Cumulant1D vertical_cumulant(const IncrementModel& model, double u) {
  const Vec2 v(0.0, u);
  if (model.is_graph()) {
    auto c = cumulant_1d(model.graph().y, u);
    const double eps = model.epsilon();
    return {c.value + 0.5 * eps * u * u, c.d1 + eps * u, c.d2 + eps};
  }
  return {cumulant(model, v), cumulant_gradient(model, v).y(),
          cumulant_hessian(model, v)(1, 1)};
}

SupportClass support_class(const IncrementModel& model) {
  if (model.epsilon() > 0.0) return {SupportTag::FullPlane};
  return std::visit(
      overloaded{
          [](const Gaussian2D& g) -> SupportClass {
            Eigen::SelfAdjointEigenSolver<Mat2> eig(g.cov);
            const double scale = std::max(1.0, g.cov.cwiseAbs().maxCoeff());
            if (eig.eigenvalues().minCoeff() > 1e-12 * scale) {
              return {SupportTag::FullPlane};
            }
            return {SupportTag::ProperSubsetOfPlane};
          },
          [](const Atoms2D& a) -> SupportClass {
            const auto hull = convex_hull(a.points);
            if (hull.size() < 3) return {SupportTag::ProperSubsetOfPlane};
            // Origin strictly left of every counterclockwise hull edge.
            for (std::size_t i = 0; i < hull.size(); ++i) {
              const Vec2& p = hull[i];
              const Vec2& q = hull[(i + 1) % hull.size()];
              const double scale = (q - p).norm() * std::max(1.0, p.norm());
              if (cross(q - p, -p) <= kCollinearTol * scale) {
                return {SupportTag::ProperSubsetOfPlane};
              }
            }
            return {SupportTag::FullPlane};
          },
          [](const Graph1D& g) -> SupportClass {
            return {SupportTag::VerticalLine, g.mu1};
          },
      },
      model.kind());
}

IncrementModel regularize(const IncrementModel& model, double eps) {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("regularize: eps must be non-negative");
  }
  return IncrementModel(model.kind(), model.epsilon() + eps);
}

bool is_centrally_symmetric(const IncrementModel& model, double tol) {
  constexpr int kAngles = 16;
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int k = 0; k < kAngles; ++k) {
      const Vec2 u = r * unit_direction(std::numbers::pi * k / kAngles);
      const double a = cumulant(model, u);
      const double b = cumulant(model, -u);
      if (std::abs(a - b) > tol * std::max(1.0, std::abs(a))) return false;
    }
  }
  return true;
}

}  // namespace ldphull
