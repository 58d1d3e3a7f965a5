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

#include "ldphull/legendre.hpp"

#include "ldphull/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldphull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Membership { Interior, Boundary, Outside };

// Position of v relative to the closed convex hull of the atoms.
Membership atom_hull_membership(const Atoms2D& atoms, const Vec2& v) {
  const auto hull = convex_hull(atoms.points);
  if (hull.size() < 3) return Membership::Outside;
  Membership result = Membership::Interior;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& p = hull[i];
    const Vec2& q = hull[(i + 1) % hull.size()];
    const double side = cross(q - p, v - p);
    const double scale = (q - p).norm() * std::max(1.0, (v - p).norm());
    if (side < -1e-12 * scale) return Membership::Outside;
    if (side <= 1e-12 * scale) result = Membership::Boundary;
  }
  return result;
}

Membership domain_membership(const IncrementModel& model, const Vec2& v) {
  if (model.epsilon() > 0.0) return Membership::Interior;
  if (const auto* atoms = std::get_if<Atoms2D>(&model.kind())) {
    return atom_hull_membership(*atoms, v);
  }
  return Membership::Interior;
}

void require_full_plane(const IncrementModel& model) {
  if (support_class(model).tag != SupportTag::FullPlane) {
    throw Error(ErrorKind::NotFullPlane,
                "rate function requires a full-plane support; regularize the "
                "model first");
  }
}

}  // namespace

ConjugateSolution solve_conjugate(const IncrementModel& model, const Vec2& v,
                                  const ConjugateOptions& opts) {
  require_full_plane(model);
  if (domain_membership(model, v) != Membership::Interior) {
    throw Error(ErrorKind::OutsideDomain,
                "velocity is not interior to the effective domain of I");
  }

  const Vec2 mu = model.drift();
  const double tol = opts.tolerance * (1.0 + v.norm());
  auto objective = [&](const Vec2& u) { return cumulant(model, u) - u.dot(v); };

  Vec2 u = cumulant_hessian(model, Vec2::Zero()).ldlt().solve(v - mu);
  if (!u.allFinite()) u.setZero();
  Vec2 residual = cumulant_gradient(model, u) - v;

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (residual.norm() <= tol) {
      return {u.dot(v) - cumulant(model, u), u, it};
    }
    const Mat2 hess = cumulant_hessian(model, u);
    Eigen::LDLT<Mat2> ldlt(hess);
    Vec2 step = -ldlt.solve(residual);
    if (!step.allFinite() || ldlt.info() != Eigen::Success ||
        step.dot(residual) >= 0.0) {
      step = -residual;
    }

    // Armijo backtracking on K(u) - u.v; a step that shrinks the residual is
    // accepted too, since near the optimum the objective decrease falls below
    // rounding.
    const double f0 = objective(u);
    const double slope = residual.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vec2 trial = u + t * step;
      const Vec2 trial_residual = cumulant_gradient(model, trial) - v;
      if (objective(trial) <= f0 + 1e-4 * t * slope ||
          trial_residual.norm() < residual.norm()) {
        u = trial;
        residual = trial_residual;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (residual.norm() <= tol) {
    return {u.dot(v) - cumulant(model, u), u, opts.max_iterations};
  }
  throw Error(ErrorKind::NoConvergence,
              "Newton iteration for grad K(u) = v did not converge");
}

double rate(const IncrementModel& model, const Vec2& v,
            const ConjugateOptions& opts) {
  require_full_plane(model);
  if (domain_membership(model, v) == Membership::Outside) return kInf;
  return solve_conjugate(model, v, opts).value;
}

Vec2 rate_gradient(const IncrementModel& model, const Vec2& v,
                   const ConjugateOptions& opts) {
  return solve_conjugate(model, v, opts).dual;
}

namespace {

Interval vertical_domain(const IncrementModel& model) {
  if (model.epsilon() > 0.0) return {-kInf, kInf};
  return support_hull_1d(model.graph().y);
}

// Solves K_2'(u) = v for v interior to the domain.
double invert_vertical_derivative(const IncrementModel& model, double v) {
  const double tol = 1e-13 * (1.0 + std::abs(v));
  auto deriv = [&](double u) { return vertical_cumulant(model, u).d1 - v; };

  double lo = -1.0, hi = 1.0;
  for (int i = 0; deriv(lo) > 0.0; ++i) {
    if (i > 200) throw Error(ErrorKind::NoConvergence, "bracket search failed");
    hi = lo;
    lo *= 2.0;
  }
  for (int i = 0; deriv(hi) < 0.0; ++i) {
    if (i > 200) throw Error(ErrorKind::NoConvergence, "bracket search failed");
    lo = hi;
    hi *= 2.0;
  }

  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto c = vertical_cumulant(model, u);
    const double f = c.d1 - v;
    if (std::abs(f) <= tol) return u;
    (f > 0.0 ? hi : lo) = u;
    double next = c.d2 > 0.0 ? u - f / c.d2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(u))) {
      return u;
    }
    u = next;
  }
  return u;
}

double endpoint_mass(const Atoms1D& atoms, double point) {
  for (std::size_t i = 0; i < atoms.points.size(); ++i) {
    if (atoms.points[i] == point) return atoms.probs[i];
  }
  return 0.0;
}

void require_graph(const IncrementModel& model) {
  if (!model.is_graph()) {
    throw std::invalid_argument("rate_1d requires a graph1d model");
  }
}

}  // namespace

double rate_1d(const IncrementModel& model, double v) {
  require_graph(model);
  const Interval dom = vertical_domain(model);
  if (v < dom.lo || v > dom.hi) return kInf;
  if (v == dom.lo || v == dom.hi) {
    return -std::log(endpoint_mass(std::get<Atoms1D>(model.graph().y), v));
  }
  const double u = invert_vertical_derivative(model, v);
  return u * v - vertical_cumulant(model, u).value;
}

double rate_1d_gradient(const IncrementModel& model, double v) {
  require_graph(model);
  const Interval dom = vertical_domain(model);
  if (!(v > dom.lo && v < dom.hi)) {
    throw Error(ErrorKind::OutsideDomain,
                "I_2' is finite only inside the hull of the y-support");
  }
  return invert_vertical_derivative(model, v);
}

double energy(const IncrementModel& model, Trajectory& traj) {
  if (traj.derivs.size() != traj.times.size() || traj.times.size() < 2) {
    throw std::invalid_argument("energy: trajectory needs >= 2 derivative "
                                "samples aligned with its time grid");
  }
  const bool graph = support_class(model).tag == SupportTag::VerticalLine;
  const double mu1 = graph ? model.graph().mu1 : 0.0;

  auto integrand = [&](const Vec2& v) {
    if (!graph) return rate(model, v);
    if (std::abs(v.x() - mu1) > 1e-12 * std::abs(mu1)) return kInf;
    return rate_1d(model, v.y());
  };

  double total = 0.0;
  double prev = integrand(traj.derivs.front());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double cur = integrand(traj.derivs[i]);
    total += 0.5 * (prev + cur) * (traj.times[i] - traj.times[i - 1]);
    prev = cur;
  }
  traj.energy = total;
  return total;
}

}  // namespace ldphull
