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

#include "ldphull/solver.hpp"

#include "ldphull/errors.hpp"
#include "ldphull/legendre.hpp"

#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ldphull {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_area(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("target area must be a finite a > 0");
  }
}

// Bracketed root of a continuous function with f(lo), f(hi) of opposite sign.
template <class F>
double bracketed_root(F f, double lo, double hi, double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52),
      max_iter);
  return 0.5 * (a + b);
}

// r(theta) - r(theta + pi): zero where the chord through the origin along
// e_theta has centrally symmetric endpoints.
double chord_asymmetry(const IncrementModel& model, double alpha,
                       double theta) {
  const Vec2 e = unit_direction(theta);
  return level_radius(model, alpha, e) - level_radius(model, alpha, -e);
}

std::vector<double> direction_roots(const IncrementModel& model, double alpha,
                                    int k) {
  std::vector<double> roots;
  std::vector<double> values(k + 1);
  for (int j = 0; j <= k; ++j) {
    values[j] = chord_asymmetry(model, alpha, kPi * j / k);
  }
  auto f = [&](double theta) { return chord_asymmetry(model, alpha, theta); };
  for (int j = 0; j < k; ++j) {
    const double lo = kPi * j / k;
    const double hi = kPi * (j + 1) / k;
    if (values[j] == 0.0) {
      roots.push_back(lo);
    } else if (values[j] * values[j + 1] < 0.0) {
      roots.push_back(bracketed_root(f, lo, hi, values[j], values[j + 1]));
    }
  }
  return roots;
}

// Root of the chord asymmetry near `guess`, found by widening a bracket.
std::optional<double> track_direction(const IncrementModel& model,
                                      double alpha, double guess) {
  auto f = [&](double theta) { return chord_asymmetry(model, alpha, theta); };
  const double f0 = f(guess);
  if (f0 == 0.0) return guess;
  for (double delta = 1e-4; delta < 0.5 * kPi; delta *= 2.0) {
    for (double s : {1.0, -1.0}) {
      const double other = guess + s * delta;
      const double f1 = f(other);
      if (f0 * f1 <= 0.0) {
        return s > 0.0 ? bracketed_root(f, guess, other, f0, f1)
                       : bracketed_root(f, other, guess, f1, f0);
      }
    }
  }
  return std::nullopt;
}

// d/dalpha sqrt(E^side) = lambda / (2 sqrt(E^side)).
double half_slope(const IncrementModel& model, double alpha, double theta,
                  Side side, const QuadratureOptions& quad) {
  const auto m = arc_measures(model, alpha, unit_direction(theta), side, quad);
  return m.mass / (2.0 * std::sqrt(m.area));
}

Candidate make_candidate(const IncrementModel& model, double alpha,
                         const Vec2& ell, Side side, const SolverOptions& opts) {
  const auto m = arc_measures(model, alpha, ell, side, opts.quadrature);
  Candidate c;
  c.kind = CandidateKind::LevelArc;
  c.alpha = alpha;
  c.ell = ell;
  c.side = side;
  c.mass = m.mass;
  c.half_area = m.area;
  c.multiplier = sign(side) * m.mass;
  c.energy = 2.0 * m.area / m.mass - alpha;
  c.trajectory =
      build_trajectory(model, alpha, ell, side, opts.samples, opts.quadrature);
  return c;
}

double polar_area_of_atoms(const Atoms2D& atoms) {
  const auto hull = convex_hull(atoms.points);
  std::vector<Vec2> polar;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& p = hull[i];
    const Vec2& q = hull[(i + 1) % hull.size()];
    Mat2 m;
    m << p.x(), p.y(), q.x(), q.y();
    polar.push_back(m.inverse() * Vec2(1.0, 1.0));
  }
  polar.push_back(polar.front());
  return std::abs(shoelace(polar));
}

struct GeneralRoot {
  double alpha;
  double theta;
  Side side;
};

std::vector<GeneralRoot> general_roots(const IncrementModel& model, double a,
                                       const SolverOptions& opts) {
  const double target = 1.0 / (2.0 * std::sqrt(a));
  constexpr int kNodes = 49;  // alpha in [1e-6, 1e6], four nodes per decade
  std::vector<double> alphas(kNodes);
  std::vector<std::vector<double>> roots(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    alphas[i] = std::pow(10.0, -6.0 + 0.25 * i);
    roots[i] = direction_roots(model, alphas[i], opts.directions);
  }

  std::vector<GeneralRoot> out;
  for (int i = 0; i + 1 < kNodes; ++i) {
    for (double theta : roots[i]) {
      // Follow the root line to the next node; identify theta modulo pi.
      std::optional<double> next;
      double best = 0.25;
      for (double cand : roots[i + 1]) {
        for (double shift : {-kPi, 0.0, kPi}) {
          const double d = std::abs(cand + shift - theta);
          if (d < best) {
            best = d;
            next = cand + shift;
          }
        }
      }
      if (!next) continue;
      for (Side side : {Side::Positive, Side::Negative}) {
        const double f0 =
            half_slope(model, alphas[i], theta, side, opts.quadrature) - target;
        const double f1 =
            half_slope(model, alphas[i + 1], *next, side, opts.quadrature) -
            target;
        if (!(f0 * f1 <= 0.0)) continue;
        const double x0 = std::log(alphas[i]);
        const double x1 = std::log(alphas[i + 1]);
        double theta_at = theta;
        auto residual = [&](double x) {
          const double alpha = std::exp(x);
          const double w = (x - x0) / (x1 - x0);
          const auto tracked =
              track_direction(model, alpha, (1.0 - w) * theta + w * *next);
          if (!tracked) {
            throw Error(ErrorKind::NoCandidate, "lost a direction branch");
          }
          theta_at = *tracked;
          return half_slope(model, alpha, theta_at, side, opts.quadrature) -
                 target;
        };
        const double x = bracketed_root(residual, x0, x1, f0, f1);
        residual(x);
        out.push_back({std::exp(x), theta_at, side});
      }
    }
  }
  return out;
}

}  // namespace

DirectionSet candidate_directions(const IncrementModel& model, double alpha,
                                  int k) {
  if (k < 2) throw std::invalid_argument("candidate_directions needs k >= 2");
  DirectionSet out;
  if (is_centrally_symmetric(model)) {
    out.all_directions = true;
    return out;
  }
  for (double theta : direction_roots(model, alpha, k)) {
    const Vec2 e = unit_direction(theta);
    for (const Vec2& ell : {e, Vec2(-e)}) {
      out.pairs.emplace_back(ell, Side::Positive);
      out.pairs.emplace_back(ell, Side::Negative);
    }
  }
  return out;
}

double symmetric_area_limit(const IncrementModel& model) {
  if (model.epsilon() > 0.0) return kInf;
  if (const auto* atoms = std::get_if<Atoms2D>(&model.kind())) {
    return 1.0 / (2.0 * polar_area_of_atoms(*atoms));
  }
  return kInf;
}

double symmetric_alpha(const IncrementModel& model, double a,
                       const QuadratureOptions& quad) {
  check_area(a);
  if (support_class(model).tag != SupportTag::FullPlane) {
    throw Error(ErrorKind::NotFullPlane, "symmetric_alpha needs full-plane support");
  }
  if (!is_centrally_symmetric(model)) {
    throw Error(ErrorKind::NotSymmetric, "model is not centrally symmetric");
  }
  const double a_max = symmetric_area_limit(model);
  if (a >= a_max) {
    throw Error(ErrorKind::OutOfRange, "target area is not attainable", a_max);
  }

  const double target = 1.0 / std::sqrt(2.0 * a);
  auto residual = [&](double x) {
    const auto m = level_measures(model, std::exp(x), quad);
    return m.mass / (2.0 * std::sqrt(m.area)) - target;
  };

  // (sqrt E)' decreases from +infinity, so walk in log alpha until it brackets.
  double lo = 0.0, hi = 0.0;
  double f_lo = residual(0.0), f_hi = f_lo;
  if (f_lo > 0.0) {
    hi = lo;
    while (f_hi > 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi += std::log(2.0);
      if (hi > std::log(1e15)) {
        throw Error(ErrorKind::OutOfRange, "target area is not attainable",
                    a_max);
      }
      f_hi = residual(hi);
    }
  } else {
    while (f_lo <= 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo -= std::log(2.0);
      if (lo < std::log(1e-300)) {
        throw Error(ErrorKind::NoConvergence, "alpha bracket search failed");
      }
      f_lo = residual(lo);
    }
  }
  return std::exp(bracketed_root(residual, lo, hi, f_lo, f_hi));
}

Trajectory build_trajectory(const IncrementModel& model, double alpha,
                            const Vec2& ell, Side side, int n,
                            const QuadratureOptions& quad) {
  const auto arc = arc_parametrization(model, alpha, ell, side, n, quad);
  const double scale = -1.0 / (sign(side) * arc.mass);
  Trajectory traj;
  traj.times = arc.times;
  traj.points.resize(n);
  traj.derivs.resize(n);
  for (int i = 0; i < n; ++i) {
    traj.points[i] = scale * perp(arc.samples[i] - arc.samples[0]);
    traj.derivs[i] = scale * perp(arc.derivs[i]);
  }
  traj.points[0].setZero();
  energy(model, traj);
  return traj;
}

RateResult rate_of_area(const IncrementModel& model, double a,
                        const SolverOptions& opts) {
  check_area(a);
  if (opts.samples < 2) throw std::invalid_argument("samples must be >= 2");
  const auto support = support_class(model);

  if (support.tag == SupportTag::VerticalLine) {
    auto sol = graph_trajectory(model, a, opts.samples);
    RateResult result;
    result.a = a;
    result.jA = sol.jA;
    if (std::isfinite(sol.a_max)) result.a_max = sol.a_max;
    const double mu1 = model.graph().mu1;
    for (Side side : {Side::Positive, Side::Negative}) {
      Candidate c;
      c.kind = CandidateKind::Graph;
      c.side = side;
      c.mass = sol.u;
      c.multiplier = sign(side) * 2.0 * sol.u / mu1;
      c.energy = sol.jA;
      c.ell = Vec2::UnitY();
      c.trajectory = side == Side::Positive ? sol.plus : sol.minus;
      result.candidates.push_back(std::move(c));
    }
    return result;
  }

  if (support.tag == SupportTag::ProperSubsetOfPlane) {
    if (!(opts.eps > 0.0)) {
      throw Error(ErrorKind::NotFullPlane,
                  "support is not full-plane; pass a positive eps to smooth "
                  "the increments");
    }
    auto result = rate_of_area(regularize(model, opts.eps), a, opts);
    return result;
  }

  RateResult result;
  result.a = a;
  result.epsilon = model.epsilon();

  if (is_centrally_symmetric(model)) {
    const double a_max = symmetric_area_limit(model);
    if (std::isfinite(a_max)) result.a_max = a_max;
    const double alpha = symmetric_alpha(model, a, opts.quadrature);
    for (Side side : {Side::Positive, Side::Negative}) {
      result.candidates.push_back(
          make_candidate(model, alpha, Vec2::UnitX(), side, opts));
    }
  } else {
    for (const auto& root : general_roots(model, a, opts)) {
      const Vec2 e = unit_direction(root.theta);
      result.candidates.push_back(
          make_candidate(model, root.alpha, e, root.side, opts));
      const Side flipped =
          root.side == Side::Positive ? Side::Negative : Side::Positive;
      result.candidates.push_back(
          make_candidate(model, root.alpha, Vec2(-e), flipped, opts));
    }
  }

  if (result.candidates.empty()) {
    throw Error(ErrorKind::NoCandidate,
                "no (alpha, ell, tau) satisfies the optimality conditions");
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const Candidate& x, const Candidate& y) {
                     return x.energy < y.energy;
                   });
  result.jA = result.candidates.front().energy;
  return result;
}

double graph_area_limit(const IncrementModel& model) {
  if (support_class(model).tag != SupportTag::VerticalLine) {
    throw std::invalid_argument("graph_area_limit needs a graph1d model");
  }
  const Interval hull = support_hull_1d(model.graph().y);
  // lim E'(u) = int_0^1 s y_max ds - int_{-1}^0 s y_min ds.
  return 0.25 * std::abs(model.graph().mu1) * 0.5 * (hull.hi - hull.lo);
}

double graph_energy_slope(const IncrementModel& model, double u) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto f = [&](double s) {
    return s * (vertical_cumulant(model, u * s).d1 -
                vertical_cumulant(model, -u * s).d1);
  };
  return GK::integrate(f, 0.0, 1.0, 15, 1e-13);
}

GraphSolution graph_trajectory(const IncrementModel& model, double a, int n) {
  check_area(a);
  if (n < 2) throw std::invalid_argument("graph_trajectory needs n >= 2");
  if (support_class(model).tag != SupportTag::VerticalLine) {
    throw std::invalid_argument("graph_trajectory needs an unsmoothed graph1d "
                                "model");
  }
  GraphSolution sol;
  sol.a_max = graph_area_limit(model);
  if (a >= sol.a_max) {
    throw Error(ErrorKind::OutOfRange, "target area is not attainable",
                sol.a_max);
  }
  const double mu1 = model.graph().mu1;
  const double target = 4.0 * a / std::abs(mu1);
  auto residual = [&](double u) { return graph_energy_slope(model, u) - target; };

  double lo = 0.0, hi = 1.0;
  double f_lo = -target, f_hi = residual(hi);
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > 1e12) {
      throw Error(ErrorKind::OutOfRange, "target area is not attainable",
                  sol.a_max);
    }
    f_hi = residual(hi);
  }
  const double u = bracketed_root(residual, lo, hi, f_lo, f_hi);
  sol.u = u;

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto dual_energy = [&](double s) {
    const auto c = vertical_cumulant(model, u * s);
    return u * s * c.d1 - c.value;
  };
  sol.jA = 0.5 * (GK::integrate(dual_energy, -1.0, 0.0, 15, 1e-13) +
                  GK::integrate(dual_energy, 0.0, 1.0, 15, 1e-13));

  auto fill = [&](Trajectory& traj, double sgn) {
    traj.times.resize(n);
    traj.points.resize(n);
    traj.derivs.resize(n);
    const double base = vertical_cumulant(model, -sgn * u).value;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      const auto c = vertical_cumulant(model, sgn * u * (2.0 * t - 1.0));
      traj.times[i] = t;
      traj.points[i] = Vec2(mu1 * t, (c.value - base) / (2.0 * sgn * u));
      traj.derivs[i] = Vec2(mu1, c.d1);
    }
    traj.points[0].setZero();
    energy(model, traj);
  };
  fill(sol.plus, 1.0);
  fill(sol.minus, -1.0);
  return sol;
}

ElResidual el_residual(const IncrementModel& model, const Trajectory& traj,
                       double lambda) {
  if (traj.size() < 2) throw std::invalid_argument("trajectory too short");
  ElResidual res;
  res.candidate = lambda != 0.0;
  const Vec2 start = rate_gradient(model, traj.derivs.front());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec2 dual = rate_gradient(model, traj.derivs[i]);
    const double d = (lambda * perp(traj.points[i]) - dual + start).norm();
    res.interior = std::max(res.interior, d);
  }
  res.boundary = (rate_gradient(model, traj.derivs.back()) + start).norm();
  return res;
}

ElResidual el_residual_1d(const IncrementModel& model, const Trajectory& traj,
                          double lambda) {
  if (traj.size() < 2) throw std::invalid_argument("trajectory too short");
  const double mu1 = model.graph().mu1;
  ElResidual res;
  res.candidate = lambda != 0.0;
  const double start = rate_1d_gradient(model, traj.derivs.front().y());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double dual = rate_1d_gradient(model, traj.derivs[i].y());
    res.interior = std::max(
        res.interior, std::abs(lambda * mu1 * traj.times[i] - dual + start));
  }
  res.boundary =
      std::abs(rate_1d_gradient(model, traj.derivs.back().y()) + start);
  return res;
}

std::vector<LadderRung> regularization_ladder(const IncrementModel& model,
                                              double a,
                                              const std::vector<double>& eps,
                                              const SolverOptions& opts) {
  std::vector<LadderRung> rungs;
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("ladder eps must be > 0");
    const auto result = rate_of_area(regularize(model, e), a, opts);
    rungs.push_back({e, result.candidates.front().alpha, result.jA});
  }
  return rungs;
}

}  // namespace ldphull
