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


#include "ldphull/oracle.hpp"

#include "ldphull/errors.hpp"
#include "ldphull/legendre.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ldphull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Vector = Eigen::VectorXd;

std::vector<Vec2> unpack(const Vector& x) {
  std::vector<Vec2> v(x.size() / 2);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Vec2(x[2 * k], x[2 * k + 1]);
  return v;
}

// Energy terms I(v_k) and gradients grad I(v_k); nullopt when some velocity
// leaves the interior of the effective domain.
struct EnergyTerms {
  std::vector<double> values;
  std::vector<Vec2> duals;
};

std::optional<EnergyTerms> energy_terms(const IncrementModel& model,
                                        const std::vector<Vec2>& v) {
  EnergyTerms terms;
  terms.values.reserve(v.size());
  terms.duals.reserve(v.size());
  for (const Vec2& vk : v) {
    try {
      const auto sol = solve_conjugate(model, vk);
      terms.values.push_back(sol.value);
      terms.duals.push_back(sol.dual);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideDomain) return std::nullopt;
      throw;
    }
  }
  return terms;
}

// d A~ / d v_k = (perp(S_<k) - perp(S_>k)) / (2 n^2).
std::vector<Vec2> area_gradient(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  Vec2 total = Vec2::Zero();
  for (const Vec2& vk : v) total += vk;
  std::vector<Vec2> grad(n);
  Vec2 before = Vec2::Zero();
  const double scale = 1.0 / (2.0 * static_cast<double>(n) * n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 after = total - before - v[k];
    grad[k] = scale * (perp(before) - perp(after));
    before += v[k];
  }
  return grad;
}

struct Lagrangian {
  const IncrementModel& model;
  double a;
  double sign;
  double multiplier = 0.0;
  double penalty = 10.0;

  double constraint(const std::vector<Vec2>& v) const {
    return sign * discrete_signed_area(v) - a;
  }

  // Value and gradient; the value is +infinity outside the domain.
  double evaluate(const Vector& x, Vector& grad, double& dual_scale) const {
    const auto v = unpack(x);
    const auto terms = energy_terms(model, v);
    if (!terms) return kInf;
    const double n = static_cast<double>(v.size());
    const double c = constraint(v);
    const double weight = multiplier + penalty * c;
    const auto dA = area_gradient(v);
    grad.resize(x.size());
    double value = 0.0;
    dual_scale = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      value += terms->values[k] / n;
      const Vec2 g = terms->duals[k] / n + weight * sign * dA[k];
      grad[2 * k] = g.x();
      grad[2 * k + 1] = g.y();
      dual_scale = std::max(dual_scale, terms->duals[k].norm());
    }
    return value + multiplier * c + 0.5 * penalty * c * c;
  }
};

// max_k |n g_k| / (1 + max_k |grad I(v_k)|).
double scaled_stationarity(const Vector& grad, double dual_scale) {
  const double n = static_cast<double>(grad.size() / 2);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < grad.size() / 2; ++k) {
    worst = std::max(worst, n * std::hypot(grad[2 * k], grad[2 * k + 1]));
  }
  return worst / (1.0 + dual_scale);
}

// Limited-memory BFGS with Armijo backtracking. Returns the final scaled
// stationarity.
double minimize_inner(const Lagrangian& lag, Vector& x, double tol,
                      int max_iter) {
  constexpr std::size_t kHistory = 12;
  std::deque<std::pair<Vector, Vector>> memory;
  Vector grad;
  double dual_scale = 0.0;
  double f = lag.evaluate(x, grad, dual_scale);
  if (!std::isfinite(f)) {
    throw Error(ErrorKind::NoConvergence, "oracle start is outside the domain");
  }
  double stat = scaled_stationarity(grad, dual_scale);

  for (int it = 0; it < max_iter && stat > tol; ++it) {
    // Two-loop recursion.
    Vector q = grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    } else {
      q /= std::max(1.0, grad.norm());
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    Vector dir = -q;
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      memory.clear();
      dir = -grad / std::max(1.0, grad.norm());
      slope = grad.dot(dir);
    }

    Vector trial_grad;
    double trial_scale = 0.0;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      const Vector trial = x + step * dir;
      const double ft = lag.evaluate(trial, trial_grad, trial_scale);
      if (std::isfinite(ft) && ft <= f + 1e-4 * step * slope) {
        const Vector s = trial - x;
        const Vector y = trial_grad - grad;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
          memory.emplace_back(s, y);
          if (memory.size() > kHistory) memory.pop_front();
        }
        x = trial;
        f = ft;
        grad = trial_grad;
        dual_scale = trial_scale;
        accepted = true;
        break;
      }
    }
    stat = scaled_stationarity(grad, dual_scale);
    if (!accepted) {
      if (memory.empty()) break;  // steepest descent made no progress
      memory.clear();
    }
  }
  return stat;
}

// Half circle of area a traversed with the requested orientation, with its
// chord along the drift.
Vector half_circle(const IncrementModel& model, double a, int n, double sign) {
  const Vec2 mu = model.drift();
  const double base = mu.norm() > 0.0 ? std::atan2(mu.y(), mu.x()) : 0.0;
  const double speed = std::sqrt(2.0 * std::numbers::pi * a);
  Vector x(2 * n);
  for (int k = 0; k < n; ++k) {
    const double theta = base - sign * 0.5 * std::numbers::pi +
                         sign * std::numbers::pi * (k + 0.5) / n;
    x[2 * k] = speed * std::cos(theta);
    x[2 * k + 1] = speed * std::sin(theta);
  }
  return x;
}

// Pulls the velocities toward the drift until every I(v_k) is finite.
void pull_inside(const IncrementModel& model, Vector& x) {
  const Vec2 mu = model.drift();
  for (int i = 0; i < 60; ++i) {
    if (energy_terms(model, unpack(x))) return;
    for (Eigen::Index k = 0; k < x.size() / 2; ++k) {
      x[2 * k] = mu.x() + 0.5 * (x[2 * k] - mu.x());
      x[2 * k + 1] = mu.y() + 0.5 * (x[2 * k + 1] - mu.y());
    }
  }
  throw Error(ErrorKind::NoConvergence, "no feasible start for the oracle");
}

struct SignedRun {
  bool converged = false;
  OracleResult result;
  std::string diagnostics;
};

SignedRun solve_sign(const IncrementModel& model, double a, int n, double sign,
                     const OracleOptions& opts) {
  Lagrangian lag{model, a, sign};
  Vector x = half_circle(model, a, n, sign);
  pull_inside(model, x);

  SignedRun run;
  double previous = kInf;
  double c = kInf;
  double stat = kInf;
  int outer = 0;
  for (; outer < opts.max_outer; ++outer) {
    stat = minimize_inner(lag, x, 0.1 * opts.stat_tol, opts.max_inner);
    c = lag.constraint(unpack(x));
    if (std::abs(c) <= opts.feas_tol && stat <= opts.stat_tol) {
      run.converged = true;
      ++outer;
      break;
    }
    lag.multiplier += lag.penalty * c;
    if (std::abs(c) > 0.25 * previous) lag.penalty *= 2.0;
    previous = std::abs(c);
  }
  run.result.curve = make_discrete_curve(model, unpack(x));
  run.result.feasibility = std::abs(std::abs(run.result.curve.area) - a);
  run.result.stationarity = stat;
  run.result.outer_iterations = outer;
  std::ostringstream msg;
  msg << "sign " << (sign > 0 ? '+' : '-') << ": |A~ - a| = " << std::abs(c)
      << ", stationarity = " << stat << " after " << outer
      << " outer iterations";
  run.diagnostics = msg.str();
  return run;
}

}  // namespace

std::vector<Vec2> DiscreteCurve::points() const {
  std::vector<Vec2> out;
  out.reserve(velocities.size() + 1);
  out.push_back(Vec2::Zero());
  Eigen::Matrix<long double, 2, 1> sum = Eigen::Matrix<long double, 2, 1>::Zero();
  for (const Vec2& v : velocities) {
    sum += v.cast<long double>();
    out.push_back((sum / static_cast<long double>(n)).cast<double>());
  }
  return out;
}

double discrete_energy(const IncrementModel& model,
                       const std::vector<Vec2>& velocities) {
  if (velocities.empty()) throw std::invalid_argument("no velocities");
  std::vector<double> terms;
  terms.reserve(velocities.size());
  for (const Vec2& v : velocities) terms.push_back(rate(model, v));
  std::sort(terms.begin(), terms.end());
  long double total = 0.0L;
  for (double t : terms) total += t;
  return static_cast<double>(total / velocities.size());
}

double discrete_signed_area(const std::vector<Vec2>& velocities) {
  if (velocities.empty()) throw std::invalid_argument("no velocities");
  long double x = 0.0L, y = 0.0L, twice = 0.0L;
  for (const Vec2& v : velocities) {
    twice += x * v.y() - y * v.x();
    x += v.x();
    y += v.y();
  }
  const long double n = velocities.size();
  return static_cast<double>(twice / (2.0L * n * n));
}

DiscreteCurve make_discrete_curve(const IncrementModel& model,
                                  std::vector<Vec2> velocities) {
  DiscreteCurve curve;
  curve.n = static_cast<int>(velocities.size());
  curve.energy = discrete_energy(model, velocities);
  curve.area = discrete_signed_area(velocities);
  curve.velocities = std::move(velocities);
  return curve;
}

OracleResult minimize_discrete(const IncrementModel& model, double a, int n,
                               const OracleOptions& opts) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("target area must be a finite a > 0");
  }
  if (n < 8) throw std::invalid_argument("minimize_discrete needs n >= 8");
  if (support_class(model).tag != SupportTag::FullPlane) {
    throw Error(ErrorKind::NotFullPlane, "oracle needs full-plane support");
  }

  std::optional<OracleResult> best;
  std::string diagnostics;
  for (double sign : {1.0, -1.0}) {
    auto run = solve_sign(model, a, n, sign, opts);
    diagnostics += (diagnostics.empty() ? "" : "; ") + run.diagnostics;
    if (run.converged &&
        (!best || run.result.curve.energy < best->curve.energy)) {
      best = std::move(run.result);
    }
  }
  if (!best) {
    throw Error(ErrorKind::NoConvergence,
                "augmented Lagrangian did not converge: " + diagnostics);
  }
  return *best;
}

DiscreteCurve convexify_curve(const DiscreteCurve& curve,
                              Orientation orientation) {
  long double sx = 0.0L, sy = 0.0L;
  for (const Vec2& v : curve.velocities) {
    sx += v.x();
    sy += v.y();
  }
  const bool closed = sx == 0.0L && sy == 0.0L;
  const Vec2 reference = closed ? Vec2(1.0, 0.0)
                                : Vec2(-static_cast<double>(sx),
                                       -static_cast<double>(sy));
  const auto order =
      convexification_order(curve.velocities, reference, orientation);
  DiscreteCurve out;
  out.n = curve.n;
  out.energy = curve.energy;
  out.velocities.reserve(order.size());
  for (std::size_t idx : order) out.velocities.push_back(curve.velocities[idx]);
  out.area = discrete_signed_area(out.velocities);
  return out;
}

}  // namespace ldphull
