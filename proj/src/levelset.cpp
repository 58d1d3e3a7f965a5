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

#include "ldphull/levelset.hpp"

#include "ldphull/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldphull {

namespace {

constexpr double kPi = std::numbers::pi;
using Gauss = boost::math::quadrature::gauss<double, 10>;
constexpr double kRoundoff = 1e-14;
constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kStallBand = 1e3;  // in units of the requested tolerance
constexpr int kMinStallDepth = 2;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("level sets need a finite alpha > 0");
  }
}

void require_full_plane(const IncrementModel& model) {
  if (support_class(model).tag != SupportTag::FullPlane) {
    throw Error(ErrorKind::NotFullPlane,
                "level sets are bounded only for full-plane support");
  }
}

// K(r dir) - alpha is convex in r, negative at 0 and crosses zero once.
// Newton from the right of the root converges monotonically; the bracket
// guards against rounding.
double radius_with_hint(const IncrementModel& model, double alpha,
                        const Vec2& dir, double hint) {
  auto phi = [&](double r) { return cumulant(model, r * dir) - alpha; };
  double lo = 0.0;
  double hi = hint > 0.0 ? hint : 1.0;
  int guard = 0;
  while (phi(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 1100) {
      throw Error(ErrorKind::NoConvergence, "ray does not reach the level set");
    }
  }
  // Tighten the lower end when the hint was close from above.
  if (lo == 0.0 && hint > 0.0) {
    const double probe = 0.5 * hint;
    if (phi(probe) < 0.0) lo = probe;
  }

  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * alpha;
  double r = hi;
  for (int it = 0; it < 200; ++it) {
    const double f = phi(r);
    if (std::abs(f) <= tol) return r;
    (f > 0.0 ? hi : lo) = r;
    const double slope = cumulant_gradient(model, r * dir).dot(dir);
    double next = slope > 0.0 ? r - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) {
      return std::abs(phi(lo)) < std::abs(phi(hi)) ? lo : hi;
    }
    r = next;
  }
  return r;
}

struct Density {
  double area;
  double mass;
  Density& operator+=(const Density& o) {
    area += o.area;
    mass += o.mass;
    return *this;
  }
};

// Integrands along the angular parametrization theta = start + dir * phi.
class ArcIntegrand {
 public:
  ArcIntegrand(const IncrementModel& model, double alpha, double start,
               double dir)
      : model_(model), alpha_(alpha), start_(start), dir_(dir) {}

  double theta(double phi) const { return start_ + dir_ * phi; }

  Vec2 point(double phi) {
    const Vec2 e = unit_direction(theta(phi));
    hint_ = radius_with_hint(model_, alpha_, e, hint_);
    return hint_ * e;
  }

  Density operator()(double phi) {
    const Vec2 u = point(phi);
    const double r2 = u.squaredNorm();
    const double support = cumulant_gradient(model_, u).dot(u);
    return {0.5 * r2, r2 / support};
  }

  Density gauss(double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    Density sum{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        if (x[i] == 0.0 && s > 0.0) continue;
        const Density d = (*this)(mid + s * half * x[i]);
        sum.area += w[i] * d.area;
        sum.mass += w[i] * d.mass;
      }
    }
    sum.area *= half;
    sum.mass *= half;
    return sum;
  }

 private:
  const IncrementModel& model_;
  double alpha_;
  double start_;
  double dir_;
  double hint_ = 0.0;
};

struct Panel {
  double a;
  double b;
  Density value;
};

class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(ArcIntegrand& f, double span, const QuadratureOptions& opts)
      : f_(f), span_(span), opts_(opts) {}

  std::vector<Panel> run() {
    const int n = std::max(1, opts_.initial_panels);
    std::vector<Panel> coarse;
    Density total{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double a = span_ * k / n;
      const double b = span_ * (k + 1) / n;
      coarse.push_back({a, b, f_.gauss(a, b)});
      total += coarse.back().value;
    }
    tol_area_ = opts_.rel_tol * std::abs(total.area);
    tol_mass_ = opts_.rel_tol * std::abs(total.mass);
    std::vector<Panel> out;
    for (const auto& p : coarse) refine(p, 0, kInfinity, out);
    return out;
  }

 private:
  void refine(const Panel& p, int depth, double parent_err,
              std::vector<Panel>& out) {
    const double mid = 0.5 * (p.a + p.b);
    const Panel left{p.a, mid, f_.gauss(p.a, mid)};
    const Panel right{mid, p.b, f_.gauss(mid, p.b)};
    const double share = (p.b - p.a) / span_;
    const double err_area =
        std::abs(left.value.area + right.value.area - p.value.area);
    const double err_mass =
        std::abs(left.value.mass + right.value.mass - p.value.mass);
    // Differences at the rounding level of the panel itself cannot shrink.
    const double floor_area = kRoundoff * std::abs(p.value.area);
    const double floor_mass = kRoundoff * std::abs(p.value.mass);
    // Halving a panel of a smooth integrand shrinks the estimate by orders of
    // magnitude; an estimate that is already near tolerance and stops
    // shrinking is rounding noise from the ray solves.
    const double err = std::max(err_area / std::max(tol_area_, kTiny),
                                err_mass / std::max(tol_mass_, kTiny));
    const bool stalled =
        depth >= kMinStallDepth && err < kStallBand && err > 0.5 * parent_err;
    if (depth >= opts_.max_depth || stalled ||
        (err_area <= std::max(tol_area_ * share, floor_area) &&
         err_mass <= std::max(tol_mass_ * share, floor_mass))) {
      out.push_back(left);
      out.push_back(right);
      return;
    }
    refine(left, depth + 1, err, out);
    refine(right, depth + 1, err, out);
  }

  ArcIntegrand& f_;
  double span_;
  QuadratureOptions opts_;
  double tol_area_ = 0.0;
  double tol_mass_ = 0.0;
};

Density sum_panels(const std::vector<Panel>& panels) {
  Density total{0.0, 0.0};
  for (const auto& p : panels) total += p.value;
  return total;
}

double angle_of(const Vec2& ell) {
  if (!(ell.norm() > 0.0)) throw std::invalid_argument("ell must be non-zero");
  return std::atan2(ell.y(), ell.x());
}

}  // namespace

double level_radius(const IncrementModel& model, double alpha, const Vec2& dir) {
  check_alpha(alpha);
  require_full_plane(model);
  if (!(dir.norm() > 0.0)) throw std::invalid_argument("dir must be non-zero");
  return radius_with_hint(model, alpha, dir.normalized(), 0.0);
}

PolygonalLine trace_level(const IncrementModel& model, double alpha, int m) {
  check_alpha(alpha);
  require_full_plane(model);
  if (m < 8) throw std::invalid_argument("trace_level needs m >= 8");
  std::vector<Vec2> vertices;
  vertices.reserve(m + 1);
  double hint = 0.0;
  for (int k = 0; k < m; ++k) {
    const Vec2 e = unit_direction(2.0 * kPi * k / m);
    hint = radius_with_hint(model, alpha, e, hint);
    vertices.push_back(hint * e);
  }
  vertices.push_back(vertices.front());
  return PolygonalLine(std::move(vertices));
}

ArcMeasures arc_measures(const IncrementModel& model, double alpha,
                         const Vec2& ell, Side side,
                         const QuadratureOptions& opts) {
  check_alpha(alpha);
  require_full_plane(model);
  ArcIntegrand f(model, alpha, angle_of(ell), sign(side));
  const auto total = sum_panels(AdaptiveIntegrator(f, kPi, opts).run());
  return {total.area, total.mass};
}

ArcMeasures level_measures(const IncrementModel& model, double alpha,
                           const QuadratureOptions& opts) {
  check_alpha(alpha);
  require_full_plane(model);
  ArcIntegrand f(model, alpha, 0.0, 1.0);
  const auto total = sum_panels(AdaptiveIntegrator(f, 2.0 * kPi, opts).run());
  return {total.area, total.mass};
}

double sublevel_area(const IncrementModel& model, double alpha,
                     const QuadratureOptions& opts) {
  return level_measures(model, alpha, opts).area;
}

double level_mass(const IncrementModel& model, double alpha,
                  const QuadratureOptions& opts) {
  return level_measures(model, alpha, opts).mass;
}

double half_area(const IncrementModel& model, double alpha, const Vec2& ell,
                 Side side, const QuadratureOptions& opts) {
  return arc_measures(model, alpha, ell, side, opts).area;
}

double arc_mass(const IncrementModel& model, double alpha, const Vec2& ell,
                Side side, const QuadratureOptions& opts) {
  return arc_measures(model, alpha, ell, side, opts).mass;
}

double dE_dalpha(const IncrementModel& model, double alpha, const Vec2& ell,
                 Side side, const QuadratureOptions& opts) {
  return arc_mass(model, alpha, ell, side, opts);
}

LevelArc arc_parametrization(const IncrementModel& model, double alpha,
                             const Vec2& ell, Side side, int n,
                             const QuadratureOptions& opts) {
  check_alpha(alpha);
  require_full_plane(model);
  if (n < 2) throw std::invalid_argument("arc_parametrization needs n >= 2");

  const Vec2 dir = ell.normalized();
  ArcIntegrand f(model, alpha, angle_of(dir), sign(side));
  const auto panels = AdaptiveIntegrator(f, kPi, opts).run();

  std::vector<double> cumulative(panels.size() + 1, 0.0);
  for (std::size_t k = 0; k < panels.size(); ++k) {
    cumulative[k + 1] = cumulative[k] + panels[k].value.mass;
  }
  const double mass = cumulative.back();

  LevelArc arc;
  arc.alpha = alpha;
  arc.ell = dir;
  arc.side = side;
  arc.mass = mass;
  arc.area = sum_panels(panels).area;
  arc.times.resize(n);
  arc.samples.resize(n);
  arc.derivs.resize(n);

  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    arc.times[i] = t;
    double phi;
    if (i == 0) {
      phi = 0.0;
    } else if (i == n - 1) {
      phi = kPi;
    } else {
      // Solve cumulative mass M(phi) = t * lambda inside the bracketing panel.
      const double target = t * mass;
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), target);
      const std::size_t k = std::clamp<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()) - 1, 0,
          panels.size() - 1);
      double lo = panels[k].a, hi = panels[k].b;
      phi = 0.5 * (lo + hi);
      for (int iter = 0; iter < 60; ++iter) {
        const double partial = cumulative[k] + f.gauss(panels[k].a, phi).mass;
        const double g = partial - target;
        (g > 0.0 ? hi : lo) = phi;
        const double density = f(phi).mass;
        double next = phi - g / density;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - phi) <= 1e-15 * kPi) {
          phi = next;
          break;
        }
        phi = next;
      }
    }
    const Vec2 g = f.point(phi);
    arc.samples[i] = g;
    arc.derivs[i] = sign(side) * mass * perp(cumulant_gradient(model, g));
  }
  return arc;
}

}  // namespace ldphull
