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


// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "ldphull/errors.hpp"
#include "ldphull/legendre.hpp"
#include "ldphull/levelset.hpp"
#include "ldphull/montecarlo.hpp"
#include "ldphull/oracle.hpp"
#include "ldphull/polyline.hpp"
#include "ldphull/solver.hpp"

#include "support/closed_forms.hpp"
#include "support/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

using namespace ldphull;
using ldphull::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!failures.empty()) failures += "; ";
      failures += what;
    }
  }
  std::string failures;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IncrementModel gaussian(Vec2 mean = Vec2::Zero()) {
  return IncrementModel::gaussian(mean, Mat2::Identity());
}

IncrementModel pm1_graph() {
  return IncrementModel::graph(1.0, Atoms1D{{1.0, -1.0}, {0.5, 0.5}});
}

IncrementModel square_atoms() {
  return IncrementModel::atoms({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}},
                               {0.25, 0.25, 0.25, 0.25});
}

double sup_distance(const Trajectory& t, const std::function<Vec2(double)>& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    worst = std::max(worst, (t.points[i] - ref(t.times[i])).norm());
  }
  return worst;
}

Verdict criterion1() {
  Verdict v;
  double worst_err = 0.0, worst_var = 0.0, worst_time = 0.0;
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    Stopwatch sw;
    const auto r = rate_of_area(gaussian(), a);
    worst_time = std::max(worst_time, sw.seconds());
    worst_err = std::max(worst_err, std::abs(r.jA - kPi * a) / (kPi * a));
    for (const auto& c : r.candidates) {
      std::vector<double> speed;
      for (const Vec2& d : c.trajectory.derivs) speed.push_back(d.norm());
      const double mean = std::accumulate(speed.begin(), speed.end(), 0.0) / speed.size();
      double var = 0.0;
      for (double s : speed) var += (s - mean) * (s - mean);
      var /= speed.size();
      worst_var = std::max(worst_var, var);
      v.require(std::abs(mean - std::sqrt(2 * kPi * a)) <= 1e-6 * std::sqrt(2 * kPi * a),
                fmt("mean speed %.9g at a=%g", mean, a));
    }
  }
  v.require(worst_err <= 1e-4, "jA relative error");
  v.require(worst_var <= 1e-6, "speed variance");
  v.require(worst_time <= 2.0, "runtime");
  v.detail = fmt("max rel err %.2e, max speed variance %.2e, max time %.2fs", worst_err,
                 worst_var, worst_time);
  return v;
}

Verdict criterion2() {
  Verdict v;
  double worst = 0.0;
  for (double a : {0.5, 1.0}) {
    const double ref = ldphull::testing::drifted_gaussian_rate(a);
    const auto r = rate_of_area(gaussian({1, 0}), a);
    worst = std::max(worst, std::abs(r.jA - ref) / ref);
    int minimal = 0;
    for (const auto& c : r.candidates) {
      if (c.energy <= r.jA * (1 + 1e-8)) ++minimal;
    }
    v.require(minimal == 2, fmt("%d energy-minimal candidates at a=%g", minimal, a));
    const auto& best = r.candidates;
    v.require(std::abs(std::abs(best[0].ell.y()) - 1) <= 1e-10 &&
                  std::abs(best[0].ell.y() + best[1].ell.y()) <= 1e-10,
              "minimal directions are not +-(0,1)");
    for (std::size_t k = 2; k < best.size(); ++k) {
      v.require(best[0].half_area < best[k].half_area, "winner is not the smaller arc");
    }
  }
  v.require(worst <= 1e-3, "jA relative error");
  v.detail = fmt("max rel err vs scalar bisection %.2e", worst);
  return v;
}

Verdict criterion3() {
  Verdict v;
  const auto model = IncrementModel::graph(1.0, Gaussian1D{0.0, 1.0});
  double worst_j = 0.0, worst_h = 0.0;
  for (double a : {0.25, 1.0}) {
    const auto r = rate_of_area(model, a);
    worst_j = std::max(worst_j, std::abs(r.jA - 6 * a * a));
    for (const auto& c : r.candidates) {
      const double s = c.side == Side::Positive ? 1.0 : -1.0;
      worst_h = std::max(worst_h, sup_distance(c.trajectory, [&](double t) {
                           return Vec2(t, s * 6 * a * (t * t - t));
                         }));
    }
  }
  v.require(worst_j <= 1e-8, "jA");
  v.require(worst_h <= 1e-8, "h2 profile");
  v.detail = fmt("max |jA - 6a^2| %.2e, max |h - parabola| %.2e", worst_j, worst_h);
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto model = pm1_graph();
  const double a_max = graph_area_limit(model);
  v.require(a_max == 0.25, "a_max");
  double prev = 0.0;
  bool increasing = true;
  for (int k = 5; k <= 24; ++k) {
    const double j = graph_trajectory(model, k / 100.0).jA;
    increasing = increasing && j > prev;
    prev = j;
  }
  v.require(increasing, "jA not strictly increasing");
  const auto edge = graph_trajectory(model, 0.2499);
  v.require(edge.jA < std::log(2.0), "jA(0.2499) >= log 2");
  const double d_plus =
      sup_distance(edge.plus, [](double t) { return Vec2(t, -std::min(t, 1 - t)); });
  const double d_minus =
      sup_distance(edge.minus, [](double t) { return Vec2(t, std::min(t, 1 - t)); });
  v.require(std::max(d_plus, d_minus) <= 0.05, "distance to the triangle");
  v.detail = fmt("a_max %.17g, jA(0.2499) %.6f < log 2 = %.6f, sup distance %.3e", a_max,
                 edge.jA, std::log(2.0), std::max(d_plus, d_minus));
  return v;
}

std::vector<Vec2> edges_in(const std::vector<Vec2>& edges, const std::vector<std::size_t>& p) {
  std::vector<Vec2> out;
  for (std::size_t i : p) out.push_back(edges[i]);
  return out;
}

PolygonalLine line_from(const Vec2& start, const std::vector<Vec2>& edges) {
  std::vector<Vec2> pts{start};
  for (const Vec2& e : edges) pts.push_back(pts.back() + e);
  return PolygonalLine(pts);
}

Verdict criterion5() {
  Verdict v;
  Stopwatch sw;
  Gen gen(5);
  int violations = 0;
  double worst_identity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto o = trial % 2 ? Orientation::Clockwise : Orientation::Counterclockwise;
    const PolygonalLine open(gen.polyline(gen.integer(2, 12)));
    if (hull_area(open) > hull_area(convexify(open, o)) + 1e-12) ++violations;
    const PolygonalLine closed(gen.closed_polyline(gen.integer(3, 12)));
    const auto closed_c = convexify(closed, o);
    if (std::abs(winding_signed_area(closed)) >
        std::abs(winding_signed_area(closed_c)) + 1e-12) {
      ++violations;
    }
    worst_identity = std::max(
        {worst_identity, std::abs(winding_signed_area(closed) - signed_area_integral(closed)),
         std::abs(winding_signed_area(closed_c) - signed_area_integral(closed_c))});
  }
  v.require(violations == 0, fmt("%d inequality violations", violations));
  v.require(worst_identity <= 1e-12, "signed-area identity");

  // Exhaustive permutations for every edge count up to six.
  int cases = 0, non_maximal = 0;
  for (int k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Vec2> edges;
      for (int i = 0; i < k; ++i) edges.push_back(gen.vec(1.0));
      // Repeat a direction now and then to exercise ties.
      if (k > 2 && trial % 4 == 0) edges[1] = 0.5 * edges[0];
      const Vec2 start = gen.vec(1.0);
      std::vector<std::size_t> p(k);
      std::iota(p.begin(), p.end(), 0);
      double best = 0.0;
      do {
        best = std::max(best, hull_area(line_from(start, edges_in(edges, p))));
      } while (std::next_permutation(p.begin(), p.end()));
      for (auto o : {Orientation::Clockwise, Orientation::Counterclockwise}) {
        ++cases;
        const double got = hull_area(convexify(line_from(start, edges), o));
        if (std::abs(got - best) > 1e-12 * std::max(1.0, best)) ++non_maximal;
      }
    }
  }
  v.require(non_maximal == 0, fmt("%d non-maximal permutations", non_maximal));
  v.require(sw.seconds() <= 30.0, "runtime");
  v.detail = fmt("1000 lines, identity err %.2e, %d permutation cases, %.2fs", worst_identity,
                 cases, sw.seconds());
  return v;
}

// 200-point polar grid around the drift, inside the domain of I.
std::vector<Vec2> velocity_grid(const IncrementModel& m, double radius) {
  std::vector<Vec2> grid;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 0; j < 20; ++j) {
      grid.push_back(m.drift() + radius * i / 10.0 * unit_direction(2 * kPi * j / 20));
    }
  }
  return grid;
}

double hessian_bound(const IncrementModel& m) {
  if (const auto* g = std::get_if<Gaussian2D>(&m.kind())) {
    return g->cov.trace();  // >= the largest eigenvalue
  }
  double r2 = 0.0;
  for (const Vec2& p : std::get<Atoms2D>(m.kind()).points) r2 = std::max(r2, p.squaredNorm());
  return r2;
}

Verdict criterion6() {
  Verdict v;
  struct Case {
    const char* name;
    IncrementModel model;
    double radius;  // of the velocity grid around the drift
  };
  // The square atoms have domain (-1, 1)^2; stay strictly inside it.
  const Case cases[] = {{"iso", gaussian(), 3.0},
                        {"drift", gaussian({1, 0}), 3.0},
                        {"square", square_atoms(), 0.9}};
  double fy_gap = std::numeric_limits<double>::infinity(), fy_eq = 0.0, inverse = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  Gen gen(6);
  for (const auto& c : cases) {
    const auto grid = velocity_grid(c.model, c.radius);
    const double L = hessian_bound(c.model);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec2& vel = grid[i];
      const Vec2 u = gen.in_disk(3.0);
      const double iv = rate(c.model, vel);
      fy_gap = std::min(fy_gap, iv + cumulant(c.model, u) - u.dot(vel));
      const Vec2 us = rate_gradient(c.model, vel);
      fy_eq = std::max(fy_eq, std::abs(iv + cumulant(c.model, us) - us.dot(vel)));
      inverse = std::max(inverse, (cumulant_gradient(c.model, us) - vel).norm());

      const Vec2& w = grid[(i * 37 + 11) % grid.size()];
      if ((vel - w).norm() >= 0.1) {
        const double delta = (vel - w).squaredNorm() / (16.0 * L);
        margin = std::min(margin, 0.5 * rate(c.model, vel) + 0.5 * rate(c.model, w) -
                                      rate(c.model, 0.5 * (vel + w)) - delta);
      }
    }
  }
  v.require(fy_gap >= -1e-10, "Fenchel-Young inequality");
  v.require(fy_eq <= 1e-8, "Fenchel-Young equality");
  v.require(inverse <= 1e-8, "grad K o grad I");
  v.require(margin > 0.0, "strict convexity margin");
  v.detail = fmt("FY min gap %.2e, FY equality %.2e, inverse map %.2e, convexity slack %.2e",
                 fy_gap, fy_eq, inverse, margin);
  return v;
}

Verdict criterion7() {
  Verdict v;
  double interior = 0.0, boundary = 0.0;
  int checked = 0;
  const IncrementModel planar[] = {gaussian(), gaussian({1, 0}),
                                   regularize(square_atoms(), 0.01)};
  for (const auto& model : planar) {
    for (double a : {0.05, 0.25, 0.5, 1.0}) {
      if (model.epsilon() > 0 && a >= 0.25) continue;
      for (const auto& c : rate_of_area(model, a).candidates) {
        const auto res = el_residual(model, c.trajectory, c.multiplier);
        interior = std::max(interior, res.interior);
        boundary = std::max(boundary, res.boundary);
        ++checked;
      }
    }
  }
  const IncrementModel graphs[] = {IncrementModel::graph(1.0, Gaussian1D{0.0, 1.0}),
                                   pm1_graph()};
  for (const auto& model : graphs) {
    for (double a : {0.05, 0.1, 0.2, 0.24}) {
      for (const auto& c : rate_of_area(model, a).candidates) {
        const auto res = el_residual_1d(model, c.trajectory, c.multiplier);
        interior = std::max(interior, res.interior);
        boundary = std::max(boundary, res.boundary);
        ++checked;
      }
    }
  }
  v.require(interior <= 1e-5, "interior residual");
  v.require(boundary <= 1e-5, "transversality defect");
  v.detail = fmt("%d trajectories, max residual %.2e, max transversality %.2e", checked,
                 interior, boundary);
  return v;
}

Verdict criterion8() {
  Verdict v;
  std::string detail;
  for (const auto& [name, model] :
       {std::pair{"iso", gaussian()}, std::pair{"drift", gaussian({1, 0})}}) {
    const double j = rate_of_area(model, 1.0).jA;
    Stopwatch sw;
    const double e = minimize_discrete(model, 1.0, 128).curve.energy;
    const double t = sw.seconds();
    v.require(e <= 1.03 * j, fmt("%s above 3%%", name));
    v.require(e >= j - 1e-3, fmt("%s below jA", name));
    v.require(t <= 60.0, fmt("%s runtime", name));
    detail += fmt("%s %+.3f%% (%.2fs) ", name, 100 * (e - j) / j, t);
  }
  v.detail = "oracle vs jA: " + detail;
  return v;
}

Verdict criterion9() {
  Verdict v;
  Stopwatch sw;
  const auto pm = pm1_graph();
  const double a = 0.2;
  double worst_z = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const double exact = enumerate_tail(pm, n, a * n * n);
    EstimateOptions opts;
    opts.samples = 100000;
    opts.seed = 7 + n;
    const auto est = estimate_ldp(pm, a, n, opts);
    const double z = std::abs(est.probability - exact) / est.probability_stderr;
    worst_z = std::max(worst_z, z);
  }
  v.require(worst_z <= 3.0, "enumeration agreement");

  const double target = 0.3 * kPi;
  std::vector<double> rates, errs;
  for (int n : {20, 40, 80}) {
    EstimateOptions opts;
    opts.samples = 100000;
    opts.seed = 2026;
    opts.threads = 4;
    const auto est = estimate_ldp(gaussian(), 0.3, n, opts);
    rates.push_back(est.rate_estimate);
    errs.push_back(est.stderr);
  }
  bool trend = true;
  for (std::size_t k = 0; k + 1 < rates.size(); ++k) {
    trend = trend && std::abs(rates[k + 1] - target) <= std::abs(rates[k] - target) + errs[k + 1];
  }
  const double final_err = std::abs(rates.back() - target) / target;
  v.require(trend, "no monotone trend toward 0.3 pi");
  v.require(final_err <= 0.15, "final estimate beyond 15%");
  v.require(sw.seconds() <= 300.0, "runtime");
  v.detail = fmt("max |z| %.2f over n=2..6; rates %.4f(%.4f) %.4f(%.4f) %.4f(%.4f) vs %.4f, "
                 "final rel err %.1f%%, %.1fs",
                 worst_z, rates[0], errs[0], rates[1], errs[1], rates[2], errs[2], target,
                 100 * final_err, sw.seconds());
  return v;
}

Verdict criterion10() {
  Verdict v;
  const auto ladder = regularization_ladder(square_atoms(), 0.05, {1e-1, 1e-2, 1e-3});
  const double change = std::abs(ladder[2].jA - ladder[1].jA) / ladder[2].jA;
  v.require(change < 0.02, "last two rungs differ by 2% or more");
  v.detail = fmt("square atoms a=0.05: jA %.6f, %.6f, %.6f; last change %.2f%%", ladder[0].jA,
                 ladder[1].jA, ladder[2].jA, 100 * change);
  return v;
}

}  // namespace

// With arguments, runs only the listed criteria (1-based).
int main(int argc, char** argv) {
  const std::function<Verdict()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8,
                                               criterion9, criterion10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10]...\n", argv[0]);
      return 2;
    }
    selected.push_back(k - 1);
  }
  if (selected.empty()) {
    for (int k = 0; k < 10; ++k) selected.push_back(k);
  }

  int failed = 0;
  for (int k : selected) {
    Verdict v;
    try {
      v = criteria[k]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.failures = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("criterion %2d: %s  %s%s%s\n", k + 1, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), v.pass ? "" : "  -- ", v.failures.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
