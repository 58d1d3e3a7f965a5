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


#include "ldphull/montecarlo.hpp"

#include "ldphull/errors.hpp"
#include "ldphull/legendre.hpp"
#include "ldphull/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace ldphull {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform random bit generator whose output is a hash of (key, counter).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t sample, std::uint64_t step)
      : key_(mix(mix(mix(seed) ^ sample) ^ step)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return mix(key_ ^ mix(++counter_)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

double uniform(CounterRng& rng) {
  return std::generate_canonical<double, 53>(rng);
}

double normal(CounterRng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

std::size_t pick(const std::vector<double>& weights, double total,
                 CounterRng& rng) {
  const double target = uniform(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

// Draws from the law exp(u.x - K(u)) P(dx), component by component: the
// tilt of an independent sum tilts each summand by the same u.
class TiltedSampler {
 public:
  explicit TiltedSampler(const IncrementModel& model) : model_(model) {
    if (const auto* g = std::get_if<Gaussian2D>(&model.kind())) {
      Eigen::SelfAdjointEigenSolver<Mat2> eig(g->cov);
      root_ = eig.eigenvectors() *
              eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
              eig.eigenvectors().transpose();
    }
  }

  Vec2 draw(const Vec2& u, CounterRng& rng) const {
    Vec2 x = std::visit([&](const auto& kind) { return draw_kind(kind, u, rng); },
                        model_.kind());
    const double eps = model_.epsilon();
    if (eps > 0.0) {
      const double sd = std::sqrt(eps);
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      x += eps * u + sd * Vec2(z1, z2);
    }
    return x;
  }

 private:
  Vec2 draw_kind(const Gaussian2D& g, const Vec2& u, CounterRng& rng) const {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    return g.mean + g.cov * u + root_ * Vec2(z1, z2);
  }

  Vec2 draw_kind(const Atoms2D& atoms, const Vec2& u, CounterRng& rng) const {
    std::vector<double> w(atoms.points.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (const Vec2& p : atoms.points) shift = std::max(shift, u.dot(p));
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = atoms.probs[i] * std::exp(u.dot(atoms.points[i]) - shift);
      total += w[i];
    }
    return atoms.points[pick(w, total, rng)];
  }

  Vec2 draw_kind(const Graph1D& graph, const Vec2& u, CounterRng& rng) const {
    const double y = std::visit(
        [&](const auto& law) { return draw_1d(law, u.y(), rng); }, graph.y);
    return {graph.mu1, y};
  }

  static double draw_1d(const Gaussian1D& g, double u, CounterRng& rng) {
    return g.mean + g.variance * u + std::sqrt(g.variance) * normal(rng);
  }

  static double draw_1d(const Atoms1D& atoms, double u, CounterRng& rng) {
    std::vector<double> w(atoms.points.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (double p : atoms.points) shift = std::max(shift, u * p);
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = atoms.probs[i] * std::exp(u * atoms.points[i] - shift);
      total += w[i];
    }
    return atoms.points[pick(w, total, rng)];
  }

  const IncrementModel& model_;
  Mat2 root_ = Mat2::Zero();
};

// Walk with step i drawn from the law tilted by family[c][i]. The weight is
// the likelihood ratio of the untilted law against the equal mixture of all
// tilted laws in the family (the balance heuristic); with one component it is
// the plain ratio sum_i (K(u_i) - u_i . X_i).
WalkSample run_walk(const TiltedSampler& sampler,
                    std::span<const std::vector<Vec2>> family,
                    const std::vector<std::vector<double>>& cumulants,
                    std::size_t c, std::uint64_t seed,
                    std::uint64_t sample_index) {
  const auto& tilts = family[c];
  WalkSample walk;
  walk.n = static_cast<int>(tilts.size());
  walk.points.reserve(tilts.size() + 1);
  walk.points.push_back(Vec2::Zero());
  std::vector<double> log_ratio(family.size(), 0.0);
  for (std::size_t i = 0; i < tilts.size(); ++i) {
    CounterRng rng(seed, sample_index, i);
    const Vec2 x = sampler.draw(tilts[i], rng);
    for (std::size_t k = 0; k < family.size(); ++k) {
      log_ratio[k] += cumulants[k][i] - family[k][i].dot(x);
    }
    walk.points.push_back(walk.points.back() + x);
  }
  if (family.size() == 1) {
    walk.log_weight = log_ratio[0];
  } else {
    // -log( mean_k exp(-log_ratio[k]) ), stabilized.
    const double lo = *std::min_element(log_ratio.begin(), log_ratio.end());
    double sum = 0.0;
    for (double r : log_ratio) sum += std::exp(lo - r);
    walk.log_weight = lo - std::log(sum / static_cast<double>(family.size()));
  }
  walk.hull_area = hull_area_points(walk.points);
  return walk;
}

std::vector<double> cumulants_at(const IncrementModel& model,
                                 std::span<const Vec2> tilts) {
  std::vector<double> out;
  out.reserve(tilts.size());
  for (const Vec2& u : tilts) out.push_back(cumulant(model, u));
  return out;
}

// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// Candidates within this relative energy gap of jA count as optimal.
constexpr double kMinimalSlack = 1e-9;

}  // namespace

double hull_area_points(std::span<const Vec2> points) {
  return convex_hull_area(points);
}

WalkSample simulate_walk(const IncrementModel& model, int n,
                         std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("step count must be >= 0");
  const std::vector<Vec2> tilts(n, Vec2::Zero());
  return simulate_tilted_walk(model, tilts, seed, 0);
}

WalkSample simulate_tilted_walk(const IncrementModel& model,
                                std::span<const Vec2> tilts, std::uint64_t seed,
                                std::uint64_t sample_index) {
  const TiltedSampler sampler(model);
  const std::vector<std::vector<Vec2>> family{{tilts.begin(), tilts.end()}};
  return run_walk(sampler, family, {cumulants_at(model, tilts)}, 0, seed,
                  sample_index);
}

std::vector<std::vector<Vec2>> optimal_tilt_family(const IncrementModel& model,
                                                   double a, int n, double eps) {
  if (n < 1) throw std::invalid_argument("step count must be >= 1");
  SolverOptions opts;
  opts.samples = 2 * n + 1;
  opts.eps = eps;
  const auto result = rate_of_area(model, a, opts);
  // The trajectory may belong to a smoothed copy; any tilt keeps the
  // estimator unbiased, so its duals are used for the original law.
  const IncrementModel solved =
      result.epsilon > model.epsilon()
          ? regularize(model, result.epsilon - model.epsilon())
          : model;

  std::vector<std::vector<Vec2>> family;
  for (const auto& c : result.candidates) {
    if (c.energy > result.jA + kMinimalSlack * std::max(1.0, result.jA)) break;
    std::vector<Vec2> tilts(n);
    for (int i = 0; i < n; ++i) {
      // Midpoint of step i on the 2n + 1 point grid.
      const Vec2& v = c.trajectory.derivs[2 * i + 1];
      tilts[i] = c.kind == CandidateKind::Graph
                     ? Vec2(0.0, rate_1d_gradient(model, v.y()))
                     : rate_gradient(solved, v);
    }
    const bool duplicate =
        std::any_of(family.begin(), family.end(), [&](const auto& other) {
          for (int i = 0; i < n; ++i) {
            if ((other[i] - tilts[i]).norm() > 1e-9 * (1.0 + tilts[i].norm())) {
              return false;
            }
          }
          return true;
        });
    if (!duplicate) family.push_back(std::move(tilts));
  }
  return family;
}

std::vector<Vec2> optimal_tilts(const IncrementModel& model, double a, int n,
                                double eps) {
  return optimal_tilt_family(model, a, n, eps).front();
}

LdpEstimate estimate_with_tilts(const IncrementModel& model, double a,
                                std::span<const Vec2> tilts,
                                const EstimateOptions& opts) {
  const std::vector<std::vector<Vec2>> family{{tilts.begin(), tilts.end()}};
  return estimate_with_tilt_family(model, a, family, opts);
}

LdpEstimate estimate_with_tilt_family(const IncrementModel& model, double a,
                                      std::span<const std::vector<Vec2>> family,
                                      const EstimateOptions& opts) {
  if (!(a > 0.0)) throw std::invalid_argument("target area must be > 0");
  if (family.empty() || family.front().empty()) {
    throw std::invalid_argument("step count must be >= 1");
  }
  for (const auto& tilts : family) {
    if (tilts.size() != family.front().size()) {
      throw std::invalid_argument("tilt sequences differ in length");
    }
  }
  if (opts.samples < opts.batches || opts.batches < 2) {
    throw std::invalid_argument("need samples >= batches >= 2");
  }
  const int n = static_cast<int>(family.front().size());
  const double threshold = a * static_cast<double>(n) * n;
  const TiltedSampler sampler(model);
  std::vector<std::vector<double>> cumulants;
  for (const auto& tilts : family) cumulants.push_back(cumulants_at(model, tilts));

  std::vector<double> values(opts.samples, 0.0);
  std::vector<char> hit(opts.samples, 0);
  auto work = [&](int begin, int end) {
    for (int j = begin; j < end; ++j) {
      // Components are interleaved so every batch sees each of them.
      const auto walk = run_walk(sampler, family, cumulants, j % family.size(),
                                 opts.seed, j);
      if (walk.hull_area >= threshold) {
        hit[j] = 1;
        values[j] = std::exp(walk.log_weight);
      }
    }
  };
  const int threads = std::clamp(opts.threads, 1, opts.samples);
  if (threads == 1) {
    work(0, opts.samples);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back(work,
                        static_cast<int>(static_cast<long long>(opts.samples) * w / threads),
                        static_cast<int>(static_cast<long long>(opts.samples) * (w + 1) / threads));
    }
  }

  LdpEstimate est;
  est.samples = opts.samples;
  for (char h : hit) est.hits += h;
  est.probability = compensated_sum(values) / opts.samples;

  std::vector<double> means(opts.batches);
  for (int b = 0; b < opts.batches; ++b) {
    const int begin = static_cast<int>(static_cast<long long>(opts.samples) * b / opts.batches);
    const int end = static_cast<int>(static_cast<long long>(opts.samples) * (b + 1) / opts.batches);
    means[b] = compensated_sum(std::span<const double>(values).subspan(begin, end - begin)) /
               (end - begin);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= opts.batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= opts.batches - 1;
  est.probability_stderr = std::sqrt(var / opts.batches);

  if (est.hits == 0 || !(est.probability > 0.0)) {
    est.zero_hits = true;
    est.rate_estimate = std::numeric_limits<double>::infinity();
    est.stderr = std::numeric_limits<double>::infinity();
  } else {
    est.rate_estimate = -std::log(est.probability) / n;
    est.stderr = est.probability_stderr / (n * est.probability);
  }
  return est;
}

LdpEstimate estimate_ldp(const IncrementModel& model, double a, int n,
                         const EstimateOptions& opts) {
  if (n < 1) throw std::invalid_argument("step count must be >= 1");
  if (opts.mode == SamplingMode::Naive) {
    const std::vector<Vec2> zero(n, Vec2::Zero());
    return estimate_with_tilts(model, a, zero, opts);
  }
  const auto family = optimal_tilt_family(model, a, n);
  return estimate_with_tilt_family(model, a, family, opts);
}

double enumerate_tail(const IncrementModel& model, int n, double threshold) {
  if (n < 0) throw std::invalid_argument("step count must be >= 0");
  if (model.epsilon() > 0.0) {
    throw std::invalid_argument("enumeration needs an unsmoothed atom model");
  }
  std::vector<Vec2> atoms;
  std::vector<double> probs;
  if (const auto* a2 = std::get_if<Atoms2D>(&model.kind())) {
    atoms = a2->points;
    probs = a2->probs;
  } else if (model.is_graph() &&
             std::holds_alternative<Atoms1D>(model.graph().y)) {
    const auto& a1 = std::get<Atoms1D>(model.graph().y);
    for (std::size_t i = 0; i < a1.points.size(); ++i) {
      atoms.emplace_back(model.graph().mu1, a1.points[i]);
    }
    probs = a1.probs;
  } else {
    throw std::invalid_argument("enumeration needs a finite atom model");
  }
  const double count = std::pow(static_cast<double>(atoms.size()), n);
  if (count > 1e8) throw std::invalid_argument("too many sequences to enumerate");

  std::vector<std::size_t> digits(n, 0);
  std::vector<Vec2> points(n + 1, Vec2::Zero());
  long double total = 0.0L;
  for (;;) {
    long double p = 1.0L;
    for (int i = 0; i < n; ++i) {
      points[i + 1] = points[i] + atoms[digits[i]];
      p *= probs[digits[i]];
    }
    if (hull_area_points(points) >= threshold) total += p;
    int k = n - 1;
    while (k >= 0 && ++digits[k] == atoms.size()) digits[k--] = 0;
    if (k < 0) break;
  }
  return static_cast<double>(total);
}

}  // namespace ldphull
