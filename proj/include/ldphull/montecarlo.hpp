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
 * @file  montecarlo.hpp
 * @brief Random walks, convex-hull areas and estimates of
 *        -(1/n) log P(A_n >= a n^2) by naive and exponentially tilted
 *        sampling.
 *
 * Randomness is counter based: the stream of step i of sample j is a pure
 * function of (seed, j, i), so results do not depend on the thread count.
 */

#pragma once

#include "ldphull/increments.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ldphull {

struct WalkSample {
  int n = 0;
  std::vector<Vec2> points;  // S_0 = 0, S_1, ..., S_n
  double hull_area = 0.0;
  double log_weight = 0.0;   // sum_i (K(u_i) - u_i . X_i); 0 when untilted
};

/// Untilted walk of n >= 0 steps; sample index 0 of the given seed.
WalkSample simulate_walk(const IncrementModel& model, int n, std::uint64_t seed);

/// Walk whose step i is drawn from the law tilted by tilts[i], i.e.
/// exp(u . x - K(u)) P(dx). tilts.size() is the step count.
WalkSample simulate_tilted_walk(const IncrementModel& model,
                                std::span<const Vec2> tilts, std::uint64_t seed,
                                std::uint64_t sample_index);

/// Area of the convex hull of the points (monotone chain and shoelace).
double hull_area_points(std::span<const Vec2> points);

enum class SamplingMode { Naive, Tilted };

struct EstimateOptions {
  SamplingMode mode = SamplingMode::Tilted;
  int samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;   // worker threads; results do not depend on it
  int batches = 10;  // batch means for the standard error
};

struct LdpEstimate {
  double probability = 0.0;  // estimate of P(A_n >= a n^2)
  double probability_stderr = 0.0;
  double rate_estimate = 0.0;  // -(1/n) log probability; +inf on zero hits
  double stderr = 0.0;         // of rate_estimate, by the delta method
  long long hits = 0;
  int samples = 0;
  bool zero_hits = false;      // the event was never observed
};

/// Per-step tilts u_i = grad I(h'((i - 1/2) / n)) along the solver's optimal
/// trajectory for area a (graph models: u_i = (0, I_2'(h_2'))).
std::vector<Vec2> optimal_tilts(const IncrementModel& model, double a, int n,
                                double eps = 0.0);

/// Tilt sequences as above for every energy-minimal candidate (both
/// orientations, duplicates removed).
std::vector<std::vector<Vec2>> optimal_tilt_family(const IncrementModel& model,
                                                   double a, int n,
                                                   double eps = 0.0);

/// Estimator of P(A_n >= a n^2) sampling walk j from the tilt sequence
/// family[j % size] and weighting by the likelihood ratio against the equal
/// mixture of the family. Results do not depend on opts.threads.
LdpEstimate estimate_with_tilt_family(const IncrementModel& model, double a,
                                      std::span<const std::vector<Vec2>> family,
                                      const EstimateOptions& opts);

/// Single-sequence estimator; all-zero tilts reproduce naive sampling draw
/// for draw.
LdpEstimate estimate_with_tilts(const IncrementModel& model, double a,
                                std::span<const Vec2> tilts,
                                const EstimateOptions& opts);

/// Naive mode samples the untilted law; tilted mode mixes optimal_tilt_family.
LdpEstimate estimate_ldp(const IncrementModel& model, double a, int n,
                         const EstimateOptions& opts);

/// Exact P(A_n >= threshold) by enumerating all atom sequences; for finite
/// atom models (Atoms2D, or Graph1D with Atoms1D) without smoothing.
double enumerate_tail(const IncrementModel& model, int n, double threshold);

}  // namespace ldphull
