/*
 * Copyright 2026 The meancore Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "meancore/core.hpp"

#include <cmath>
#include <utility>

// A weighted set (P, w) is normalized when w sums to one, the weighted mean is
// the origin and the weighted mean squared norm is one. Any positive-weight
// set (Q, m) maps onto one by p = (q - mu) / sigma, w = m / |m|_1, and a
// coreset u for the normalized set maps back as |m|_1 * u with the same
// strong/weak guarantee. Costs relate by
//   cost((Q, m), x) = sigma^2 |m|_1 cost((P, w), (x - mu) / sigma).

namespace meancore {

struct NormalizationTransform {
  Point mu;
  double sigma = 1.0;
  double total_mass = 1.0;

  Point to_normalized(const Point& x) const { return (x - mu) / sigma; }
  Point from_normalized(const Point& y) const { return mu + sigma * y; }
};

struct NormalizedSet {
  WeightedSet set;
  NormalizationTransform transform;
};

inline NormalizedSet normalize(const WeightedSet& source) {
  const std::size_t n = source.size();
  if (n < 2) throw InvalidArgument("normalize: need at least two points");
  if (!source.all_positive()) throw InvalidArgument("normalize: weights must be strictly positive");

  const double mass = source.weights().sum();
  const Eigen::VectorXd w = source.weights() / mass;
  const Point mu = source.points().transpose() * w;

  bool identical = true;
  for (std::size_t i = 1; i < n && identical; ++i) identical = source.point(i) == source.point(0);
  if (identical)
    throw DegenerateInput("normalize: all points identical (sigma = 0)", source.point(0).transpose());

  PointMatrix centered = source.points().rowwise() - mu.transpose();
  const double var = w.dot(centered.rowwise().squaredNorm());
  const double sigma = std::sqrt(var);
  if (!(sigma > 0.0)) throw DegenerateInput("normalize: zero weighted variance", mu);
  centered /= sigma;

  return {WeightedSet(std::move(centered), w), NormalizationTransform{mu, sigma, mass}};
}

/// Maps coreset weights computed on the normalized view back to the source
/// set: u' = |m|_1 * u.
inline CoresetWeights denormalize_weights(const CoresetWeights& u, const NormalizationTransform& t) {
  CoresetWeights out = u;
  for (auto& e : out.entries) e.weight *= t.total_mass;
  return out;
}

/// Inverse of denormalize_weights: expresses source-frame coreset weights in
/// the normalized frame.
inline CoresetWeights normalize_weights(const CoresetWeights& u, const NormalizationTransform& t) {
  CoresetWeights out = u;
  for (auto& e : out.entries) e.weight /= t.total_mass;
  return out;
}

/// Moment summary of the source expressed in the normalized frame.
inline MomentSummary normalize_summary(const MomentSummary& s, const NormalizationTransform& t) {
  MomentSummary out;
  out.s0 = s.s0 / t.total_mass;
  out.s1 = (s.s1 - s.s0 * t.mu) / (t.sigma * t.total_mass);
  out.s2 = (s.s2 - 2.0 * t.mu.dot(s.s1) + s.s0 * t.mu.squaredNorm()) /
           (t.sigma * t.sigma * t.total_mass);
  return out;
}

struct NormalizationResidual {
  double mass;      // |sum w - 1|
  double mean;      // |sum w p|
  double variance;  // |sum w |p|^2 - 1|

  double max() const { return std::max({mass, mean, variance}); }
};

inline NormalizationResidual normalization_residual(const WeightedSet& set) {
  const MomentSummary m = moments(set);
  return {std::abs(m.s0 - 1.0), m.s1.norm(), std::abs(m.s2 - 1.0)};
}

inline bool is_normalized(const WeightedSet& set, double tol = 1e-8) {
  return normalization_residual(set).max() <= tol;
}

}  // namespace meancore
