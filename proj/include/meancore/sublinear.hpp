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
#include "meancore/sampling.hpp"

#include <cmath>
#include <concepts>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

// Weak coresets that read only the sampled points. Both builders treat the
// input as an unweighted set: every index is equally likely and stored weights
// are ignored (checking them would cost a full pass). Runtime depends on eps,
// delta and d only, given O(1) random access to points.

namespace meancore {

/// Anything that can hand out point i in O(1).
template <typename S>
concept IndexedPointSource = requires(const S& s, std::size_t i) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.dim() } -> std::convertible_to<std::size_t>;
  s.point(i);
};

namespace detail {

template <IndexedPointSource Source>
CoresetWeights counts_to_distribution(const Source& source, const std::map<std::size_t, std::size_t>& counts,
                                      std::size_t draws) {
  CoresetWeights u;
  u.source_size = source.size();
  u.entries.reserve(counts.size());
  const double total = static_cast<double>(draws);
  for (const auto& [i, k] : counts) u.entries.push_back({i, static_cast<double>(k) / total});
  return u;
}

template <IndexedPointSource Source>
CoresetWeights uniform_full_set(const Source& source, std::size_t sample_size, const char* what) {
  CoresetWeights u;
  u.source_size = source.size();
  const double w = 1.0 / static_cast<double>(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) u.entries.push_back({i, w});
  u.warnings.push_back(std::string(what) + ": sample size " + std::to_string(sample_size) +
                       " >= n = " + std::to_string(source.size()) + "; returning the full set");
  return u;
}

inline void require_unit_interval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
}

}  // namespace detail

/// m = ceil(1 / (eps delta)).
inline std::size_t uniform_sample_size(double eps, double delta) {
  detail::require_unit_interval(eps, "eps");
  detail::require_unit_interval(delta, "delta");
  return detail::ceil_count(1.0 / (eps * delta));
}

/// Uniform i.i.d. sample of m = ceil(1/(eps delta)) points, returned as the
/// distribution multiplicity / m. By Chebyshev, |mean(S) - mu|^2 <= eps sigma^2
/// with probability at least 1 - delta.
template <IndexedPointSource Source>
CoresetWeights uniform_weak_coreset(const Source& source, double eps, double delta, RngSeed seed) {
  const std::size_t m = uniform_sample_size(eps, delta);
  const std::size_t n = source.size();
  if (m >= n) return detail::uniform_full_set(source, m, "uniform_weak_coreset");

  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t s = 0; s < m; ++s) ++counts[pick(rng)];
  return detail::counts_to_distribution(source, counts, m);
}

struct MedianOfMeansParams {
  std::size_t groups = 0;      // k = floor(3.5 log(1/delta)) + 1
  std::size_t group_size = 0;  // ceil(4 / eps)

  std::size_t total_draws() const { return groups * group_size; }
};

/// `log_base` selects the logarithm in k; the default is the natural log.
inline MedianOfMeansParams median_of_means_params(double eps, double delta,
                                                  double log_base = std::numbers::e) {
  detail::require_unit_interval(eps, "eps");
  if (!(delta > 0.0 && delta <= 0.9)) throw InvalidArgument("median_of_means: delta must lie in (0, 0.9]");
  if (!(log_base > 1.0)) throw InvalidArgument("median_of_means: log base must exceed 1");
  MedianOfMeansParams p;
  p.groups = detail::floor_count(3.5 * std::log(1.0 / delta) / std::log(log_base)) + 1;
  p.group_size = detail::ceil_count(4.0 / eps);
  return p;
}

struct GroupMeans {
  std::vector<Point> means;
  std::size_t group_size = 0;
};

/// argmin_j sum_i |m_i - m_j|, lowest index on ties. Exhaustive O(k^2 d).
inline std::size_t closest_to_median_index(const std::vector<Point>& means) {
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < means.size(); ++j) {
    double score = 0.0;
    for (const auto& m : means) score += (m - means[j]).norm();
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

struct MedianOfMeansResult {
  CoresetWeights weights;
  GroupMeans groups;
  std::size_t selected = 0;
  std::size_t total_draws = 0;
  MedianOfMeansParams params;
};

/// Draws k groups of ceil(4/eps) uniform i.i.d. indices (one stream split
/// sequentially), averages each group, and keeps the group whose mean has the
/// smallest summed distance to the other means. The kept group, weighted
/// multiplicity / group size, satisfies |mean - mu|^2 <= 33 eps sigma^2 with
/// probability at least 1 - 3 delta.
template <IndexedPointSource Source>
MedianOfMeansResult median_of_means_coreset(const Source& source, double eps, double delta, RngSeed seed,
                                            double log_base = std::numbers::e) {
  MedianOfMeansResult out;
  out.params = median_of_means_params(eps, delta, log_base);
  const std::size_t n = source.size();
  const std::size_t total = out.params.total_draws();
  if (total >= n) {
    out.weights = detail::uniform_full_set(source, total, "median_of_means_coreset");
    out.total_draws = n;
    return out;
  }

  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> draws(total);
  for (auto& i : draws) i = pick(rng);
  out.total_draws = total;

  const std::size_t g = out.params.group_size;
  const auto d = static_cast<Eigen::Index>(source.dim());
  out.groups.group_size = g;
  out.groups.means.reserve(out.params.groups);
  for (std::size_t j = 0; j < out.params.groups; ++j) {
    Point sum = Point::Zero(d);
    for (std::size_t s = j * g; s < (j + 1) * g; ++s) sum += source.point(draws[s]).transpose();
    out.groups.means.push_back(sum / static_cast<double>(g));
  }

  out.selected = closest_to_median_index(out.groups.means);
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t s = out.selected * g; s < (out.selected + 1) * g; ++s) ++counts[draws[s]];
  out.weights = detail::counts_to_distribution(source, counts, g);
  return out;
}

}  // namespace meancore
