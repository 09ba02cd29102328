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

#include "meancore/accurate.hpp"
#include "meancore/core.hpp"
#include "meancore/normalize.hpp"
#include "meancore/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>

// Quality oracles for coresets of the squared-distance cost.
//
// On a normalized set the full cost is 1 + |x|^2 and the coreset discrepancy
// is A + C|x|^2 - 2 b.x with
//   A = sum (w_i - u_i)|p_i|^2,  C = sum (w_i - u_i),  b = sum (w_i - u_i) p_i,
// so the worst relative error over all queries is a 1-D problem along b.

namespace meancore {

/// (a, b, c) = (|sum u p|, |1 - sum u|, |1 - sum u |p|^2|) on a normalized set.
/// max(a, b, c) <= eps certifies a strong 2 eps-coreset.
struct MomentDiscrepancy {
  double mean_drift = 0.0;
  double mass_drift = 0.0;
  double variance_drift = 0.0;

  double max() const { return std::max({mean_drift, mass_drift, variance_drift}); }
};

inline MomentDiscrepancy moment_check(const WeightedSet& normalized, const CoresetWeights& u) {
  detail::require_normalized(normalized, "moment_check");
  u.check_bounds(normalized.size());
  const MomentSummary m = moments(normalized, u);
  return {m.s1.norm(), std::abs(1.0 - m.s0), std::abs(1.0 - m.s2)};
}

/// sup over x of |A + C|x|^2 - 2 b.x| / (1 + |x|^2) given A, C and |b|.
///
/// Writing x = t b/|b| + y with y orthogonal to b, the ratio is monotone in
/// |y|^2 toward C, so the sup is max(|C|, sup_t |g(t)|) with
/// g(t) = (A + C t^2 - 2|b| t) / (1 + t^2). The critical points of g solve
/// |b| t^2 + (C - A) t - |b| = 0.
inline double worst_case_from_deltas(double a, double c, double b_norm) {
  double best = std::max(std::abs(a), std::abs(c));
  if (b_norm == 0.0) return best;
  auto g = [&](double t) { return std::abs((a + c * t * t - 2.0 * b_norm * t) / (1.0 + t * t)); };
  const double lin = c - a;
  const double disc = std::sqrt(lin * lin + 4.0 * b_norm * b_norm);
  // Stable roots of b t^2 + lin t - b; their product is -1.
  const double q = -0.5 * (lin + std::copysign(disc, lin));
  const double t1 = q / b_norm;
  const double t2 = -b_norm / q;
  return std::max({best, g(t1), g(t2)});
}

/// Exact sup over x in R^d of |cost_w(x) - cost_u(x)| / cost_w(x) on a
/// normalized set.
inline double worst_case_strong_error(const WeightedSet& normalized, const CoresetWeights& u) {
  detail::require_normalized(normalized, "worst_case_strong_error");
  u.check_bounds(normalized.size());
  const MomentSummary full = moments(normalized);
  const MomentSummary part = moments(normalized, u);
  return worst_case_from_deltas(full.s2 - part.s2, full.s0 - part.s0, (full.s1 - part.s1).norm());
}

/// Same, for a moment summary expressed in the normalized frame.
inline double worst_case_strong_error(const WeightedSet& normalized, const MomentSummary& summary) {
  detail::require_normalized(normalized, "worst_case_strong_error");
  const MomentSummary full = moments(normalized);
  return worst_case_from_deltas(full.s2 - summary.s2, full.s0 - summary.s0, (full.s1 - summary.s1).norm());
}

/// Raw-frame convenience: normalizes `source`, maps u into that frame and runs
/// the exact oracle. Degenerate (all-identical) inputs are compared directly:
/// the cost is then zero only at the shared point, and any coreset with the
/// same total mass is exact.
inline double worst_case_strong_error_raw(const WeightedSet& source, const CoresetWeights& u) {
  try {
    const NormalizedSet ns = normalize(source);
    return worst_case_strong_error(ns.set, normalize_weights(u, ns.transform));
  } catch (const DegenerateInput&) {
    const double mass = source.weights().sum();
    return std::abs(mass - u.total()) / mass;
  }
}

inline double worst_case_strong_error_raw(const WeightedSet& source, const MomentSummary& summary) {
  try {
    const NormalizedSet ns = normalize(source);
    return worst_case_strong_error(ns.set, normalize_summary(summary, ns.transform));
  } catch (const DegenerateInput&) {
    const double mass = source.weights().sum();
    return std::abs(mass - summary.s0) / mass;
  }
}

/// Exact worst-case error from two raw-frame moment summaries, the full set's
/// and the coreset's. Needs no access to the points themselves.
inline double worst_case_strong_error(const MomentSummary& full, const MomentSummary& part) {
  if (!(full.s0 > 0.0)) throw InvalidArgument("worst_case_strong_error: full set needs positive mass");
  MomentSummary diff = full;
  diff.s0 -= part.s0;
  diff.s1 -= part.s1;
  diff.s2 -= part.s2;
  NormalizationTransform t;
  t.mu = full.s1 / full.s0;
  t.total_mass = full.s0;
  const double var = (full.s2 - 2.0 * t.mu.dot(full.s1) + full.s0 * t.mu.squaredNorm()) / full.s0;
  if (!(var > 0.0)) return std::abs(diff.s0) / full.s0;
  t.sigma = std::sqrt(var);
  const MomentSummary n = normalize_summary(diff, t);
  return worst_case_from_deltas(n.s2, n.s0, n.s1.norm());
}

namespace detail {

template <typename CoresetCost>
double empirical_error_impl(const WeightedSet& set, std::size_t queries, RngSeed seed, CoresetCost coreset_cost) {
  if (!set.all_positive()) throw InvalidArgument("empirical_strong_error: weights must be positive");
  const MomentSummary m = moments(set);
  const Point mu = m.s1 / m.s0;
  double sigma = std::sqrt(std::max(0.0, m.s2 / m.s0 - mu.squaredNorm()));
  if (!(sigma > 0.0)) sigma = 1.0;
  const auto d = static_cast<Eigen::Index>(set.dim());
  const double per_coord = sigma / std::sqrt(static_cast<double>(d));
  constexpr std::array<double, 3> kScales{0.1, 1.0, 10.0};

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  Point x(d);
  for (std::size_t q = 0; q < queries; ++q) {
    const double scale = kScales[q % kScales.size()] * per_coord;
    for (Eigen::Index j = 0; j < d; ++j) x[j] = mu[j] + scale * gauss(rng);
    const double full = eval_cost(set, x);
    if (full == 0.0) continue;
    worst = std::max(worst, std::abs(coreset_cost(x) - full) / full);
  }
  return worst;
}

}  // namespace detail

/// Max relative cost discrepancy over `queries` Gaussian queries centred on
/// the weighted mean at scales 0.1, 1 and 10 sigma. A lower bound on the true
/// sup; works on raw sets.
inline double empirical_strong_error(const WeightedSet& set, const CoresetWeights& u, std::size_t queries,
                                     RngSeed seed) {
  u.check_bounds(set.size());
  return detail::empirical_error_impl(set, queries, seed,
                                      [&](const Point& x) { return eval_cost(set, u, x); });
}

inline double empirical_strong_error(const WeightedSet& set, const MomentSummary& summary, std::size_t queries,
                                     RngSeed seed) {
  return detail::empirical_error_impl(set, queries, seed,
                                      [&](const Point& x) { return eval_from_summary(summary, x); });
}

struct WeakError {
  double snorm = 0.0;  // |s_bar|^2 for the coreset mean s_bar
  double ratio = 0.0;  // cost_w(s_bar) / min_x cost_w(x) - 1
};

/// On a normalized set ratio equals |s_bar|^2, so u is a weak eps-coreset iff
/// |s_bar|^2 <= eps. Both sides are computed independently.
inline WeakError weak_error(const WeightedSet& normalized, const CoresetWeights& u) {
  detail::require_normalized(normalized, "weak_error");
  u.check_bounds(normalized.size());
  double l1 = 0.0;
  Point s = Point::Zero(static_cast<Eigen::Index>(normalized.dim()));
  for (const auto& e : u.entries) {
    l1 += std::abs(e.weight);
    s += e.weight * normalized.point(e.index).transpose();
  }
  if (l1 == 0.0) throw InvalidArgument("weak_error: coreset has zero total mass");
  s /= l1;
  const double best = eval_cost(normalized, weighted_mean(normalized));
  return {s.squaredNorm(), eval_cost(normalized, s) / best - 1.0};
}

/// Weak error of a source-frame coreset, via the normalized view. For
/// all-identical inputs every coreset mean is exact.
inline WeakError weak_error_raw(const WeightedSet& source, const CoresetWeights& u) {
  try {
    const NormalizedSet ns = normalize(source);
    return weak_error(ns.set, normalize_weights(u, ns.transform));
  } catch (const DegenerateInput&) {
    return {0.0, 0.0};
  }
}

/// A strong sqrt(eps)-coreset is a weak 36 eps-coreset for eps < 1/36.
/// Returns nullopt when the premise does not hold (eps out of range or the
/// exact strong error exceeds sqrt(eps)), otherwise whether the weak bound
/// held.
inline std::optional<bool> strong_to_weak_check(const WeightedSet& normalized, const CoresetWeights& u, double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 36.0)) return std::nullopt;
  if (worst_case_strong_error(normalized, u) > std::sqrt(eps)) return std::nullopt;
  return weak_error(normalized, u).ratio <= 36.0 * eps + 1e-12;
}

/// Fields are filled only for the checks that were run.
struct ErrorReport {
  std::optional<double> worst_case;
  std::optional<double> empirical;
  std::optional<WeakError> weak;
  std::optional<MomentDiscrepancy> moments;
  // 2 max(a, b, c): the strong error certified by the moment discrepancies.
  std::optional<double> certified_eps;
};

}  // namespace meancore
