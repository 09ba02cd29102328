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
#include "meancore/normalize.hpp"
#include "meancore/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

// Deterministic coresets by Frank-Wolfe over the probability simplex.
//
// For points inside the unit ball with target distribution w, maximizing the
// concave f(x) = -|sum (w_i - x_i) p_i|^2 over the simplex from a vertex
// reaches |residual|^2 <= 8 / (k + 3) after k steps, because the curvature
// constant of f is at most diam^2 <= 2. A budget of ceil(8 / eps) vertices
// therefore certifies |residual|^2 <= eps.

namespace meancore {

struct FrankWolfeResult {
  CoresetWeights weights;
  // |r|^2 after initialization and after each step.
  std::vector<double> residual_history;
  // Vertex selections performed, counting the initial vertex.
  std::size_t iterations = 0;
  Point residual;

  double residual_sq() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Vertex budget ceil(8 / eps).
inline std::size_t fw_iteration_budget(double eps) { return detail::ceil_count(8.0 / eps); }

/// Sparse distribution u~ with |sum (w_i - u~_i) p_i|^2 <= eps and at most
/// ceil(8/eps) nonzeros. Points must lie in the unit ball (up to 1e-9; points
/// slightly outside are rescaled with a warning). Deterministic: the initial
/// vertex is the one closest to sum w_i p_i and every argmax breaks ties
/// toward the lowest index.
inline FrankWolfeResult fw_unit_ball(const PointMatrix& points, const Eigen::VectorXd& w, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("fw_unit_ball: eps must lie in (0, 1)");
  const Eigen::Index n = points.rows();
  if (n == 0 || w.size() != n) throw InvalidArgument("fw_unit_ball: points and weights differ in length");
  if ((w.array() < 0.0).any()) throw InvalidArgument("fw_unit_ball: weights must be nonnegative");
  if (std::abs(w.sum() - 1.0) > 1e-8) throw InvalidArgument("fw_unit_ball: weights must sum to 1");

  FrankWolfeResult out;
  const double max_norm = points.rowwise().norm().maxCoeff();
  PointMatrix scaled;
  const PointMatrix* p = &points;
  if (max_norm > 1.0 + 1e-9) {
    scaled = points / max_norm;
    p = &scaled;
    out.weights.warnings.push_back("fw_unit_ball: points exceed the unit ball (max norm " +
                                   std::to_string(max_norm) + "); rescaled");
  }
  const PointMatrix& pts = *p;

  const Point target = pts.transpose() * w;
  Eigen::Index start = 0;
  (pts.rowwise() - target.transpose()).rowwise().squaredNorm().minCoeff(&start);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> support{start};
  x[start] = 1.0;
  Point m = pts.row(start).transpose();
  Point r = target - m;
  out.residual_history.push_back(r.squaredNorm());
  out.iterations = 1;

  const std::size_t budget = fw_iteration_budget(eps);
  Eigen::VectorXd scores(n);
  while (out.iterations < budget) {
    scores.noalias() = pts * r;
    Eigen::Index best = 0;
    scores.maxCoeff(&best);  // first maximal index

    const Point dir = pts.row(best).transpose() - m;
    const double dir_sq = dir.squaredNorm();
    const double gain = r.dot(dir);
    if (dir_sq == 0.0 || gain <= 0.0) break;  // no vertex improves the residual
    const double alpha = std::clamp(gain / dir_sq, 0.0, 1.0);
    const Point next = m + alpha * dir;
    const double next_sq = (target - next).squaredNorm();
    if (!(next_sq < out.residual_history.back())) break;  // rounding floor reached

    const bool fresh = x[best] == 0.0;
    for (Eigen::Index i : support) x[i] *= (1.0 - alpha);
    if (fresh) support.push_back(best);
    x[best] += alpha;
    m = next;
    r = target - m;
    ++out.iterations;
    out.residual_history.push_back(next_sq);
    if (alpha == 1.0) {
      // Collapsed onto a single vertex.
      for (Eigen::Index i : support)
        if (i != best) x[i] = 0.0;
      support.assign(1, best);
    }
  }

  std::sort(support.begin(), support.end());
  out.weights.source_size = static_cast<std::size_t>(n);
  for (Eigen::Index i : support)
    if (x[i] > 0.0) out.weights.entries.push_back({static_cast<std::size_t>(i), x[i]});
  out.residual = r;
  return out;
}

/// eps' handed to the unit-ball solver: (eps/4)^2 gives a strong eps-coreset,
/// eps/576 a weak eps-coreset.
inline double fw_eps_prime(double eps, CoresetMode mode) {
  return mode == CoresetMode::kStrong ? (eps / 4.0) * (eps / 4.0) : eps / 576.0;
}

struct FrankWolfeCoreset {
  CoresetWeights weights;
  FrankWolfeResult inner;
  double eps_prime = 0.0;
};

/// Lifts a normalized set into the unit ball via p'_i = (p_i, 1) / |(p_i, 1)|^2
/// with weights w'_i = w_i |(p_i, 1)|^2 / 2, runs fw_unit_ball and maps back
/// with u_i = 2 u'_i / |(p_i, 1)|^2.
inline FrankWolfeCoreset fw_coreset_detailed(const WeightedSet& set, double eps, CoresetMode mode) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("fw_coreset: eps must lie in (0, 1)");
  detail::require_normalized(set, "fw_coreset");
  if (!set.all_positive()) throw InvalidArgument("fw_coreset: weights must be positive");

  const auto n = static_cast<Eigen::Index>(set.size());
  const auto d = static_cast<Eigen::Index>(set.dim());
  const Eigen::VectorXd lifted_sq = 1.0 + set.points().rowwise().squaredNorm().array();

  PointMatrix lifted(n, d + 1);
  lifted.leftCols(d) = set.points();
  lifted.col(d).setOnes();
  lifted.array().colwise() /= lifted_sq.array();
  const Eigen::VectorXd lifted_w = (set.weights().array() * lifted_sq.array() / 2.0).matrix();

  FrankWolfeCoreset out;
  out.eps_prime = fw_eps_prime(eps, mode);
  out.inner = fw_unit_ball(lifted, lifted_w, out.eps_prime);
  out.weights = out.inner.weights;
  for (auto& e : out.weights.entries) e.weight = 2.0 * e.weight / lifted_sq[static_cast<Eigen::Index>(e.index)];
  return out;
}

inline CoresetWeights fw_coreset(const WeightedSet& set, double eps, CoresetMode mode) {
  return fw_coreset_detailed(set, eps, mode).weights;
}

}  // namespace meancore
