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

#include <Eigen/QR>
#include <Eigen/SVD>

#include <limits>
#include <vector>

// Zero-error summaries. The squared-distance cost expands as
//   sum w |p - x|^2 = sum w |p|^2 - 2 x . sum w p + |x|^2 sum w,
// so any reweighting u that matches the three moments (sum u, sum u p,
// sum u |p|^2) reproduces the cost at every query. Matching those moments is
// a linear condition on u over the lifted points h = (p, |p|^2, 1) in R^{d+2}.

namespace meancore {

/// h = (p, |p|^2, 1).
inline Eigen::VectorXd lift(const Eigen::Ref<const Eigen::RowVectorXd>& p) {
  const Eigen::Index d = p.size();
  Eigen::VectorXd h(d + 2);
  h.head(d) = p.transpose();
  h[d] = p.squaredNorm();
  h[d + 1] = 1.0;
  return h;
}

/// (d+2) x n matrix whose columns are the lifted points.
inline Eigen::MatrixXd lifted_matrix(const WeightedSet& set) {
  const auto n = static_cast<Eigen::Index>(set.size());
  const auto d = static_cast<Eigen::Index>(set.dim());
  Eigen::MatrixXd h(d + 2, n);
  for (Eigen::Index i = 0; i < n; ++i) h.col(i) = lift(set.point(static_cast<std::size_t>(i)));
  return h;
}

inline MomentSummary stats_coreset(const WeightedSet& set) { return moments(set); }

/// s2 - 2 x . s1 + s0 |x|^2. Clamped at zero only when the summary is of a
/// nonnegative-weight set, where the true value cannot be negative.
inline double eval_from_summary(const MomentSummary& s, const Point& x) {
  detail::require_dim(s.dim(), x.size(), "eval_from_summary");
  const double v = s.s2 - 2.0 * x.dot(s.s1) + s.s0 * x.squaredNorm();
  return (s.s0 >= 0.0 && v < 0.0) ? 0.0 : v;
}

/// Nonnegative moment-matching subset of at most d+3 points.
///
/// Repeatedly takes the d+3 lowest-index active points, finds a null vector v
/// of their lifted coordinates (sum v_i h_i = 0, hence sum v_i = 0 as well),
/// and moves u <- u - alpha v with alpha = min{u_i / v_i : v_i > 0}. That zeroes
/// at least one weight per round (the lowest index on ties) while preserving
/// every lifted moment and nonnegativity.
inline CoresetWeights caratheodory_coreset(const WeightedSet& set) {
  if (!set.all_nonnegative()) throw InvalidArgument("caratheodory_coreset: weights must be nonnegative");
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  const std::size_t keep = d + 3;
  if (n <= keep) return CoresetWeights::identity(set);

  std::vector<double> u(set.weights().data(), set.weights().data() + n);

  // Working window of d+3 positive-weight indices, kept sorted; indices not
  // yet visited are pulled in from `next` as window entries are zeroed.
  std::vector<std::size_t> window;
  window.reserve(keep);
  std::size_t next = 0;
  auto refill = [&] {
    while (window.size() < keep && next < n) {
      if (u[next] > 0.0) window.push_back(next);
      ++next;
    }
  };
  refill();

  Eigen::MatrixXd block(static_cast<Eigen::Index>(d + 2), static_cast<Eigen::Index>(keep));
  while (window.size() == keep && next < n) {
    for (std::size_t j = 0; j < keep; ++j) block.col(static_cast<Eigen::Index>(j)) = lift(set.point(window[j]));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(static_cast<Eigen::Index>(keep - 1));
    if (v.maxCoeff() <= 0.0) v = -v;

    double alpha = std::numeric_limits<double>::infinity();
    std::size_t hit = 0;
    for (std::size_t j = 0; j < keep; ++j) {
      const double vj = v[static_cast<Eigen::Index>(j)];
      if (vj <= 0.0) continue;
      const double ratio = u[window[j]] / vj;
      if (ratio < alpha) {  // strict: lowest index wins ties
        alpha = ratio;
        hit = j;
      }
    }

    for (std::size_t j = 0; j < keep; ++j) {
      double& uj = u[window[j]];
      uj -= alpha * v[static_cast<Eigen::Index>(j)];
      if (uj < 0.0) uj = 0.0;
    }
    u[window[hit]] = 0.0;

    std::erase_if(window, [&](std::size_t i) { return u[i] <= 0.0; });
    refill();
  }

  CoresetWeights out;
  out.source_size = n;
  for (std::size_t i = 0; i < n; ++i)
    if (u[i] > 0.0) out.entries.push_back({i, u[i]});
  return out;
}

/// Signed moment-matching subset of at most rank(H) <= d+2 points.
///
/// Selects a maximal set of linearly independent lifted columns by
/// column-pivoted elimination and solves for the weights on them that
/// reproduce the lifted moment vector H w.
inline CoresetWeights signed_subset_coreset(const WeightedSet& set) {
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  if (n <= d + 2) return CoresetWeights::identity(set);

  const Eigen::MatrixXd h = lifted_matrix(set);
  const Eigen::VectorXd target = h * set.weights();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  const Eigen::Index rank = qr.rank();
  std::vector<std::size_t> basis;
  basis.reserve(static_cast<std::size_t>(rank));
  for (Eigen::Index j = 0; j < rank; ++j)
    basis.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()[j]));
  std::sort(basis.begin(), basis.end());

  Eigen::MatrixXd sub(h.rows(), rank);
  for (Eigen::Index j = 0; j < rank; ++j) sub.col(j) = h.col(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(j)]));
  const Eigen::VectorXd coeffs = sub.colPivHouseholderQr().solve(target);

  CoresetWeights out;
  out.source_size = n;
  for (Eigen::Index j = 0; j < rank; ++j)
    if (coeffs[j] != 0.0) out.entries.push_back({basis[static_cast<std::size_t>(j)], coeffs[j]});
  return out;
}

}  // namespace meancore
