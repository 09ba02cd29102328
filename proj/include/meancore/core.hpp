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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meancore {

using Point = Eigen::VectorXd;
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the input is well-formed but degenerate for the requested
/// operation (zero total weight, all points identical). Carries the mean of
/// the input when one exists so callers can emit the exact 1-point summary.
class DegenerateInput : public std::domain_error {
 public:
  explicit DegenerateInput(const std::string& what, Point mean = {})
      : std::domain_error(what), mean_(std::move(mean)) {}

  const Point& mean() const noexcept { return mean_; }

 private:
  Point mean_;
};

/// Raised on malformed or inconsistent data (bad files, out-of-range indices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Summation { kPlain, kKahan };

/// A set of n points in R^d (rows of `points`) with a parallel weight vector.
/// Weights are dense on input; coresets refer back to rows by index.
class WeightedSet {
 public:
  WeightedSet() = default;

  WeightedSet(PointMatrix points, Eigen::VectorXd weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.rows() == 0) throw InvalidArgument("weighted set must be nonempty");
    if (points_.cols() == 0) throw InvalidArgument("points must have dimension d >= 1");
    if (points_.rows() != weights_.size())
      throw InvalidArgument("points and weights differ in length");
    if (!points_.allFinite()) throw InvalidArgument("point coordinates must be finite");
    if (!weights_.allFinite()) throw InvalidArgument("weights must be finite");
  }

  /// Unit weights on every point.
  static WeightedSet uniform(PointMatrix points, double weight = 1.0) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(points.rows(), weight);
    return WeightedSet(std::move(points), std::move(w));
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }

  const PointMatrix& points() const noexcept { return points_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  auto point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }
  double weight(std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }

  bool all_positive() const { return (weights_.array() > 0.0).all(); }
  bool all_nonnegative() const { return (weights_.array() >= 0.0).all(); }

 private:
  PointMatrix points_;
  Eigen::VectorXd weights_;
};

/// Sparse reweighting u of a source set of size n. Indices are 0-based and
/// kept sorted; only nonzero weights are stored, so nnz() is ||u||_0.
struct CoresetWeights {
  struct Entry {
    std::size_t index;
    double weight;
    bool operator==(const Entry&) const = default;
  };

  std::size_t source_size = 0;
  std::vector<Entry> entries;
  // Non-fatal notes from the builder, e.g. a full-set fallback.
  std::vector<std::string> warnings;

  std::size_t nnz() const noexcept { return entries.size(); }

  double total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
  }

  Eigen::VectorXd dense() const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(source_size));
    for (const auto& e : entries) u[static_cast<Eigen::Index>(e.index)] = e.weight;
    return u;
  }

  bool has_warning(std::string_view needle) const {
    return std::any_of(warnings.begin(), warnings.end(),
                       [&](const std::string& w) { return w.find(needle) != std::string::npos; });
  }

  /// Builds from a dense vector, dropping exact zeros.
  static CoresetWeights from_dense(const Eigen::VectorXd& u) {
    CoresetWeights c;
    c.source_size = static_cast<std::size_t>(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (u[i] != 0.0) c.entries.push_back({static_cast<std::size_t>(i), u[i]});
    return c;
  }

  /// Builds from per-index sample multiplicities scaled by `scale(i, count)`.
  template <typename Scale>
  static CoresetWeights from_counts(const std::vector<std::size_t>& counts, Scale scale) {
    CoresetWeights c;
    c.source_size = counts.size();
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] != 0) c.entries.push_back({i, scale(i, counts[i])});
    return c;
  }

  /// The whole input as its own coreset (u = w).
  static CoresetWeights identity(const WeightedSet& set) { return from_dense(set.weights()); }

  void check_bounds(std::size_t n) const {
    if (source_size != n)
      throw DataError("coreset source size " + std::to_string(source_size) +
                      " does not match input size " + std::to_string(n));
    for (const auto& e : entries)
      if (e.index >= n)
        throw DataError("coreset index " + std::to_string(e.index + 1) + " out of range [1, " +
                        std::to_string(n) + "]");
  }
};

/// Sufficient statistic (sum w, sum w p, sum w |p|^2) for squared-distance cost.
struct MomentSummary {
  double s0 = 0.0;
  Point s1;
  double s2 = 0.0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(s1.size()); }

  MomentSummary& operator+=(const MomentSummary& o) {
    if (s1.size() == 0) s1 = Point::Zero(o.s1.size());
    s0 += o.s0;
    s1 += o.s1;
    s2 += o.s2;
    return *this;
  }
};

namespace detail {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

inline void require_dim(std::size_t expected, Eigen::Index got, const char* what) {
  if (static_cast<std::size_t>(got) != expected)
    throw InvalidArgument(std::string(what) + ": dimension mismatch (expected " +
                          std::to_string(expected) + ", got " + std::to_string(got) + ")");
}

}  // namespace detail

/// sum_i w_i |p_i - x|^2 by direct summation.
inline double eval_cost(const WeightedSet& set, const Point& x) {
  detail::require_dim(set.dim(), x.size(), "eval_cost");
  double cost = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    cost += set.weight(i) * (set.point(i).transpose() - x).squaredNorm();
  return cost;
}

/// Cost of a sparse reweighting of `set` at x.
inline double eval_cost(const WeightedSet& set, const CoresetWeights& u, const Point& x) {
  detail::require_dim(set.dim(), x.size(), "eval_cost");
  double cost = 0.0;
  for (const auto& e : u.entries) cost += e.weight * (set.point(e.index).transpose() - x).squaredNorm();
  return cost;
}

inline MomentSummary moments(const WeightedSet& set, Summation mode = Summation::kPlain) {
  if (set.size() == 0) throw InvalidArgument("moments: empty set");
  const auto d = static_cast<Eigen::Index>(set.dim());
  MomentSummary m;
  m.s1 = Point::Zero(d);
  if (mode == Summation::kPlain) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double w = set.weight(i);
      auto p = set.point(i);
      m.s0 += w;
      m.s1 += w * p.transpose();
      m.s2 += w * p.squaredNorm();
    }
    return m;
  }
  detail::KahanSum s0, s2;
  std::vector<detail::KahanSum> s1(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double w = set.weight(i);
    auto p = set.point(i);
    s0.add(w);
    s2.add(w * p.squaredNorm());
    for (Eigen::Index j = 0; j < d; ++j) s1[static_cast<std::size_t>(j)].add(w * p[j]);
  }
  m.s0 = s0.sum;
  m.s2 = s2.sum;
  for (Eigen::Index j = 0; j < d; ++j) m.s1[j] = s1[static_cast<std::size_t>(j)].sum;
  return m;
}

/// Moments of the sparse reweighting (P, u).
inline MomentSummary moments(const WeightedSet& set, const CoresetWeights& u) {
  MomentSummary m;
  m.s1 = Point::Zero(static_cast<Eigen::Index>(set.dim()));
  for (const auto& e : u.entries) {
    auto p = set.point(e.index);
    m.s0 += e.weight;
    m.s1 += e.weight * p.transpose();
    m.s2 += e.weight * p.squaredNorm();
  }
  return m;
}

inline Point weighted_mean(const WeightedSet& set) {
  const MomentSummary m = moments(set);
  if (m.s0 == 0.0) throw DegenerateInput("weighted_mean: total weight is zero");
  return m.s1 / m.s0;
}

}  // namespace meancore
