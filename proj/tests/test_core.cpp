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

#include "meancore/core.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace meancore {
namespace {

WeightedSet two_point() {
  PointMatrix p(2, 2);
  p << -1, 0, 1, 0;
  return WeightedSet(p, Eigen::Vector2d(0.5, 0.5));
}

TEST(EvalCost, TwoPointSet) {
  const WeightedSet s = two_point();
  EXPECT_DOUBLE_EQ(eval_cost(s, Eigen::Vector2d(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(eval_cost(s, Eigen::Vector2d(0, 1)), 2.0);
}

TEST(EvalCost, SinglePointAtItself) {
  PointMatrix p(1, 3);
  p << 1.5, -2, 7;
  const WeightedSet s(p, Eigen::VectorXd::Ones(1));
  EXPECT_EQ(eval_cost(s, Eigen::Vector3d(1.5, -2, 7)), 0.0);
}

TEST(EvalCost, DimensionMismatchThrows) {
  EXPECT_THROW(eval_cost(two_point(), Eigen::Vector3d::Zero()), InvalidArgument);
}

TEST(EvalCost, MatchesDirectSum) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const WeightedSet s = oracle::random_set(rng, 40, 3);
    const Eigen::VectorXd x = oracle::random_query(rng, 3, 4.0);
    EXPECT_NEAR(eval_cost(s, x), oracle::cost(s, x), 1e-10 * oracle::cost(s, x));
  }
}

TEST(Moments, TwoPointAndSinglePoint) {
  const MomentSummary m = moments(two_point());
  EXPECT_DOUBLE_EQ(m.s0, 1.0);
  EXPECT_DOUBLE_EQ(m.s1.norm(), 0.0);
  EXPECT_DOUBLE_EQ(m.s2, 1.0);

  PointMatrix p(1, 1);
  p << 2;
  const MomentSummary q = moments(WeightedSet(p, Eigen::VectorXd::Constant(1, 3.0)));
  EXPECT_DOUBLE_EQ(q.s0, 3.0);
  EXPECT_DOUBLE_EQ(q.s1[0], 6.0);
  EXPECT_DOUBLE_EQ(q.s2, 12.0);
}

TEST(Moments, IdentityReproducesCost) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const WeightedSet s = oracle::random_set(rng, 50, 4);
    const Eigen::VectorXd x = oracle::random_query(rng, 4, 3.0);
    const MomentSummary m = moments(s);
    const double via = m.s2 - 2.0 * x.dot(m.s1) + m.s0 * x.squaredNorm();
    const double direct = oracle::cost(s, x);
    EXPECT_LE(std::abs(via - direct), std::max(1e-9 * direct, 1e-12));
  }
}

TEST(Moments, KahanAgreesWithPlain) {
  std::mt19937_64 rng(13);
  const WeightedSet s = oracle::random_set(rng, 5000, 3);
  const MomentSummary a = moments(s, Summation::kPlain);
  const MomentSummary b = moments(s, Summation::kKahan);
  EXPECT_NEAR(a.s0, b.s0, 1e-9 * a.s0);
  EXPECT_NEAR(a.s2, b.s2, 1e-9 * a.s2);
  EXPECT_LE((a.s1 - b.s1).norm(), 1e-9 * a.s1.norm());
}

TEST(Moments, CauchySchwarzHolds) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const MomentSummary m = moments(oracle::random_set(rng, 20, 2));
    EXPECT_GE(m.s0 * m.s2, m.s1.squaredNorm() * (1.0 - 1e-12));
  }
}

TEST(WeightedMean, Examples) {
  PointMatrix p(2, 1);
  p << 0, 2;
  EXPECT_DOUBLE_EQ(weighted_mean(WeightedSet(p, Eigen::Vector2d(1, 1)))[0], 1.0);
  EXPECT_DOUBLE_EQ(weighted_mean(two_point()).norm(), 0.0);
}

TEST(WeightedMean, ZeroMassIsDegenerate) {
  PointMatrix p(2, 1);
  p << 0, 2;
  EXPECT_THROW(weighted_mean(WeightedSet(p, Eigen::Vector2d(1, -1))), DegenerateInput);
}

TEST(WeightedMean, MinimizesCostUnderPerturbation) {
  std::mt19937_64 rng(15);
  const WeightedSet s = oracle::random_set(rng, 100, 3);
  const Point mu = weighted_mean(s);
  const double best = oracle::cost(s, mu);
  for (int t = 0; t < 1000; ++t) EXPECT_LE(best, oracle::cost(s, mu + oracle::random_query(rng, 3, 0.01)));
}

TEST(WeightedSet, RejectsMalformedInput) {
  EXPECT_THROW(WeightedSet(PointMatrix(0, 2), Eigen::VectorXd(0)), InvalidArgument);
  EXPECT_THROW(WeightedSet(PointMatrix::Zero(2, 2), Eigen::VectorXd::Ones(3)), InvalidArgument);
  PointMatrix p = PointMatrix::Zero(2, 2);
  p(0, 0) = std::nan("");
  EXPECT_THROW(WeightedSet(p, Eigen::VectorXd::Ones(2)), InvalidArgument);
  EXPECT_THROW(WeightedSet(PointMatrix::Zero(2, 2), Eigen::Vector2d(1, INFINITY)), InvalidArgument);
}

TEST(CoresetWeights, DenseRoundTripAndBounds) {
  Eigen::VectorXd u(5);
  u << 0, 2, 0, -1, 0.5;
  const CoresetWeights c = CoresetWeights::from_dense(u);
  EXPECT_EQ(c.nnz(), 3u);
  EXPECT_EQ(c.dense(), u);
  EXPECT_DOUBLE_EQ(c.total(), 1.5);
  EXPECT_NO_THROW(c.check_bounds(5));
  EXPECT_THROW(c.check_bounds(4), DataError);
  CoresetWeights bad = c;
  bad.entries.back().index = 7;
  EXPECT_THROW(bad.check_bounds(5), DataError);
}

TEST(CoresetWeights, SubsetCostMatchesDense) {
  std::mt19937_64 rng(16);
  const WeightedSet s = oracle::random_set(rng, 30, 2);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(30);
  u[3] = 2.0;
  u[17] = 5.0;
  const Eigen::VectorXd x = oracle::random_query(rng, 2, 1.0);
  EXPECT_NEAR(eval_cost(s, CoresetWeights::from_dense(u), x), oracle::cost(s, u, x), 1e-12 * oracle::cost(s, u, x));
}

}  // namespace
}  // namespace meancore
