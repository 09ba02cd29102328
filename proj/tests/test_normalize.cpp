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

#include "meancore/normalize.hpp"
#include "meancore/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace meancore {
namespace {

TEST(Normalize, SymmetricTwoPoint) {
  PointMatrix q(2, 1);
  q << 0, 2;
  const NormalizedSet ns = normalize(WeightedSet(q, Eigen::Vector2d(3, 3)));
  EXPECT_NEAR(ns.set.point(0)[0], -1.0, 1e-15);
  EXPECT_NEAR(ns.set.point(1)[0], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(ns.set.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(ns.transform.mu[0], 1.0);
  EXPECT_DOUBLE_EQ(ns.transform.sigma, 1.0);
  EXPECT_DOUBLE_EQ(ns.transform.total_mass, 6.0);
}

TEST(Normalize, ThreeCollinearPoints) {
  PointMatrix q(3, 2);
  q << 1, 1, 3, 1, 5, 1;
  const NormalizedSet ns = normalize(WeightedSet::uniform(q));
  EXPECT_NEAR(ns.transform.mu[0], 3.0, 1e-15);
  EXPECT_NEAR(ns.transform.mu[1], 1.0, 1e-15);
  EXPECT_NEAR(ns.transform.sigma, std::sqrt(8.0 / 3.0), 1e-14);
  EXPECT_LE(normalization_residual(ns.set).max(), 1e-10);
}

TEST(Normalize, FixedPointOnNormalizedInput) {
  PointMatrix p(2, 2);
  p << -1, 0, 1, 0;
  const WeightedSet s(p, Eigen::Vector2d(0.5, 0.5));
  const NormalizedSet ns = normalize(s);
  EXPECT_LE(ns.transform.mu.norm(), 1e-15);
  EXPECT_NEAR(ns.transform.sigma, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(ns.transform.total_mass, 1.0);
  EXPECT_LE((ns.set.points() - p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Normalize, Errors) {
  PointMatrix q(3, 2);
  q << 1, 2, 1, 2, 1, 2;
  try {
    normalize(WeightedSet::uniform(q));
    FAIL() << "expected DegenerateInput";
  } catch (const DegenerateInput& e) {
    EXPECT_EQ(e.mean(), Point(q.row(0).transpose()));
  }
  PointMatrix two(2, 1);
  two << 0, 1;
  EXPECT_THROW(normalize(WeightedSet(two, Eigen::Vector2d(1, 0))), InvalidArgument);
  EXPECT_THROW(normalize(WeightedSet(two.topRows(1), Eigen::VectorXd::Ones(1))), InvalidArgument);
}

TEST(Normalize, PropertiesAgainstIndependentTransform) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const WeightedSet q = oracle::random_set(rng, 2 + t % 60, 1 + t % 6);
    const NormalizedSet ns = normalize(q);
    const oracle::Normalized ref = oracle::normalize(q);
    const oracle::Moments m = oracle::moments(ns.set, ns.set.weights());
    EXPECT_NEAR(static_cast<double>(m.s0), 1.0, 1e-10);
    for (auto v : m.s1) EXPECT_NEAR(static_cast<double>(v), 0.0, 1e-10);
    EXPECT_NEAR(static_cast<double>(m.s2), 1.0, 1e-10);
    EXPECT_LE((ns.transform.mu - ref.mu).norm(), 1e-10 * (1.0 + ref.mu.norm()));
    EXPECT_NEAR(ns.transform.sigma, ref.sigma, 1e-10 * ref.sigma);
  }
}

TEST(Normalize, WeightRoundTrip) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 100; ++t) {
    const WeightedSet q = oracle::random_set(rng, 25, 3);
    const NormalizedSet ns = normalize(q);
    const Eigen::VectorXd back = denormalize_weights(CoresetWeights::identity(ns.set), ns.transform).dense();
    for (Eigen::Index i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], q.weights()[i], 1e-12 * q.weights()[i]);
  }
}

TEST(Normalize, DenormalizeScalesByMass) {
  NormalizationTransform t;
  t.mu = Point::Zero(1);
  t.total_mass = 6.0;
  CoresetWeights u;
  u.source_size = 3;
  u.entries.push_back({0, 0.5});
  const CoresetWeights v = denormalize_weights(u, t);
  ASSERT_EQ(v.nnz(), 1u);
  EXPECT_EQ(v.entries[0].index, 0u);
  EXPECT_DOUBLE_EQ(v.entries[0].weight, 3.0);
}

TEST(Normalize, QueryCorrespondence) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    const WeightedSet q = oracle::random_set(rng, 30, 1 + t % 5);
    const NormalizedSet ns = normalize(q);
    const Eigen::VectorXd x = ns.transform.mu + oracle::random_query(rng, q.dim(), 5.0);
    const Eigen::VectorXd y = ns.transform.to_normalized(x);
    const double lhs = oracle::cost(q, x);
    const double rhs = ns.transform.sigma * ns.transform.sigma * ns.transform.total_mass * oracle::cost(ns.set, y);
    EXPECT_NEAR(lhs, rhs, 1e-9 * lhs);
  }
}

TEST(Normalize, CoresetErrorInvariantUnderTransform) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const WeightedSet q = oracle::random_set(rng, 40, 3);
    const NormalizedSet ns = normalize(q);
    Eigen::VectorXd u = ns.set.weights();
    for (Eigen::Index i = 0; i < u.size(); i += 2) u[i] *= 1.3;
    const CoresetWeights un = CoresetWeights::from_dense(u);
    const CoresetWeights uq = denormalize_weights(un, ns.transform);
    for (int k = 0; k < 500; ++k) {
      const Eigen::VectorXd x = ns.transform.mu + oracle::random_query(rng, 3, 3.0);
      const Eigen::VectorXd y = ns.transform.to_normalized(x);
      const double err_q = std::abs(oracle::cost(q, uq.dense(), x) - oracle::cost(q, x)) / oracle::cost(q, x);
      const double err_p = std::abs(oracle::cost(ns.set, u, y) - oracle::cost(ns.set, y)) / oracle::cost(ns.set, y);
      EXPECT_NEAR(err_q, err_p, 1e-9);
    }
    EXPECT_LE(empirical_strong_error(q, uq, 500, RngSeed{7}), worst_case_strong_error(ns.set, un) + 1e-9);
  }
}

}  // namespace
}  // namespace meancore
