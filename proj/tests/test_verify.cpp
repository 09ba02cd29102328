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

#include "meancore/accurate.hpp"
#include "meancore/normalize.hpp"
#include "meancore/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace meancore {
namespace {

WeightedSet two_point() {
  PointMatrix p(2, 2);
  p << -1, 0, 1, 0;
  return WeightedSet(p, Eigen::Vector2d(0.5, 0.5));
}

CoresetWeights first_only(std::size_t n) {
  CoresetWeights u;
  u.source_size = n;
  u.entries.push_back({0, 1.0});
  return u;
}

CoresetWeights perturbed(const WeightedSet& s, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd u = s.weights();
  for (auto& v : u) v *= 1.0 + g(rng);
  return CoresetWeights::from_dense(u);
}

TEST(MomentCheck, Examples) {
  const WeightedSet s = two_point();
  const MomentDiscrepancy id = moment_check(s, CoresetWeights::identity(s));
  EXPECT_EQ(id.max(), 0.0);
  const MomentDiscrepancy m = moment_check(s, first_only(2));
  EXPECT_DOUBLE_EQ(m.mean_drift, 1.0);
  EXPECT_DOUBLE_EQ(m.mass_drift, 0.0);
  EXPECT_DOUBLE_EQ(m.variance_drift, 0.0);
}

TEST(MomentCheck, RejectsRawInput) {
  std::mt19937_64 rng(51);
  const WeightedSet s = oracle::random_set(rng, 20, 2);
  EXPECT_THROW(moment_check(s, CoresetWeights::identity(s)), InvalidArgument);
}

TEST(WorstCase, HandCheckedTwoPoint) {
  const WeightedSet s = two_point();
  EXPECT_EQ(worst_case_strong_error(s, CoresetWeights::identity(s)), 0.0);
  EXPECT_NEAR(worst_case_strong_error(s, first_only(2)), 1.0, 1e-15);
  EXPECT_NEAR(oracle::grid_worst_case(0.0, 0.0, 1.0), 1.0, 1e-9);
}

TEST(WorstCase, MatchesGridSearch) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 40; ++t) {
    const WeightedSet s = normalize(oracle::random_set(rng, 30, 1 + t % 4)).set;
    const CoresetWeights u = perturbed(s, rng, 0.3);
    const oracle::Deltas dl = oracle::deltas(s, u.dense());
    EXPECT_NEAR(worst_case_strong_error(s, u), oracle::grid_worst_case(dl.a, dl.c, dl.b_norm), 1e-6);
  }
}

TEST(WorstCase, FromDeltasEdgeCases) {
  EXPECT_DOUBLE_EQ(worst_case_from_deltas(0.3, -0.5, 0.0), 0.5);
  EXPECT_NEAR(worst_case_from_deltas(0.2, 0.2, 0.1), oracle::grid_worst_case(0.2, 0.2, 0.1), 1e-9);
  EXPECT_NEAR(worst_case_from_deltas(-0.4, 0.1, 0.3), oracle::grid_worst_case(-0.4, 0.1, 0.3), 1e-9);
}

TEST(WorstCase, DominatesEmpiricalAndRandomQueries) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 500; ++t) {
    const WeightedSet s = normalize(oracle::random_set(rng, 15, 1 + t % 3)).set;
    const CoresetWeights u = perturbed(s, rng, 0.2);
    const double worst = worst_case_strong_error(s, u);
    EXPECT_LE(empirical_strong_error(s, u, 30, RngSeed{static_cast<std::uint64_t>(t)}), worst + 1e-9);
    const Eigen::VectorXd x = oracle::random_query(rng, s.dim(), 3.0);
    const double full = oracle::cost(s, x);
    EXPECT_LE(std::abs(oracle::cost(s, u.dense(), x) - full) / full, worst + 1e-9);
  }
}

TEST(WorstCase, MomentDiscrepancyCertifiesTwiceTheError) {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 500; ++t) {
    const WeightedSet s = normalize(oracle::random_set(rng, 12, 1 + t % 5)).set;
    const CoresetWeights u = perturbed(s, rng, 0.01 + 0.001 * (t % 50));
    const double eps0 = moment_check(s, u).max();
    EXPECT_LE(worst_case_strong_error(s, u), 2.0 * eps0 + 1e-9);
  }
}

TEST(WorstCase, RawAndSummaryForms) {
  std::mt19937_64 rng(55);
  const WeightedSet q = oracle::random_set(rng, 200, 3);
  EXPECT_LE(worst_case_strong_error_raw(q, stats_coreset(q)), 1e-9);
  EXPECT_LE(worst_case_strong_error_raw(q, caratheodory_coreset(q)), 1e-7);
  const NormalizedSet ns = normalize(q);
  const CoresetWeights u = perturbed(ns.set, rng, 0.1);
  const double a = worst_case_strong_error(ns.set, u);
  EXPECT_NEAR(worst_case_strong_error_raw(q, denormalize_weights(u, ns.transform)), a, 1e-9);
  EXPECT_NEAR(worst_case_strong_error(moments(q), moments(q, denormalize_weights(u, ns.transform))), a, 1e-8);
}

TEST(WorstCase, DegenerateInput) {
  PointMatrix p(3, 1);
  p << 2, 2, 2;
  const WeightedSet s = WeightedSet::uniform(p);
  CoresetWeights u;
  u.source_size = 3;
  u.entries.push_back({1, 3.0});
  EXPECT_EQ(worst_case_strong_error_raw(s, u), 0.0);
  u.entries[0].weight = 1.5;
  EXPECT_DOUBLE_EQ(worst_case_strong_error_raw(s, u), 0.5);
}

TEST(Empirical, IdentityAndAccurate) {
  std::mt19937_64 rng(56);
  const WeightedSet q = oracle::random_set(rng, 500, 4);
  EXPECT_EQ(empirical_strong_error(q, CoresetWeights::identity(q), 100, RngSeed{1}), 0.0);
  EXPECT_LE(empirical_strong_error(q, caratheodory_coreset(q), 1000, RngSeed{2}), 1e-7);
  EXPECT_LE(empirical_strong_error(q, stats_coreset(q), 1000, RngSeed{3}), 1e-7);
}

TEST(WeakError, Examples) {
  const WeightedSet s = two_point();
  const WeakError id = weak_error(s, CoresetWeights::identity(s));
  EXPECT_EQ(id.snorm, 0.0);
  EXPECT_NEAR(id.ratio, 0.0, 1e-15);
  const WeakError e = weak_error(s, first_only(2));
  EXPECT_DOUBLE_EQ(e.snorm, 1.0);
  EXPECT_NEAR(e.ratio, 1.0, 1e-15);
  CoresetWeights zero;
  zero.source_size = 2;
  EXPECT_THROW(weak_error(s, zero), InvalidArgument);
}

TEST(WeakError, IffRelationStraddlingThreshold) {
  // Coreset means placed just inside and just outside |s_bar|^2 = eps.
  std::mt19937_64 rng(57);
  for (int t = 0; t < 100; ++t) {
    const WeightedSet s = normalize(oracle::random_set(rng, 200, 2)).set;
    const double eps = 0.05 + 0.002 * t;
    for (double side : {0.999, 1.001}) {
      // Pick two points and mix them so the mixture lies at |s_bar|^2 = side * eps.
      const Point a = s.point(0).transpose();
      const Point b = s.point(1).transpose();
      double lo = 0.0, hi = 1.0;
      const auto norm_at = [&](double l) { return (l * a + (1.0 - l) * b).squaredNorm(); };
      const double target = side * eps;
      if ((norm_at(lo) - target) * (norm_at(hi) - target) > 0) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((norm_at(lo) - target) * (norm_at(mid) - target) <= 0) hi = mid;
        else lo = mid;
      }
      CoresetWeights u;
      u.source_size = s.size();
      u.entries = {{0, 0.5 * (lo + hi)}, {1, 1.0 - 0.5 * (lo + hi)}};
      const WeakError e = weak_error(s, u);
      EXPECT_NEAR(e.ratio, e.snorm, 1e-9);
      EXPECT_EQ(e.snorm <= eps, e.ratio <= eps);
      EXPECT_EQ(e.snorm <= eps, side < 1.0);
    }
  }
}

TEST(StrongToWeak, IdentityAndPremise) {
  const WeightedSet s = two_point();
  EXPECT_EQ(strong_to_weak_check(s, CoresetWeights::identity(s), 0.01), std::optional<bool>(true));
  EXPECT_EQ(strong_to_weak_check(s, first_only(2), 0.01), std::nullopt);
  EXPECT_EQ(strong_to_weak_check(s, CoresetWeights::identity(s), 0.5), std::nullopt);
}

TEST(StrongToWeak, HoldsWheneverPremiseHolds) {
  std::mt19937_64 rng(58);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const WeightedSet s = normalize(oracle::random_set(rng, 20, 2)).set;
    const CoresetWeights u = perturbed(s, rng, 0.05);
    const double w = worst_case_strong_error(s, u);
    const double eps = std::max(w * w, 1e-6);
    if (eps >= 1.0 / 36.0) continue;
    const auto r = strong_to_weak_check(s, u, eps);
    ASSERT_TRUE(r.has_value());
    EXPECT_TRUE(*r);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace meancore
