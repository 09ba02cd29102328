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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace meancore {

enum class CoresetMode { kStrong, kWeak };

inline const char* to_string(CoresetMode m) { return m == CoresetMode::kStrong ? "strong" : "weak"; }

struct RngSeed {
  std::uint64_t value = 0;
};

/// splitmix64 finalizer; derives independent per-trial seeds from one base.
inline RngSeed derive_seed(RngSeed base, std::uint64_t counter) {
  std::uint64_t z = base.value + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return {z ^ (z >> 31)};
}

using Rng = std::mt19937_64;

inline Rng make_rng(RngSeed seed) { return Rng(seed.value); }

struct SamplingConfig {
  double eps = 0.1;
  double delta = 0.1;
  double c = 1.0;  // universal constant of the sensitivity-sampling bound
  CoresetMode mode = CoresetMode::kStrong;

  void validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  }
};

namespace detail {

// Sample sizes are computed from real-valued formulas; a relative slack of
// 1e-12 keeps e.g. 1/(0.1*0.1) from ceiling to 101.
inline std::size_t ceil_count(double x) {
  return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
}
inline std::size_t floor_count(double x) {
  return static_cast<std::size_t>(std::floor(x * (1.0 + 1e-12)));
}

inline void require_normalized(const WeightedSet& set, const char* what) {
  const auto r = normalization_residual(set);
  if (r.max() > 1e-8)
    throw InvalidArgument(std::string(what) +
                          ": input must be a normalized weighted set (sum w = 1, sum w p = 0, "
                          "sum w |p|^2 = 1); normalize first");
}

inline std::vector<std::size_t> sample_counts(const Eigen::VectorXd& probs, std::size_t draws, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(probs.data(), probs.data() + probs.size());
  std::vector<std::size_t> counts(static_cast<std::size_t>(probs.size()), 0);
  for (std::size_t s = 0; s < draws; ++s) ++counts[pick(rng)];
  return counts;
}

inline CoresetWeights full_set_fallback(const WeightedSet& set, std::size_t sample_size, const char* what) {
  CoresetWeights u = CoresetWeights::identity(set);
  u.warnings.push_back(std::string(what) + ": sample size " + std::to_string(sample_size) +
                       " >= n = " + std::to_string(set.size()) + "; returning the full set");
  return u;
}

}  // namespace detail

/// eps' passed to the sampler: eps^2 for a strong eps-coreset, eps/36 for a
/// weak one (strong sqrt(eps)/6 implies weak eps).
inline double sensitivity_eps_prime(const SamplingConfig& cfg) {
  return cfg.mode == CoresetMode::kStrong ? cfg.eps * cfg.eps : cfg.eps / 36.0;
}

/// |S| = ceil((2c / eps') (d + ln(1/delta))).
inline std::size_t sensitivity_sample_size(const SamplingConfig& cfg, std::size_t d) {
  cfg.validate();
  const double ep = sensitivity_eps_prime(cfg);
  return detail::ceil_count((2.0 * cfg.c / ep) * (static_cast<double>(d) + std::log(1.0 / cfg.delta)));
}

/// Sampling probabilities s_i = (1 + |p_i|^2) / (2n) for a normalized set with
/// uniform weights. Total sensitivity is 2, so the s_i sum to one.
inline Eigen::VectorXd sensitivity_distribution(const WeightedSet& set) {
  detail::require_normalized(set, "sensitivity_distribution");
  const double n = static_cast<double>(set.size());
  const double target = 1.0 / n;
  if (((set.weights().array() - target).abs() > 1e-12 * std::max(1.0, target) + 1e-15).any())
    throw InvalidArgument("sensitivity_distribution: weights must be uniform (w_i = 1/n)");
  return (1.0 + set.points().rowwise().squaredNorm().array()).matrix() / (2.0 * n);
}

/// Importance sample of |S| i.i.d. draws from the sensitivity distribution;
/// u_i = k_i w_i / (s_i |S|) with k_i the multiplicity of i.
inline CoresetWeights sensitivity_coreset(const WeightedSet& set, const SamplingConfig& cfg, RngSeed seed) {
  cfg.validate();
  const Eigen::VectorXd s = sensitivity_distribution(set);
  const std::size_t m = sensitivity_sample_size(cfg, set.dim());
  if (m >= set.size()) return detail::full_set_fallback(set, m, "sensitivity_coreset");

  Rng rng = make_rng(seed);
  const auto counts = detail::sample_counts(s, m, rng);
  const double md = static_cast<double>(m);
  return CoresetWeights::from_counts(counts, [&](std::size_t i, std::size_t k) {
    const auto ii = static_cast<Eigen::Index>(i);
    return static_cast<double>(k) * set.weights()[ii] / (s[ii] * md);
  });
}

/// eps' = eps^2 (strong; the guarantee is then 2 eps) or eps/144 (weak).
inline double bernstein_eps_prime(const SamplingConfig& cfg) {
  return cfg.mode == CoresetMode::kStrong ? cfg.eps * cfg.eps : cfg.eps / 144.0;
}

/// k = ceil(4 ln((d+1)/delta) / eps').
inline std::size_t bernstein_sample_size(const SamplingConfig& cfg, std::size_t d) {
  cfg.validate();
  const double ep = bernstein_eps_prime(cfg);
  return detail::ceil_count(4.0 * std::log((static_cast<double>(d) + 1.0) / cfg.delta) / ep);
}

/// s_i = w_i |(p_i, 1)|^2 / sum_j w_j |(p_j, 1)|^2; the denominator is 2 on a
/// normalized set.
inline Eigen::VectorXd bernstein_distribution(const WeightedSet& set) {
  detail::require_normalized(set, "bernstein_distribution");
  if (!set.all_positive()) throw InvalidArgument("bernstein_distribution: weights must be positive");
  Eigen::VectorXd s =
      set.weights().array() * (1.0 + set.points().rowwise().squaredNorm().array());
  return s / s.sum();
}

/// u_i = 2 c_i / (k |(p_i, 1)|^2), c_i the multiplicity of i in k draws.
/// Independent of the draw, sum u_i |p_i|^2 + sum u_i = 2 sum c_i / k = 2.
inline CoresetWeights bernstein_coreset(const WeightedSet& set, const SamplingConfig& cfg, RngSeed seed) {
  cfg.validate();
  const Eigen::VectorXd s = bernstein_distribution(set);
  const std::size_t k = bernstein_sample_size(cfg, set.dim());
  if (k >= set.size()) return detail::full_set_fallback(set, k, "bernstein_coreset");

  Rng rng = make_rng(seed);
  const auto counts = detail::sample_counts(s, k, rng);
  const double kd = static_cast<double>(k);
  return CoresetWeights::from_counts(counts, [&](std::size_t i, std::size_t c) {
    const double lifted_sq = 1.0 + set.point(i).squaredNorm();
    return 2.0 * static_cast<double>(c) / (kd * lifted_sq);
  });
}

}  // namespace meancore
