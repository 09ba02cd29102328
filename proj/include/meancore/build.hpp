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
#include "meancore/frankwolfe.hpp"
#include "meancore/normalize.hpp"
#include "meancore/sampling.hpp"
#include "meancore/sublinear.hpp"

#include <array>
#include <chrono>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

// One entry point per construction, taking a raw weighted set and returning
// weights in the source frame. Builders that assume a normalized input run on
// the normalized view and are mapped back.

namespace meancore {

enum class Algo { kStats, kCaratheodory, kSigned, kSensitivity, kBernstein, kFrankWolfe, kUniform, kMedianOfMeans };

inline constexpr std::array<Algo, 8> kAllAlgos{Algo::kStats,       Algo::kCaratheodory, Algo::kSigned,
                                               Algo::kSensitivity, Algo::kBernstein,    Algo::kFrankWolfe,
                                               Algo::kUniform,     Algo::kMedianOfMeans};

inline std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::kStats: return "stats";
    case Algo::kCaratheodory: return "cara";
    case Algo::kSigned: return "signed";
    case Algo::kSensitivity: return "sens";
    case Algo::kBernstein: return "bern";
    case Algo::kFrankWolfe: return "fw";
    case Algo::kUniform: return "uniform";
    case Algo::kMedianOfMeans: return "mom";
  }
  return "?";
}

inline Algo parse_algo(std::string_view name) {
  for (Algo a : kAllAlgos)
    if (algo_name(a) == name) return a;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

inline bool is_randomized(Algo a) {
  return a == Algo::kSensitivity || a == Algo::kBernstein || a == Algo::kUniform || a == Algo::kMedianOfMeans;
}

struct BuildOptions {
  double eps = 0.1;
  double delta = 0.1;
  CoresetMode mode = CoresetMode::kStrong;
  RngSeed seed{};
  double c = 1.0;
  double log_base = std::numbers::e;

  SamplingConfig sampling() const { return {eps, delta, c, mode}; }
};

struct BuildOutcome {
  Algo algo = Algo::kStats;
  CoresetWeights weights;
  std::optional<MomentSummary> summary;  // stats only
  std::size_t draws = 0;                 // samples drawn by randomized builders
  double build_ms = 0.0;
};

/// The guarantee a construction targets: strong (worst-case error) or weak
/// (cost ratio at the coreset mean), and its error level.
struct Guarantee {
  CoresetMode mode;
  double target;
};

inline constexpr double kAccurateTolerance = 1e-7;

inline Guarantee guarantee_for(Algo algo, const BuildOptions& opts) {
  switch (algo) {
    case Algo::kStats:
    case Algo::kCaratheodory:
    case Algo::kSigned: return {CoresetMode::kStrong, 0.0};
    case Algo::kSensitivity:
    case Algo::kFrankWolfe: return {opts.mode, opts.eps};
    case Algo::kBernstein:
      return {opts.mode, opts.mode == CoresetMode::kStrong ? 2.0 * opts.eps : opts.eps};
    case Algo::kUniform: return {CoresetMode::kWeak, opts.eps};
    case Algo::kMedianOfMeans: return {CoresetMode::kWeak, 33.0 * opts.eps};
  }
  return {CoresetMode::kStrong, 0.0};
}

/// Upper bound on ||u||_0 implied by the construction, where one exists.
inline std::optional<std::size_t> size_bound(Algo algo, const BuildOptions& opts, std::size_t d) {
  switch (algo) {
    case Algo::kStats: return std::nullopt;
    case Algo::kCaratheodory: return d + 3;
    case Algo::kSigned: return d + 2;
    case Algo::kSensitivity: return sensitivity_sample_size(opts.sampling(), d);
    case Algo::kBernstein: return bernstein_sample_size(opts.sampling(), d);
    case Algo::kFrankWolfe: return fw_iteration_budget(fw_eps_prime(opts.eps, opts.mode));
    case Algo::kUniform: return uniform_sample_size(opts.eps, opts.delta);
    case Algo::kMedianOfMeans: return median_of_means_params(opts.eps, opts.delta, opts.log_base).group_size;
  }
  return std::nullopt;
}

inline std::string_view size_formula(Algo algo, CoresetMode mode) {
  switch (algo) {
    case Algo::kStats: return "O(1) statistics";
    case Algo::kCaratheodory: return "d+3";
    case Algo::kSigned: return "d+2";
    case Algo::kSensitivity:
      return mode == CoresetMode::kStrong ? "ceil(2c/eps^2 (d+ln 1/delta))" : "ceil(72c/eps (d+ln 1/delta))";
    case Algo::kBernstein:
      return mode == CoresetMode::kStrong ? "ceil(4 ln((d+1)/delta)/eps^2)" : "ceil(576 ln((d+1)/delta)/eps)";
    case Algo::kFrankWolfe: return mode == CoresetMode::kStrong ? "ceil(128/eps^2)" : "ceil(4608/eps)";
    case Algo::kUniform: return "ceil(1/(eps delta))";
    case Algo::kMedianOfMeans: return "ceil(4/eps)";
  }
  return "";
}

namespace detail {

inline bool weights_uniform(const WeightedSet& set) {
  const double w0 = set.weight(0);
  return w0 > 0.0 && ((set.weights().array() - w0).abs() <= 1e-12 * w0).all();
}

inline CoresetWeights single_point_coreset(const WeightedSet& source, const DegenerateInput& e) {
  CoresetWeights u;
  u.source_size = source.size();
  u.entries.push_back({0, source.weights().sum()});
  u.warnings.push_back(std::string(e.what()) + "; emitted the exact single-point coreset");
  return u;
}

template <typename Builder>
CoresetWeights on_normalized_view(const WeightedSet& source, Builder build) {
  try {
    const NormalizedSet ns = normalize(source);
    return denormalize_weights(build(ns.set), ns.transform);
  } catch (const DegenerateInput& e) {
    return single_point_coreset(source, e);
  }
}

inline CoresetWeights scale_weights(CoresetWeights u, double factor) {
  for (auto& e : u.entries) e.weight *= factor;
  return u;
}

}  // namespace detail

inline BuildOutcome build_coreset(const WeightedSet& source, Algo algo, const BuildOptions& opts) {
  BuildOutcome out;
  out.algo = algo;
  const auto t0 = std::chrono::steady_clock::now();

  switch (algo) {
    case Algo::kStats:
      out.summary = stats_coreset(source);
      out.weights.source_size = source.size();
      break;
    case Algo::kCaratheodory:
      out.weights = caratheodory_coreset(source);
      break;
    case Algo::kSigned:
      out.weights = signed_subset_coreset(source);
      break;
    case Algo::kSensitivity: {
      if (!detail::weights_uniform(source))
        throw InvalidArgument(
            "sens: sensitivity sampling assumes a uniformly weighted input (w_i = 1/n after normalization)");
      const SamplingConfig cfg = opts.sampling();
      out.weights = detail::on_normalized_view(
          source, [&](const WeightedSet& p) { return sensitivity_coreset(p, cfg, opts.seed); });
      out.draws = sensitivity_sample_size(cfg, source.dim());
      break;
    }
    case Algo::kBernstein: {
      if (!source.all_positive()) throw InvalidArgument("bern: Bernstein sampling assumes positive weights");
      const SamplingConfig cfg = opts.sampling();
      out.weights = detail::on_normalized_view(
          source, [&](const WeightedSet& p) { return bernstein_coreset(p, cfg, opts.seed); });
      out.draws = bernstein_sample_size(cfg, source.dim());
      break;
    }
    case Algo::kFrankWolfe:
      if (!source.all_positive()) throw InvalidArgument("fw: Frank-Wolfe coreset assumes positive weights");
      out.weights = detail::on_normalized_view(
          source, [&](const WeightedSet& p) { return fw_coreset(p, opts.eps, opts.mode); });
      break;
    case Algo::kUniform: {
      if (!detail::weights_uniform(source))
        throw InvalidArgument("uniform: the Chebyshev sample bound assumes an unweighted (uniform) input");
      out.weights = detail::scale_weights(uniform_weak_coreset(source, opts.eps, opts.delta, opts.seed),
                                          source.weights().sum());
      out.draws = uniform_sample_size(opts.eps, opts.delta);
      break;
    }
    case Algo::kMedianOfMeans: {
      if (!detail::weights_uniform(source))
        throw InvalidArgument("mom: the median-of-means bound assumes an unweighted (uniform) input");
      auto r = median_of_means_coreset(source, opts.eps, opts.delta, opts.seed, opts.log_base);
      out.weights = detail::scale_weights(std::move(r.weights), source.weights().sum());
      out.draws = r.total_draws;
      break;
    }
  }

  out.build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace meancore
