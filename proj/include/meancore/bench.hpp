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

#include "meancore/build.hpp"
#include "meancore/io.hpp"
#include "meancore/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

// Trial harness: repeated seeded builds per (algorithm, eps, delta) cell,
// each verified against the guarantee the construction targets.

namespace meancore {

struct BenchRecord {
  std::string algo;
  std::string mode;
  double target_eps = 0.0;  // error level the cell is checked against
  double eps = 0.0;         // eps passed to the builder
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t nnz = 0;  // max over trials
  std::optional<std::size_t> size_bound;
  std::string size_formula;
  double build_time_ms = 0.0;  // mean over trials
  double worst_error = 0.0;    // max over trials (strong cells)
  double empirical_error = 0.0;
  double weak_ratio = 0.0;  // max over trials
  std::size_t trials = 0;
  std::size_t success_count = 0;
  std::uint64_t seed = 0;
  std::string error;  // set when a trial threw; the cell stops there

  bool all_succeeded() const { return error.empty() && success_count == trials; }
};

struct BenchCell {
  Algo algo = Algo::kStats;
  BuildOptions opts;
  std::size_t trials = 1;
  std::size_t queries = 0;  // empirical queries per trial; 0 skips
};

/// Trial t uses derive_seed(seed, t); deterministic builders repeat the same
/// build, which also measures run-to-run timing.
inline BenchRecord run_bench_cell(const WeightedSet& source, const BenchCell& cell) {
  if (cell.trials < 1) throw InvalidArgument("bench: trials must be >= 1");
  const Guarantee g = guarantee_for(cell.algo, cell.opts);
  const bool accurate = g.target == 0.0;

  BenchRecord r;
  r.algo = std::string(algo_name(cell.algo));
  r.mode = to_string(g.mode);
  r.target_eps = accurate ? kAccurateTolerance : g.target;
  r.eps = cell.opts.eps;
  r.delta = cell.opts.delta;
  r.n = source.size();
  r.d = source.dim();
  r.seed = cell.opts.seed.value;
  r.size_formula = std::string(size_formula(cell.algo, cell.opts.mode));
  try {
    r.size_bound = size_bound(cell.algo, cell.opts, source.dim());
  } catch (const InvalidArgument&) {
  }

  double total_ms = 0.0;
  for (std::size_t t = 0; t < cell.trials; ++t) {
    BuildOptions o = cell.opts;
    o.seed = derive_seed(cell.opts.seed, t);
    try {
      const BuildOutcome b = build_coreset(source, cell.algo, o);
      total_ms += b.build_ms;
      ++r.trials;
      bool ok = false;
      if (b.summary) {
        const double worst = worst_case_strong_error_raw(source, *b.summary);
        r.worst_error = std::max(r.worst_error, worst);
        if (cell.queries > 0)
          r.empirical_error = std::max(r.empirical_error, empirical_strong_error(source, *b.summary, cell.queries, o.seed));
        ok = worst <= r.target_eps;
      } else {
        r.nnz = std::max(r.nnz, b.weights.nnz());
        const double worst = worst_case_strong_error_raw(source, b.weights);
        r.worst_error = std::max(r.worst_error, worst);
        if (cell.queries > 0)
          r.empirical_error = std::max(r.empirical_error, empirical_strong_error(source, b.weights, cell.queries, o.seed));
        const double ratio = weak_error_raw(source, b.weights).ratio;
        r.weak_ratio = std::max(r.weak_ratio, ratio);
        ok = g.mode == CoresetMode::kStrong ? worst <= r.target_eps : ratio <= r.target_eps;
      }
      if (ok) ++r.success_count;
    } catch (const std::exception& e) {
      r.error = e.what();
      break;
    }
  }
  if (r.trials > 0) r.build_time_ms = total_ms / static_cast<double>(r.trials);
  return r;
}

/// Probability with which a single build meets its guarantee.
inline double success_probability(Algo algo, const BuildOptions& opts) {
  if (!is_randomized(algo)) return 1.0;
  if (algo == Algo::kMedianOfMeans) return std::max(0.0, 1.0 - 3.0 * opts.delta);
  return 1.0 - opts.delta;
}

/// Fewest successes consistent with the guarantee: p T minus three binomial
/// standard deviations.
inline double expected_success_floor(Algo algo, const BuildOptions& opts, std::size_t trials) {
  const double p = success_probability(algo, opts);
  const double t = static_cast<double>(trials);
  return p * t - 3.0 * std::sqrt(t * p * (1.0 - p));
}

/// Table view: type, size formula against measured size, and error.
inline void write_bench_table(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "algo,type,target_eps,delta,size_formula,size_bound,nnz,worst_error,weak_ratio,success,trials,build_ms\n";
  for (const auto& r : records) {
    out << r.algo << ',' << r.mode << ',' << io::format_double(r.target_eps) << ',' << io::format_double(r.delta)
        << ",\"" << r.size_formula << "\"," << (r.size_bound ? std::to_string(*r.size_bound) : std::string("-"))
        << ',' << r.nnz << ',' << io::format_double(r.worst_error) << ',' << io::format_double(r.weak_ratio) << ','
        << r.success_count << ',' << r.trials << ',' << io::format_double(r.build_time_ms) << '\n';
  }
}

}  // namespace meancore
