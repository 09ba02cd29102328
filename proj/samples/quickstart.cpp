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

// Builds one coreset per algorithm on a Gaussian cloud and prints its size and error.

#include "meancore/meancore.hpp"

#include <cstdio>

int main() {
  using namespace meancore;
  DatasetSpec spec;
  spec.n = 20000;
  spec.d = 4;
  spec.seed = RngSeed{1};
  const WeightedSet data = generate(spec);

  BuildOptions opts;
  opts.eps = 0.25;
  opts.delta = 0.1;
  opts.seed = RngSeed{7};

  std::printf("%-12s %8s %12s\n", "algo", "nnz", "worst");
  for (Algo a : kAllAlgos) {
    BuildOptions o = opts;
    if (a == Algo::kUniform || a == Algo::kMedianOfMeans) o.mode = CoresetMode::kWeak;
    const BuildOutcome b = build_coreset(data, a, o);
    if (a == Algo::kStats) {
      std::printf("%-12s %8s %12s\n", algo_name(a).data(), "-", "exact");
      continue;
    }
    std::printf("%-12s %8zu %12.3e\n", algo_name(a).data(), b.weights.nnz(),
                worst_case_strong_error_raw(data, b.weights));
  }
  return 0;
}
