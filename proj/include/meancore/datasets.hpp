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
#include "meancore/sampling.hpp"

#include <random>
#include <string>
#include <string_view>

// Synthetic inputs for tests, benchmarks and the `gen` subcommand.

namespace meancore {

enum class Distribution { kGaussian, kUniformCube, kStudentT, kClustered };

inline Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::kGaussian;
  if (name == "uniform-cube") return Distribution::kUniformCube;
  if (name == "student-t") return Distribution::kStudentT;
  if (name == "clustered") return Distribution::kClustered;
  throw InvalidArgument("unknown distribution '" + std::string(name) + "'");
}

struct DatasetSpec {
  Distribution distribution = Distribution::kGaussian;
  std::size_t n = 1000;
  std::size_t d = 2;
  RngSeed seed{};
  bool weighted = false;  // positive weights drawn from U[0.5, 2], else all ones
  double nu = 3.0;        // student-t degrees of freedom
  std::size_t clusters = 3;

  void validate() const {
    if (n < 2) throw InvalidArgument("dataset needs n >= 2");
    if (d < 1) throw InvalidArgument("dataset needs d >= 1");
    if (distribution == Distribution::kStudentT && !(nu > 0.0)) throw InvalidArgument("student-t needs nu > 0");
    if (distribution == Distribution::kClustered && clusters < 1) throw InvalidArgument("need at least one cluster");
  }
};

inline WeightedSet generate(const DatasetSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  PointMatrix pts(n, d);

  switch (spec.distribution) {
    case Distribution::kGaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) pts(i, j) = g(rng);
      break;
    }
    case Distribution::kUniformCube: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) pts(i, j) = u(rng);
      break;
    }
    case Distribution::kStudentT: {
      std::student_t_distribution<double> t(spec.nu);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) pts(i, j) = t(rng);
      break;
    }
    case Distribution::kClustered: {
      std::normal_distribution<double> g(0.0, 1.0);
      PointMatrix centers(static_cast<Eigen::Index>(spec.clusters), d);
      for (Eigen::Index c = 0; c < centers.rows(); ++c)
        for (Eigen::Index j = 0; j < d; ++j) centers(c, j) = 10.0 * g(rng);
      std::uniform_int_distribution<Eigen::Index> which(0, centers.rows() - 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index c = which(rng);
        for (Eigen::Index j = 0; j < d; ++j) pts(i, j) = centers(c, j) + g(rng);
      }
      break;
    }
  }

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (spec.weighted) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = u(rng);
  }
  return WeightedSet(std::move(pts), std::move(w));
}

}  // namespace meancore
