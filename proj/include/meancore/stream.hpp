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
#include "meancore/core.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

// Merge-reduce composition of coresets over a stream of chunks.
//
// Each chunk is reduced to a coreset on arrival. Coresets are kept in a
// binary counter: two at the same level are merged (union of their weighted
// points) and reduced again into the next level. An eps-coreset of an
// eps-coreset is a ((1+eps)^2 - 1)-coreset, so after L reductions along the
// deepest path the result is a ((1+eps)^L - 1)-coreset of everything seen.

namespace meancore {

/// A weighted subset of the stream, carrying its points and their global row
/// indices.
struct StreamCoreset {
  std::vector<std::size_t> indices;
  PointMatrix points;
  Eigen::VectorXd weights;
  std::size_t depth = 0;  // reductions on the deepest path to a chunk

  std::size_t size() const { return indices.size(); }

  WeightedSet as_set() const { return WeightedSet(points, weights); }

  /// Union of two coresets over disjoint parts of the stream.
  static StreamCoreset merge(const StreamCoreset& a, const StreamCoreset& b) {
    StreamCoreset m;
    m.indices = a.indices;
    m.indices.insert(m.indices.end(), b.indices.begin(), b.indices.end());
    m.points.resize(a.points.rows() + b.points.rows(), a.points.cols());
    m.points << a.points, b.points;
    m.weights.resize(a.weights.size() + b.weights.size());
    m.weights << a.weights, b.weights;
    m.depth = std::max(a.depth, b.depth);
    return m;
  }
};

/// Reduces a weighted set to coreset weights over its rows.
using Reducer = std::function<CoresetWeights(const WeightedSet&)>;

class MergeReduceStream {
 public:
  explicit MergeReduceStream(Reducer reduce) : reduce_(std::move(reduce)) {}

  /// Adds the next chunk; `offset` is the global index of its first row.
  void push(const WeightedSet& chunk, std::size_t offset) {
    StreamCoreset leaf;
    leaf.indices.resize(chunk.size());
    for (std::size_t i = 0; i < chunk.size(); ++i) leaf.indices[i] = offset + i;
    leaf.points = chunk.points();
    leaf.weights = chunk.weights();
    StreamCoreset node = reduce(leaf);
    seen_ = std::max(seen_, offset + chunk.size());
    ++chunks_;

    std::size_t level = 0;
    while (level < levels_.size() && levels_[level]) {
      node = reduce(StreamCoreset::merge(*levels_[level], node));
      levels_[level].reset();
      ++level;
    }
    if (level == levels_.size()) levels_.emplace_back();
    levels_[level] = std::move(node);
  }

  struct Result {
    CoresetWeights weights;  // over all rows seen
    PointMatrix points;      // rows of weights.entries, in the same order
    std::size_t depth = 0;
    std::size_t chunks = 0;
  };

  /// Merges the leftover levels, lowest first, with one final reduction when
  /// more than one level is occupied.
  Result finish() const {
    std::optional<StreamCoreset> acc;
    std::size_t parts = 0;
    for (const auto& lvl : levels_) {
      if (!lvl) continue;
      acc = acc ? StreamCoreset::merge(*acc, *lvl) : *lvl;
      ++parts;
    }
    if (!acc) throw InvalidArgument("merge-reduce: no chunks were pushed");
    StreamCoreset root = parts > 1 ? reduce(*acc) : *acc;

    Result r;
    r.depth = root.depth;
    r.chunks = chunks_;
    r.weights.source_size = seen_;
    std::vector<std::size_t> order(root.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return root.indices[a] < root.indices[b]; });
    r.points.resize(static_cast<Eigen::Index>(order.size()), root.points.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(order[k]);
      r.weights.entries.push_back({root.indices[order[k]], root.weights[i]});
      r.points.row(static_cast<Eigen::Index>(k)) = root.points.row(i);
    }
    return r;
  }

  /// Number of reductions performed so far.
  std::size_t reductions() const { return reductions_; }

 private:
  StreamCoreset reduce(const StreamCoreset& in) const {
    const CoresetWeights u = reduce_(in.as_set());
    ++reductions_;
    StreamCoreset out;
    out.depth = in.depth + 1;
    out.indices.reserve(u.nnz());
    out.points.resize(static_cast<Eigen::Index>(u.nnz()), in.points.cols());
    out.weights.resize(static_cast<Eigen::Index>(u.nnz()));
    Eigen::Index row = 0;
    for (const auto& e : u.entries) {
      out.indices.push_back(in.indices[e.index]);
      out.points.row(row) = in.points.row(static_cast<Eigen::Index>(e.index));
      out.weights[row] = e.weight;
      ++row;
    }
    return out;
  }

  Reducer reduce_;
  std::vector<std::optional<StreamCoreset>> levels_;
  std::size_t seen_ = 0;
  std::size_t chunks_ = 0;
  mutable std::size_t reductions_ = 0;
};

/// Algorithms whose output can be re-reduced: subset coresets with a strong
/// guarantee that accept arbitrary (non-uniform) input weights.
inline bool supports_merge_reduce(Algo a) {
  return a == Algo::kCaratheodory || a == Algo::kSigned || a == Algo::kBernstein || a == Algo::kFrankWolfe;
}

/// Reducer running `algo` on every node. The first reduction uses
/// `opts.seed` itself, so a single-chunk stream matches a one-shot build;
/// later ones derive fresh seeds from a running counter.
inline Reducer make_reducer(Algo algo, const BuildOptions& opts) {
  if (!supports_merge_reduce(algo))
    throw InvalidArgument("merge-reduce needs a strong subset coreset accepting weighted input "
                          "(cara, signed, bern or fw); got " + std::string(algo_name(algo)));
  auto counter = std::make_shared<std::uint64_t>(0);
  return [algo, opts, counter](const WeightedSet& set) {
    BuildOptions o = opts;
    if (*counter > 0) o.seed = derive_seed(opts.seed, *counter);
    ++*counter;
    return build_coreset(set, algo, o).weights;
  };
}

}  // namespace meancore
