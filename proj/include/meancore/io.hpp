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

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

// File formats.
//
// Point file: UTF-8 CSV, one point per row, d comma-separated decimals plus
// an optional trailing weight column. Lines starting with '#' and blank lines
// are ignored; with `header` the first line is skipped.
//
// Coreset file: rows "index,weight" with 1-based indices.
//
// Summary file (stats coreset): three rows "s0,v", "s1,v1,...,vd", "s2,v".
//
// Doubles are written in the shortest form that round-trips exactly.

namespace meancore::io {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

inline double parse_double(std::string_view field, const std::string& path, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw DataError(where(path, line) + ": cannot parse number '" + std::string(field) + "'");
  return v;
}

inline std::size_t parse_index(std::string_view field, const std::string& path, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw DataError(where(path, line) + ": cannot parse index '" + std::string(field) + "'");
  return v;
}

inline bool skip_line(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace detail

struct PointFileOptions {
  bool weighted = false;
  bool header = false;
};

/// Reads a point file incrementally, `max_rows` points at a time.
class PointReader {
 public:
  PointReader(std::string path, PointFileOptions opts) : path_(std::move(path)), opts_(opts), in_(path_) {
    if (!in_) throw DataError(path_ + ": cannot open for reading");
  }

  /// Next chunk of up to `max_rows` points; nullopt at end of file.
  std::optional<WeightedSet> next(std::size_t max_rows) {
    std::vector<double> coords;
    std::vector<double> weights;
    std::size_t rows = 0;
    std::string line;
    while (rows < max_rows && std::getline(in_, line)) {
      ++line_no_;
      if (opts_.header && line_no_ == 1) continue;
      if (detail::skip_line(line)) continue;
      const auto fields = detail::split(line);
      const std::size_t width = fields.size();
      const std::size_t d = opts_.weighted ? width - 1 : width;
      if (d == 0) throw DataError(detail::where(path_, line_no_) + ": row has no coordinates");
      if (dim_ == 0) dim_ = d;
      if (d != dim_)
        throw DataError(detail::where(path_, line_no_) + ": expected " + std::to_string(dim_) +
                        " coordinates, found " + std::to_string(d));
      for (std::size_t j = 0; j < d; ++j) coords.push_back(detail::parse_double(fields[j], path_, line_no_));
      weights.push_back(opts_.weighted ? detail::parse_double(fields[d], path_, line_no_) : 1.0);
      ++rows;
    }
    if (in_.bad()) throw DataError(path_ + ": read error");
    if (rows == 0) return std::nullopt;

    PointMatrix pts = Eigen::Map<PointMatrix>(coords.data(), static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(dim_));
    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(rows));
    try {
      return WeightedSet(std::move(pts), std::move(w));
    } catch (const InvalidArgument& e) {
      throw DataError(path_ + ": " + e.what());
    }
  }

 private:
  std::string path_;
  PointFileOptions opts_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::size_t dim_ = 0;
};

inline WeightedSet read_points(const std::string& path, PointFileOptions opts = {}) {
  PointReader reader(path, opts);
  auto all = reader.next(std::numeric_limits<std::size_t>::max());
  if (!all) throw DataError(path + ": no points");
  return std::move(*all);
}

inline void write_points(std::ostream& out, const WeightedSet& set, bool weighted) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto p = set.point(i);
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (j) out << ',';
      out << format_double(p[j]);
    }
    if (weighted) out << ',' << format_double(set.weight(i));
    out << '\n';
  }
}

inline void write_coreset(std::ostream& out, const CoresetWeights& u) {
  for (const auto& e : u.entries) out << (e.index + 1) << ',' << format_double(e.weight) << '\n';
}

/// Reads a coreset file against a source of n points.
inline CoresetWeights read_coreset(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open for reading");
  CoresetWeights u;
  u.source_size = n;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto fields = detail::split(line);
    if (fields.size() != 2) throw DataError(detail::where(path, line_no) + ": expected 'index,weight'");
    const std::size_t idx = detail::parse_index(fields[0], path, line_no);
    if (idx < 1 || idx > n)
      throw DataError(detail::where(path, line_no) + ": index " + std::to_string(idx) + " out of range [1, " +
                      std::to_string(n) + "]");
    u.entries.push_back({idx - 1, detail::parse_double(fields[1], path, line_no)});
  }
  std::sort(u.entries.begin(), u.entries.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < u.entries.size(); ++i)
    if (u.entries[i].index == u.entries[i - 1].index)
      throw DataError(path + ": duplicate index " + std::to_string(u.entries[i].index + 1));
  return u;
}

inline void write_summary(std::ostream& out, const MomentSummary& s) {
  out << "s0," << format_double(s.s0) << '\n' << "s1";
  for (Eigen::Index j = 0; j < s.s1.size(); ++j) out << ',' << format_double(s.s1[j]);
  out << '\n' << "s2," << format_double(s.s2) << '\n';
}

/// True when the file's first data row is a summary ("s0,...") row.
inline bool is_summary_file(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (!detail::skip_line(line)) return detail::trim(line).starts_with("s0,");
  return false;
}

inline MomentSummary read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open for reading");
  MomentSummary s;
  bool seen[3] = {false, false, false};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto fields = detail::split(line);
    if (fields[0] == "s0" && fields.size() == 2) {
      s.s0 = detail::parse_double(fields[1], path, line_no);
      seen[0] = true;
    } else if (fields[0] == "s1" && fields.size() >= 2) {
      s.s1.resize(static_cast<Eigen::Index>(fields.size() - 1));
      for (std::size_t j = 1; j < fields.size(); ++j)
        s.s1[static_cast<Eigen::Index>(j - 1)] = detail::parse_double(fields[j], path, line_no);
      seen[1] = true;
    } else if (fields[0] == "s2" && fields.size() == 2) {
      s.s2 = detail::parse_double(fields[1], path, line_no);
      seen[2] = true;
    } else {
      throw DataError(detail::where(path, line_no) + ": unexpected summary row");
    }
  }
  if (!(seen[0] && seen[1] && seen[2])) throw DataError(path + ": summary needs rows s0, s1 and s2");
  return s;
}

}  // namespace meancore::io
