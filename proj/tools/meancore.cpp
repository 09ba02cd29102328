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

// meancore: generate, build, verify, bench and stream mean coresets.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 guarantee violation
// (verify, bench and stream with --strict).

#include "meancore/meancore.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace meancore;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitViolation = 3;

struct CommonOptions {
  double eps = 0.1;
  double delta = 0.1;
  std::string mode = "strong";
  std::uint64_t seed = 0;
  double c = 1.0;
  double log_base = std::numbers::e;
  bool weighted = false;
  bool header = false;
  bool strict = false;
  std::string out;

  BuildOptions build() const {
    BuildOptions o;
    o.eps = eps;
    o.delta = delta;
    o.mode = mode == "weak" ? CoresetMode::kWeak : CoresetMode::kStrong;
    o.seed = RngSeed{seed};
    o.c = c;
    o.log_base = log_base;
    return o;
  }
  io::PointFileOptions file() const { return {weighted, header}; }
};

void add_seed(CLI::App* app, CommonOptions& o) {
  app->add_option("--seed", o.seed, "RNG seed")->envname("MEANCORE_SEED");
}

void add_builder_flags(CLI::App* app, CommonOptions& o) {
  app->add_option("--eps", o.eps, "target error")->check(CLI::PositiveNumber);
  app->add_option("--delta", o.delta, "failure probability")->check(CLI::Range(0.0, 1.0));
  app->add_option("--mode", o.mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  app->add_option("--c-const", o.c, "sensitivity sample-size constant")->check(CLI::PositiveNumber);
  app->add_option("--log-base", o.log_base, "logarithm base for median-of-means group count");
  add_seed(app, o);
}

void add_file_flags(CLI::App* app, CommonOptions& o) {
  app->add_flag("--weighted", o.weighted, "last column of the point file is a weight");
  app->add_flag("--header", o.header, "skip the first row of the point file");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open for writing");
  return f;
}

void close_out(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw DataError(path + ": write failed");
}

json warnings_json(const CoresetWeights& u) { return json(u.warnings); }

// gen ------------------------------------------------------------------------

struct GenOptions {
  std::string dist = "gaussian";
  std::size_t n = 1000;
  std::size_t d = 2;
  double nu = 3.0;
  std::size_t clusters = 3;
};

void add_gen_flags(CLI::App* app, GenOptions& g) {
  app->add_option("--dist", g.dist, "gaussian | uniform-cube | student-t | clustered");
  app->add_option("--n", g.n, "number of points");
  app->add_option("--d", g.d, "dimension");
  app->add_option("--nu", g.nu, "student-t degrees of freedom");
  app->add_option("--clusters", g.clusters, "clustered: number of centres");
}

DatasetSpec dataset_spec(const GenOptions& g, const CommonOptions& o) {
  DatasetSpec s;
  s.distribution = parse_distribution(g.dist);
  s.n = g.n;
  s.d = g.d;
  s.seed = RngSeed{o.seed};
  s.weighted = o.weighted;
  s.nu = g.nu;
  s.clusters = g.clusters;
  return s;
}

int run_gen(const GenOptions& g, const CommonOptions& o) {
  const WeightedSet set = generate(dataset_spec(g, o));
  if (o.out.empty()) {
    io::write_points(std::cout, set, o.weighted);
    return 0;
  }
  auto f = open_out(o.out);
  io::write_points(f, set, o.weighted);
  close_out(f, o.out);
  const MomentSummary m = moments(set);
  const Point mu = m.s1 / m.s0;
  json j{{"out", o.out}, {"n", set.size()}, {"d", set.dim()},
         {"variance", m.s2 / m.s0 - mu.squaredNorm()}};
  std::cout << j.dump() << '\n';
  return 0;
}

// build ----------------------------------------------------------------------

int run_build(const std::string& input, const std::string& algo_str, const CommonOptions& o) {
  const Algo algo = parse_algo(algo_str);
  const WeightedSet set = io::read_points(input, o.file());
  const BuildOutcome b = build_coreset(set, algo, o.build());

  auto f = open_out(o.out);
  if (b.summary) io::write_summary(f, *b.summary);
  else io::write_coreset(f, b.weights);
  close_out(f, o.out);

  json j{{"algo", algo_str}, {"nnz", b.weights.nnz()}, {"build_ms", b.build_ms}};
  if (b.draws) j["draws"] = b.draws;
  if (!b.weights.warnings.empty()) j["warnings"] = warnings_json(b.weights);
  std::cout << j.dump() << '\n';
  return 0;
}

// verify ---------------------------------------------------------------------

int run_verify(const std::string& input, const std::string& coreset, const std::string& checks_str,
               std::size_t queries, const CommonOptions& o, bool eps_given) {
  const WeightedSet set = io::read_points(input, o.file());
  std::vector<std::string> checks;
  {
    std::stringstream ss(checks_str);
    std::string c;
    while (std::getline(ss, c, ','))
      if (!c.empty()) checks.push_back(c);
  }
  auto want = [&](const char* c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };
  for (const auto& c : checks)
    if (c != "worst" && c != "empirical" && c != "weak" && c != "moments")
      throw InvalidArgument("unknown check '" + c + "' (worst, empirical, weak, moments)");

  ErrorReport report;
  const bool summary = io::is_summary_file(coreset);
  json j;
  if (summary) {
    const MomentSummary s = io::read_summary(coreset);
    if (static_cast<std::size_t>(s.s1.size()) != set.dim()) throw DataError(coreset + ": summary dimension mismatch");
    if (want("worst")) report.worst_case = worst_case_strong_error_raw(set, s);
    if (want("empirical")) report.empirical = empirical_strong_error(set, s, queries, RngSeed{o.seed});
    if (want("weak") || want("moments")) j["note"] = "weak and moments checks need subset weights; skipped";
  } else {
    const CoresetWeights u = io::read_coreset(coreset, set.size());
    if (want("worst")) report.worst_case = worst_case_strong_error_raw(set, u);
    if (want("empirical")) report.empirical = empirical_strong_error(set, u, queries, RngSeed{o.seed});
    if (want("weak")) report.weak = weak_error_raw(set, u);
    if (want("moments")) {
      try {
        const NormalizedSet ns = normalize(set);
        report.moments = moment_check(ns.set, normalize_weights(u, ns.transform));
        report.certified_eps = 2.0 * report.moments->max();
      } catch (const DegenerateInput&) {
        j["note"] = "all points identical; moments check skipped";
      }
    }
  }

  json r;
  if (report.worst_case) r["worst_case"] = *report.worst_case;
  if (report.empirical) r["empirical"] = *report.empirical;
  if (report.weak) r["weak"] = {{"snorm", report.weak->snorm}, {"ratio", report.weak->ratio}};
  if (report.moments)
    r["moments"] = {{"a", report.moments->mean_drift}, {"b", report.moments->mass_drift},
                    {"c", report.moments->variance_drift}};
  if (report.certified_eps) r["certified_eps"] = *report.certified_eps;
  if (j.contains("note")) r["note"] = j["note"];

  bool violated = false;
  if (o.strict) {
    if (!eps_given) throw InvalidArgument("--strict needs --eps as the error target");
    const bool weak = o.mode == "weak";
    if (weak) {
      if (!report.weak) throw InvalidArgument("--strict --mode weak needs the weak check");
      violated = report.weak->ratio > o.eps;
    } else {
      if (!report.worst_case) throw InvalidArgument("--strict --mode strong needs the worst check");
      violated = *report.worst_case > o.eps;
    }
    r["target_eps"] = o.eps;
    r["pass"] = !violated;
  }
  std::cout << r.dump() << '\n';
  return violated ? kExitViolation : 0;
}

// bench ----------------------------------------------------------------------

json record_json(const BenchRecord& r, bool timing) {
  json j{{"algo", r.algo},
         {"mode", r.mode},
         {"target_eps", r.target_eps},
         {"eps", r.eps},
         {"delta", r.delta},
         {"n", r.n},
         {"d", r.d},
         {"nnz", r.nnz},
         {"size_formula", r.size_formula},
         {"build_time_ms", timing ? r.build_time_ms : 0.0},
         {"worst_error", r.worst_error},
         {"empirical_error", r.empirical_error},
         {"weak_ratio", r.weak_ratio},
         {"trials", r.trials},
         {"success_count", r.success_count},
         {"seed", r.seed}};
  j["size_bound"] = r.size_bound ? json(*r.size_bound) : json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

int run_bench(const std::string& input, const GenOptions& g, const std::vector<std::string>& algos,
              const std::vector<double>& eps_grid, std::size_t trials, std::size_t queries, bool no_timing,
              const CommonOptions& o) {
  const WeightedSet set = input.empty() ? generate(dataset_spec(g, o)) : io::read_points(input, o.file());
  std::vector<BenchRecord> records;
  json cells = json::array();
  bool violated = false;
  for (const auto& name : algos) {
    const Algo algo = parse_algo(name);
    for (double eps : eps_grid) {
      BenchCell cell;
      cell.algo = algo;
      cell.opts = o.build();
      cell.opts.eps = eps;
      cell.trials = trials;
      cell.queries = queries;
      BenchRecord r = run_bench_cell(set, cell);
      if (no_timing) r.build_time_ms = 0.0;
      const double floor = expected_success_floor(algo, cell.opts, trials);
      json j = record_json(r, !no_timing);
      j["success_floor"] = floor;
      if (!r.error.empty() || static_cast<double>(r.success_count) < floor) violated = true;
      cells.push_back(std::move(j));
      records.push_back(std::move(r));
    }
  }
  json report{{"n", set.size()}, {"d", set.dim()}, {"trials", trials}, {"seed", o.seed}, {"cells", cells}};

  if (o.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    auto jf = open_out(o.out + ".json");
    jf << report.dump(2) << '\n';
    close_out(jf, o.out + ".json");
    auto cf = open_out(o.out + ".csv");
    write_bench_table(cf, records);
    close_out(cf, o.out + ".csv");
  }
  write_bench_table(std::cerr, records);
  return o.strict && violated ? kExitViolation : 0;
}

// stream ---------------------------------------------------------------------

int run_stream(const std::string& input, const std::string& algo_str, std::size_t chunk, const CommonOptions& o) {
  if (chunk < 2) throw InvalidArgument("--chunk must be at least 2");
  const Algo algo = parse_algo(algo_str);
  const BuildOptions opts = o.build();
  if (opts.mode == CoresetMode::kWeak) throw InvalidArgument("stream: merge-reduce composes strong coresets only");
  MergeReduceStream stream(make_reducer(algo, opts));

  io::PointReader reader(input, o.file());
  MomentSummary full;
  std::size_t offset = 0;
  while (auto part = reader.next(chunk)) {
    const MomentSummary m = moments(*part);
    if (offset == 0) full = m;
    else full += m;
    stream.push(*part, offset);
    offset += part->size();
  }
  if (offset == 0) throw DataError(input + ": no points");
  const auto result = stream.finish();

  MomentSummary part;
  part.s1 = Point::Zero(full.s1.size());
  for (std::size_t k = 0; k < result.weights.entries.size(); ++k) {
    const double u = result.weights.entries[k].weight;
    const auto p = result.points.row(static_cast<Eigen::Index>(k));
    part.s0 += u;
    part.s1 += u * p.transpose();
    part.s2 += u * p.squaredNorm();
  }
  const double error = worst_case_strong_error(full, part);
  const Guarantee g = guarantee_for(algo, opts);
  const double bound = g.target == 0.0
                           ? 1e-6
                           : std::pow(1.0 + g.target, static_cast<double>(result.depth)) - 1.0 + 1e-9;

  auto f = open_out(o.out);
  io::write_coreset(f, result.weights);
  close_out(f, o.out);

  json j{{"algo", algo_str},   {"chunks", result.chunks}, {"depth", result.depth}, {"nnz", result.weights.nnz()},
         {"worst_error", error}, {"bound", bound},         {"pass", error <= bound}};
  std::cout << j.dump() << '\n';
  return o.strict && error > bound ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meancore: coresets for the weighted 1-mean problem"};
  app.require_subcommand(1);

  CommonOptions o;
  GenOptions g;
  std::string input, coreset, algo = "cara", checks = "worst,empirical,weak,moments";
  std::size_t queries = 1000, trials = 10, chunk = 0;
  std::vector<std::string> algos{"stats", "cara", "signed", "sens", "bern", "fw", "uniform", "mom"};
  std::vector<double> eps_grid{0.5, 0.25};
  bool no_timing = false;

  auto* gen = app.add_subcommand("gen", "write a synthetic point file");
  add_gen_flags(gen, g);
  add_seed(gen, o);
  gen->add_flag("--weighted", o.weighted, "append a positive weight column");
  gen->add_option("--out", o.out, "output path (default: stdout)");

  auto* build = app.add_subcommand("build", "build a coreset of a point file");
  build->add_option("input", input, "point file")->required();
  build->add_option("--algo", algo, "stats | cara | signed | sens | bern | fw | uniform | mom");
  build->add_option("--out", o.out, "coreset file")->required();
  add_builder_flags(build, o);
  add_file_flags(build, o);

  auto* verify = app.add_subcommand("verify", "measure the error of a coreset");
  verify->add_option("input", input, "point file")->required();
  verify->add_option("--coreset", coreset, "coreset or summary file")->required();
  verify->add_option("--checks", checks, "comma list of worst, empirical, weak, moments");
  verify->add_option("--queries", queries, "empirical query count");
  auto* verify_eps = verify->add_option("--eps", o.eps, "error target for --strict")->check(CLI::PositiveNumber);
  verify->add_option("--mode", o.mode, "strong or weak target for --strict")->check(CLI::IsMember({"strong", "weak"}));
  verify->add_flag("--strict", o.strict, "exit 3 when the target is missed");
  add_seed(verify, o);
  add_file_flags(verify, o);

  auto* bench = app.add_subcommand("bench", "seeded trials per (algorithm, eps) cell");
  bench->add_option("input", input, "point file (default: generate one)");
  bench->add_option("--algo", algos, "algorithms")->delimiter(',');
  bench->add_option("--eps", eps_grid, "eps grid")->delimiter(',');
  bench->add_option("--delta", o.delta, "failure probability")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--mode", o.mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  bench->add_option("--c-const", o.c, "sensitivity sample-size constant")->check(CLI::PositiveNumber);
  bench->add_option("--log-base", o.log_base, "logarithm base for median-of-means group count");
  bench->add_option("--trials", trials, "trials per cell")->check(CLI::PositiveNumber);
  bench->add_option("--queries", queries, "empirical queries per trial (0 skips)");
  bench->add_option("--out", o.out, "write <out>.json and <out>.csv");
  bench->add_flag("--no-timing", no_timing, "report build times as 0 for byte-stable output");
  bench->add_flag("--strict", o.strict, "exit 3 when a cell misses its success floor");
  add_seed(bench, o);
  add_file_flags(bench, o);
  add_gen_flags(bench, g);

  auto* stream = app.add_subcommand("stream", "merge-reduce over chunks of a point file");
  stream->add_option("input", input, "point file")->required();
  stream->add_option("--algo", algo, "cara | signed | bern | fw");
  stream->add_option("--chunk", chunk, "rows per chunk")->required();
  stream->add_option("--out", o.out, "coreset file")->required();
  stream->add_flag("--strict", o.strict, "exit 3 when the composed bound is missed");
  add_builder_flags(stream, o);
  add_file_flags(stream, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return run_gen(g, o);
    if (*build) return run_build(input, algo, o);
    if (*verify) return run_verify(input, coreset, checks, queries, o, verify_eps->count() > 0);
    if (*bench) return run_bench(input, g, algos, eps_grid, trials, queries, no_timing, o);
    if (*stream) return run_stream(input, algo, chunk, o);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DegenerateInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
