// Copyright 2026 The parclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARCLUST_APP_HPP_
#define PARCLUST_APP_HPP_

// Pipeline orchestration behind the command-line tool. Kept free of any
// argument-parsing library so it can be driven from tests.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/dendrogram.hpp"
#include "parclust/hdbscan.hpp"
#include "parclust/io.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/mst.hpp"
#include "parclust/parallel.hpp"

namespace parclust {

/// Raised for bad flag values and combinations; the tool answers these with
/// usage text.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;        // emst | hdbscan | single-linkage | bench
  std::string input;          // path, or empty when generating
  std::string gen;            // uniform:N:D[:seed=S] | varden:N:D[:seed=S][:clusters=C]
  int min_pts = 10;
  std::optional<double> epsilon;
  std::string algo = "memogfk";  // naive | gfk | memogfk | gantao
  int start = 0;
  std::vector<int> threads;   // empty = all; several only for bench
  std::uint64_t seed = 1;
  std::string output = "out";
};

struct GenSpec {
  std::string kind;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 1;
  int clusters = 10;
};

inline GenSpec parse_gen_spec(const std::string& text,
                              std::uint64_t default_seed = 1) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  auto bad = [&](const std::string& why) {
    return ConfigError("bad generator spec '" + text + "': " + why);
  };
  if (parts.size() < 3) throw bad("expected kind:N:D");
  GenSpec g;
  g.kind = parts[0];
  g.seed = default_seed;
  if (g.kind != "uniform" && g.kind != "varden") throw bad("unknown kind");
  long long v;
  if (!detail::parse_int(parts[1], v) || v < 1 || v > (1LL << 31) - 1)
    throw bad("N must be a positive integer");
  g.n = static_cast<int>(v);
  if (!detail::parse_int(parts[2], v) || v < 1 || v > 1024)
    throw bad("D must be a positive integer");
  g.d = static_cast<int>(v);
  for (std::size_t i = 3; i < parts.size(); ++i) {
    std::size_t eq = parts[i].find('=');
    if (eq == std::string::npos) throw bad("expected key=value");
    std::string key = parts[i].substr(0, eq);
    std::string val = parts[i].substr(eq + 1);
    if (!detail::parse_int(val, v) || v < 0) throw bad("bad value for " + key);
    if (key == "seed") {
      g.seed = static_cast<std::uint64_t>(v);
    } else if (key == "clusters" && g.kind == "varden") {
      if (v < 1) throw bad("clusters must be positive");
      g.clusters = static_cast<int>(v);
    } else {
      throw bad("unknown key " + key);
    }
  }
  return g;
}

inline void validate(const RunConfig& c) {
  if (c.command != "emst" && c.command != "hdbscan" &&
      c.command != "single-linkage" && c.command != "bench")
    throw ConfigError("unknown command '" + c.command + "'");
  if (c.input.empty() == c.gen.empty())
    throw ConfigError("give exactly one of --input and --gen");
  if (!c.gen.empty()) parse_gen_spec(c.gen, c.seed);
  if (c.min_pts < 1) throw ConfigError("--minpts must be at least 1");
  if (c.epsilon && !(*c.epsilon >= 0.0))
    throw ConfigError("--epsilon must be non-negative");
  if (c.algo != "naive" && c.algo != "gfk" && c.algo != "memogfk" &&
      c.algo != "gantao")
    throw ConfigError("unknown --algo '" + c.algo + "'");
  if (c.start < 0) throw ConfigError("--start must be non-negative");
  for (int t : c.threads)
    if (t < 1) throw ConfigError("--threads values must be positive");
  if (c.command != "bench" && c.threads.size() > 1)
    throw ConfigError("several --threads values are only allowed for bench");
  if (c.command == "emst" && c.epsilon)
    throw ConfigError("--epsilon does not apply to emst");
  if (c.command != "bench" && c.output.empty())
    throw ConfigError("--output prefix must not be empty");
}

inline Dataset load_dataset(const RunConfig& c) {
  if (!c.input.empty()) return read_points(c.input);
  GenSpec g = parse_gen_spec(c.gen, c.seed);
  return g.kind == "uniform" ? gen_uniform(g.n, g.d, g.seed)
                             : gen_varden(g.n, g.d, g.seed, g.clusters);
}

struct PhaseTimes {
  double build_tree = 0.0;
  double core_distances = 0.0;
  double dendrogram = 0.0;
  MstStats mst;
};

struct PipelineResult {
  SpanningForest forest;
  std::vector<double> core;  // zeros without density
  Dendrogram dendrogram;
  PhaseTimes times;
};

/// Runs tree build, optional core distances, the chosen MST driver and
/// (unless `with_dendrogram` is false) the ordered dendrogram.
inline PipelineResult run_pipeline(const PointSet& points, bool density,
                                   int min_pts, const std::string& algo,
                                   int start, bool with_dendrogram = true) {
  PipelineResult r;
  detail::Stopwatch t0;
  KdTree tree(points);
  r.times.build_tree = t0.seconds();

  Metric metric = Metric::euclidean;
  SeparationPredicate pred = SeparationPredicate::standard();
  if (density) {
    if (min_pts > points.size())
      throw ConfigError("--minpts exceeds the number of points");
    detail::Stopwatch t1;
    r.core = core_distances(tree, min_pts).values;
    r.times.core_distances = t1.seconds();
    metric = Metric::mutual_reachability;
    if (algo != "gantao") pred = SeparationPredicate::hdbscan();
  } else {
    r.core.assign(points.size(), 0.0);
  }

  if (algo == "naive") {
    r.forest = mst_naive(tree, pred, metric, &r.times.mst);
  } else if (algo == "gfk") {
    detail::Stopwatch tw;
    std::vector<WspdPair> pairs = wspd(tree, pred);
    double t = tw.seconds();
    r.forest = gfk(tree, std::move(pairs), pred, metric, &r.times.mst);
    r.times.mst.traversal_seconds += t;
  } else {
    r.forest = memogfk(tree, pred, metric, &r.times.mst);
  }

  if (with_dendrogram) {
    if (start >= points.size())
      throw ConfigError("--start is not a point id");
    detail::Stopwatch t2;
    r.dendrogram = dendrogram_parallel(r.forest, start);
    r.times.dendrogram = t2.seconds();
  }
  return r;
}

namespace detail {

inline int single_thread_count(const RunConfig& c) {
  return c.threads.empty() ? default_num_threads() : c.threads.front();
}

}  // namespace detail

/// Runs one non-bench command and writes its files under the output
/// prefix. Returns the paths written.
inline std::vector<std::string> run(const RunConfig& c) {
  validate(c);
  if (c.command == "bench") throw ConfigError("use bench() for bench");
  return with_threads(detail::single_thread_count(c), [&] {
    Dataset data = load_dataset(c);
    const bool density = c.command == "hdbscan";
    const bool dendro = c.command != "emst";
    PipelineResult r =
        run_pipeline(data.points, density, density ? c.min_pts : 1, c.algo,
                     c.start, dendro);
    std::vector<std::string> written;
    auto out = [&](const std::string& ext) {
      written.push_back(c.output + ext);
      return written.back();
    };
    write_mst(out(".mst"), r.forest);
    if (dendro) {
      write_dendrogram(out(".dendro"), r.dendrogram);
      write_reachability(out(".reach"), reachability_plot(r.dendrogram));
      if (c.epsilon) {
        Clustering cl = cut(r.dendrogram, r.core, *c.epsilon,
                            density ? c.min_pts : 1);
        write_clustering(out(".clusters"), cl);
      }
    }
    return written;
  });
}

/// Times the density pipeline once per entry of c.threads and prints one
/// TSV row per phase and thread count.
inline void bench(const RunConfig& c, std::ostream& os) {
  validate(c);
  Dataset data = load_dataset(c);
  std::vector<int> counts = c.threads;
  if (counts.empty()) counts.push_back(default_num_threads());
  os << "phase\twall_seconds\tthreads\tpeak_pairs\n";
  for (int t : counts) {
    PipelineResult r = with_threads(t, [&] {
      return run_pipeline(data.points, true, c.min_pts, c.algo, c.start);
    });
    const PhaseTimes& pt = r.times;
    const std::size_t pairs = pt.mst.peak_materialized;
    auto row = [&](const char* phase, double secs) {
      os << phase << '\t' << detail::format_real(secs) << '\t' << t << '\t'
         << pairs << '\n';
    };
    row("tree-build", pt.build_tree);
    row("core-dist", pt.core_distances);
    row("wspd", pt.mst.traversal_seconds);
    row("bccp", pt.mst.bccp_seconds);
    row("kruskal", pt.mst.kruskal_seconds);
    row("dendrogram", pt.dendrogram);
  }
}

}  // namespace parclust

#endif  // PARCLUST_APP_HPP_
