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

#ifndef PARCLUST_IO_HPP_
#define PARCLUST_IO_HPP_

// Dataset ingestion, synthetic generators, and the text output formats.
//
//   points       one point per line, comma- or whitespace-separated; an
//                optional non-numeric first line is a header
//   mst          "u v weight" per edge, sorted by (weight, u, v)
//   dendrogram   "n", then 2n-1 lines "id left right height size"
//   reachability "point_id value" in plot order, first value "inf"
//   clustering   "point_id label", label -1 for noise
//
// Reals are written with 17 significant digits so doubles round-trip.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/dendrogram.hpp"
#include "parclust/edge.hpp"
#include "parclust/parallel.hpp"
#include "parclust/point_set.hpp"

namespace parclust {

struct Dataset {
  PointSet points;
  std::string source;

  int size() const { return points.size(); }
  int dim() const { return points.dim(); }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto sep = [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == ';';
  };
  while (i < line.size()) {
    while (i < line.size() && sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_real(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

inline bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// splitmix64 finalizer; drives the counter-based generators.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) that depends only on (seed, stream, index).
inline double unit_uniform(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t index) {
  std::uint64_t h = mix64(mix64(seed ^ mix64(stream)) + index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  return f;
}

inline void check_written(std::ostream& os, const std::string& path) {
  os.flush();
  if (!os) throw Error("write failed: " + path);
}

}  // namespace detail

/// Parses points from a stream. `name` is only used in error messages.
inline Dataset parse_points(std::istream& in, const std::string& name = "") {
  std::vector<double> coords;
  int dim = 0;
  bool first = true;
  std::string line;
  for (long long lineno = 1; std::getline(in, line); ++lineno) {
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i)
      numeric = detail::parse_real(fields[i], row[i]);
    if (first) {
      first = false;
      if (!numeric) continue;  // header
    }
    if (!numeric)
      throw Error(name + ":" + std::to_string(lineno) + ": non-numeric value");
    if (dim == 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      throw Error(name + ":" + std::to_string(lineno) + ": expected " +
                  std::to_string(dim) + " values, found " +
                  std::to_string(row.size()));
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (coords.empty()) throw Error(name + ": empty file");
  return Dataset{PointSet(dim, std::move(coords)), name};
}

inline Dataset read_points(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return parse_points(f, path);
}

inline void write_points(std::ostream& os, const PointSet& points) {
  for (int i = 0; i < points.size(); ++i) {
    auto p = points[i];
    for (int k = 0; k < points.dim(); ++k) {
      if (k) os << ',';
      os << detail::format_real(p[k]);
    }
    os << '\n';
  }
}

inline void write_points(const std::string& path, const PointSet& points) {
  auto f = detail::open_output(path);
  write_points(f, points);
  detail::check_written(f, path);
}

/// n points uniform in the hypercube [0, sqrt(n))^d. Each coordinate is a
/// pure function of (seed, point, axis), so the output does not depend on
/// the thread count.
inline Dataset gen_uniform(int n, int d, std::uint64_t seed) {
  if (n < 1) throw Error("generator needs n >= 1");
  if (d < 1) throw Error("generator needs d >= 1");
  const double side = std::sqrt(static_cast<double>(n));
  const double below_side = std::nextafter(side, 0.0);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  parallel_for(0, coords.size(), [&](std::size_t i) {
    double x = detail::unit_uniform(seed, 1, i) * side;
    coords[i] = x < side ? x : below_side;
  });
  return Dataset{PointSet(d, std::move(coords)),
                 "uniform:" + std::to_string(n) + ":" + std::to_string(d)};
}

/// Clustered data of varying density: `clusters` Gaussian blobs centered
/// uniformly in [0, sqrt(n))^d, cluster c holding every point i with
/// i % clusters == c, with standard deviations spread over a 16x range.
/// A stand-in for seed-spreader "varden" data, not a reproduction of it.
inline Dataset gen_varden(int n, int d, std::uint64_t seed, int clusters) {
  if (n < 1) throw Error("generator needs n >= 1");
  if (d < 1) throw Error("generator needs d >= 1");
  if (clusters < 1) throw Error("generator needs clusters >= 1");
  const double side = std::sqrt(static_cast<double>(n));
  std::vector<double> centers(static_cast<std::size_t>(clusters) * d);
  std::vector<double> sigma(clusters);
  for (int c = 0; c < clusters; ++c) {
    for (int k = 0; k < d; ++k)
      centers[static_cast<std::size_t>(c) * d + k] =
          detail::unit_uniform(seed, 2, static_cast<std::uint64_t>(c) * d + k) *
          side;
    // log-uniform spread, 0.25% .. 4% of the side length
    double u = detail::unit_uniform(seed, 3, c);
    sigma[c] = side * 0.0025 * std::exp2(4.0 * u);
  }
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  constexpr double kTwoPi = 6.283185307179586;
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t i) {
    const int c = static_cast<int>(i % clusters);
    for (int k = 0; k < d; ++k) {
      std::uint64_t idx = i * d + k;
      double u1 = 1.0 - detail::unit_uniform(seed, 4, idx);  // (0, 1]
      double u2 = detail::unit_uniform(seed, 5, idx);
      double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
      coords[idx] = centers[static_cast<std::size_t>(c) * d + k] + sigma[c] * g;
    }
  });
  return Dataset{PointSet(d, std::move(coords)),
                 "varden:" + std::to_string(n) + ":" + std::to_string(d)};
}

// ---- writers ----

inline void write_mst(std::ostream& os, const SpanningForest& forest) {
  for (const Edge& e : forest.sorted_edges())
    os << e.u << ' ' << e.v << ' ' << detail::format_real(e.weight) << '\n';
}

inline void write_dendrogram(std::ostream& os, const Dendrogram& d) {
  os << d.num_points << '\n';
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const DendrogramNode& nd = d.nodes[i];
    os << i << ' ' << nd.left << ' ' << nd.right << ' '
       << detail::format_real(nd.height) << ' ' << nd.size << '\n';
  }
}

inline void write_reachability(std::ostream& os, const ReachabilityPlot& p) {
  for (std::size_t i = 0; i < p.order.size(); ++i)
    os << p.order[i] << ' ' << detail::format_real(p.values[i]) << '\n';
}

inline void write_clustering(std::ostream& os, const Clustering& c) {
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    os << i << ' ' << c.labels[i] << '\n';
}

template <class T, class Writer>
void write_file(const std::string& path, const T& value, Writer writer) {
  auto f = detail::open_output(path);
  writer(f, value);
  detail::check_written(f, path);
}

inline void write_mst(const std::string& path, const SpanningForest& f) {
  write_file(path, f, [](std::ostream& os, const auto& v) { write_mst(os, v); });
}
inline void write_dendrogram(const std::string& path, const Dendrogram& d) {
  write_file(path, d,
             [](std::ostream& os, const auto& v) { write_dendrogram(os, v); });
}
inline void write_reachability(const std::string& path,
                               const ReachabilityPlot& p) {
  write_file(path, p,
             [](std::ostream& os, const auto& v) { write_reachability(os, v); });
}
inline void write_clustering(const std::string& path, const Clustering& c) {
  write_file(path, c,
             [](std::ostream& os, const auto& v) { write_clustering(os, v); });
}

// ---- readers (used for round trips and tooling) ----

namespace detail {

inline std::vector<std::string_view> expect_fields(const std::string& line,
                                                   std::size_t count,
                                                   long long lineno) {
  auto f = split_fields(line);
  if (f.size() != count)
    throw Error("line " + std::to_string(lineno) + ": expected " +
                std::to_string(count) + " fields");
  return f;
}

inline int to_int(std::string_view tok, long long lineno) {
  long long v;
  if (!parse_int(tok, v))
    throw Error("line " + std::to_string(lineno) + ": bad integer");
  return static_cast<int>(v);
}

inline double to_real(std::string_view tok, long long lineno) {
  double v;
  if (!parse_real(tok, v))
    throw Error("line " + std::to_string(lineno) + ": bad number");
  return v;
}

}  // namespace detail

/// Reads an MST file; the point count is taken as edges + 1.
inline SpanningForest read_mst(std::istream& in) {
  SpanningForest forest;
  std::string line;
  for (long long ln = 1; std::getline(in, line); ++ln) {
    if (detail::split_fields(line).empty()) continue;
    auto f = detail::expect_fields(line, 3, ln);
    forest.edges.emplace_back(detail::to_int(f[0], ln), detail::to_int(f[1], ln),
                              detail::to_real(f[2], ln));
  }
  forest.num_points = static_cast<int>(forest.edges.size()) + 1;
  return forest;
}

inline Dendrogram read_dendrogram(std::istream& in) {
  Dendrogram d;
  std::string line;
  long long ln = 1;
  if (!std::getline(in, line)) throw Error("empty dendrogram file");
  d.num_points = detail::to_int(detail::expect_fields(line, 1, ln)[0], ln);
  if (d.num_points < 1) throw Error("dendrogram needs n >= 1");
  d.nodes.resize(2 * static_cast<std::size_t>(d.num_points) - 1);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (detail::split_fields(line).empty()) continue;
    auto f = detail::expect_fields(line, 5, ln);
    int id = detail::to_int(f[0], ln);
    if (id < 0 || static_cast<std::size_t>(id) >= d.nodes.size())
      throw Error("line " + std::to_string(ln) + ": node id out of range");
    DendrogramNode& nd = d.nodes[id];
    nd.left = detail::to_int(f[1], ln);
    nd.right = detail::to_int(f[2], ln);
    nd.height = detail::to_real(f[3], ln);
    nd.size = detail::to_int(f[4], ln);
    ++seen;
  }
  if (seen != d.nodes.size()) throw Error("dendrogram node count mismatch");
  d.root = d.num_points == 1 ? 0 : 2 * d.num_points - 2;
  return d;
}

inline ReachabilityPlot read_reachability(std::istream& in) {
  ReachabilityPlot p;
  std::string line;
  for (long long ln = 1; std::getline(in, line); ++ln) {
    if (detail::split_fields(line).empty()) continue;
    auto f = detail::expect_fields(line, 2, ln);
    p.order.push_back(detail::to_int(f[0], ln));
    p.values.push_back(detail::to_real(f[1], ln));
  }
  return p;
}

inline Clustering read_clustering(std::istream& in) {
  Clustering c;
  std::string line;
  for (long long ln = 1; std::getline(in, line); ++ln) {
    if (detail::split_fields(line).empty()) continue;
    auto f = detail::expect_fields(line, 2, ln);
    int id = detail::to_int(f[0], ln);
    if (id != static_cast<int>(c.labels.size()))
      throw Error("line " + std::to_string(ln) + ": point ids out of order");
    int label = detail::to_int(f[1], ln);
    c.labels.push_back(label);
    c.num_clusters = std::max(c.num_clusters, label + 1);
  }
  return c;
}

}  // namespace parclust

#endif  // PARCLUST_IO_HPP_
