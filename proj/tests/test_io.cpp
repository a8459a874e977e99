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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "parclust/dendrogram.hpp"
#include "parclust/io.hpp"
#include "parclust/mst.hpp"
#include "parclust/parallel.hpp"

namespace {

namespace fs = std::filesystem;
using parclust::Dataset;
using parclust::Edge;
using parclust::PointSet;

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parclust::parse_points(in, "mem");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const parclust::Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "parclust_test_io";
  fs::create_directories(dir);
  return dir / name;
}

TEST(ParsePoints, Csv) {
  Dataset d = parse("0,0\n1,0\n");
  EXPECT_EQ(d.size(), 2);
  EXPECT_EQ(d.dim(), 2);
  EXPECT_EQ(d.points.coords(), (std::vector<double>{0, 0, 1, 0}));
}

TEST(ParsePoints, HeaderAndWhitespace) {
  Dataset d = parse("x y z\n1 2 3\r\n\n 4\t5   6 \n-1e-3;+2;3.5\n");
  EXPECT_EQ(d.size(), 3);
  EXPECT_EQ(d.dim(), 3);
  EXPECT_EQ(d.points.coords(),
            (std::vector<double>{1, 2, 3, 4, 5, 6, -1e-3, 2, 3.5}));
}

TEST(ParsePoints, RaggedRowNamesLine) {
  EXPECT_EQ(error_of("1,2\n3,4\n5\n"), "mem:3: expected 2 values, found 1");
  EXPECT_EQ(error_of("a,b\n1,2\n3,4,5\n"), "mem:3: expected 2 values, found 3");
}

TEST(ParsePoints, Rejects) {
  EXPECT_EQ(error_of(""), "mem: empty file");
  EXPECT_EQ(error_of("x,y\n"), "mem: empty file");
  EXPECT_EQ(error_of("1,2\n3,abc\n"), "mem:2: non-numeric value");
  EXPECT_NE(error_of("1,nan\n"), "");
  EXPECT_NE(error_of("1,inf\n"), "");
}

TEST(ReadPoints, MissingFileNamesPath) {
  try {
    parclust::read_points("/nonexistent/points.csv");
    FAIL();
  } catch (const parclust::Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/points.csv"),
              std::string::npos);
  }
}

TEST(ReadPoints, RoundTrip) {
  PointSet p = oracle::random_points(1000, 5, 3, 1e3);
  fs::path path = scratch("round.csv");
  parclust::write_points(path.string(), p);
  Dataset back = parclust::read_points(path.string());
  EXPECT_EQ(back.points.coords(), p.coords());  // %.17g is exact
  EXPECT_EQ(back.source, path.string());
}

TEST(Writers, FailureNamesPath) {
  parclust::SpanningForest f;
  f.num_points = 1;
  try {
    parclust::write_mst("/nonexistent/dir/out.mst", f);
    FAIL();
  } catch (const parclust::Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.mst"),
              std::string::npos);
  }
}

TEST(GenUniform, SinglePoint) {
  Dataset d = parclust::gen_uniform(1, 3, 9);
  ASSERT_EQ(d.size(), 1);
  for (double x : d.points.coords()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(GenUniform, DeterministicPerSeed) {
  auto a = parclust::gen_uniform(5000, 3, 42);
  auto b = parclust::with_threads(
      4, [] { return parclust::gen_uniform(5000, 3, 42); });
  auto c = parclust::gen_uniform(5000, 3, 43);
  EXPECT_EQ(a.points.coords(), b.points.coords());
  EXPECT_NE(a.points.coords(), c.points.coords());
}

TEST(GenUniform, FillsTheCube) {
  const int n = 100000;
  auto d = parclust::gen_uniform(n, 2, 1);
  const double side = std::sqrt(n);
  std::vector<int> cell(100, 0);
  for (int i = 0; i < n; ++i) {
    auto x = d.points[i];
    ASSERT_GE(x[0], 0.0);
    ASSERT_LT(x[0], side);
    ASSERT_GE(x[1], 0.0);
    ASSERT_LT(x[1], side);
    int cx = static_cast<int>(x[0] / side * 10);
    int cy = static_cast<int>(x[1] / side * 10);
    ++cell[cx * 10 + cy];
  }
  // binomial(n, 1/100): within 5 standard deviations of n/100
  const double mean = n / 100.0, sd = std::sqrt(n * 0.01 * 0.99);
  for (int c : cell) EXPECT_LT(std::abs(c - mean), 5 * sd);
}

TEST(GenVarden, DeterministicAndClustered) {
  auto a = parclust::gen_varden(4000, 2, 7, 5);
  auto b = parclust::with_threads(
      3, [] { return parclust::gen_varden(4000, 2, 7, 5); });
  EXPECT_EQ(a.points.coords(), b.points.coords());
  EXPECT_NE(a.points.coords(), parclust::gen_varden(4000, 2, 8, 5).points.coords());
  for (double x : a.points.coords()) EXPECT_TRUE(std::isfinite(x));
}

TEST(GenVarden, OneClusterIsOneBlob) {
  auto a = parclust::gen_varden(2000, 3, 1, 1);
  // the spread of a single blob is far below the cube side
  std::vector<double> mean(3, 0.0);
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k) mean[k] += a.points[i][k] / a.size();
  double var = 0;
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k)
      var += std::pow(a.points[i][k] - mean[k], 2) / a.size();
  EXPECT_LT(std::sqrt(var), std::sqrt(2000.0));
}

TEST(GenerateRejects, BadArguments) {
  EXPECT_THROW(parclust::gen_uniform(0, 2, 1), parclust::Error);
  EXPECT_THROW(parclust::gen_uniform(5, 0, 1), parclust::Error);
  EXPECT_THROW(parclust::gen_varden(5, 2, 1, 0), parclust::Error);
}

TEST(Formats, MstLine) {
  PointSet p(2, {0, 0, 3, 4});
  parclust::KdTree tree(p);
  std::ostringstream os;
  parclust::write_mst(os, parclust::emst(tree));
  EXPECT_EQ(os.str(), "0 1 5\n");
}

TEST(Formats, DendrogramAndReachability) {
  parclust::SpanningForest f;
  f.num_points = 2;
  f.edges = {Edge(0, 1, 0.5)};
  auto d = parclust::dendrogram_parallel(f, 0);
  std::ostringstream os;
  parclust::write_dendrogram(os, d);
  EXPECT_EQ(os.str(), "2\n0 -1 -1 0 1\n1 -1 -1 0 1\n2 0 1 0.5 2\n");
  std::ostringstream rs;
  parclust::write_reachability(rs, parclust::reachability_plot(d));
  EXPECT_EQ(rs.str(), "0 inf\n1 0.5\n");
}

TEST(Formats, Clustering) {
  parclust::Clustering c;
  c.labels = {0, parclust::kNoise, 1};
  std::ostringstream os;
  parclust::write_clustering(os, c);
  EXPECT_EQ(os.str(), "0 0\n1 -1\n2 1\n");
}

TEST(RoundTrip, AllFormats) {
  const int n = 1200;
  parclust::SpanningForest f;
  f.num_points = n;
  f.edges = oracle::random_tree(n, 5, true);
  auto d = parclust::dendrogram_parallel(f, 11);
  auto plot = parclust::reachability_plot(d);
  std::vector<double> core(n, 0.0);
  auto cl = parclust::cut(d, core, 2.0);

  std::stringstream ms, ds, rs, cs;
  parclust::write_mst(ms, f);
  parclust::write_dendrogram(ds, d);
  parclust::write_reachability(rs, plot);
  parclust::write_clustering(cs, cl);

  auto f2 = parclust::read_mst(ms);
  EXPECT_EQ(f2.num_points, n);
  EXPECT_EQ(f2.sorted_edges(), f.sorted_edges());

  auto d2 = parclust::read_dendrogram(ds);
  ASSERT_EQ(d2.nodes.size(), d.nodes.size());
  EXPECT_EQ(d2.root, d.root);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    EXPECT_EQ(d2.nodes[i].left, d.nodes[i].left);
    EXPECT_EQ(d2.nodes[i].right, d.nodes[i].right);
    EXPECT_EQ(d2.nodes[i].height, d.nodes[i].height);
    EXPECT_EQ(d2.nodes[i].size, d.nodes[i].size);
    // invariants survive the trip
    if (!d2.nodes[i].is_leaf()) {
      const auto& nd = d2.nodes[i];
      EXPECT_EQ(nd.size, d2.nodes[nd.left].size + d2.nodes[nd.right].size);
      EXPECT_LE(d2.nodes[nd.left].height, nd.height);
      EXPECT_LE(d2.nodes[nd.right].height, nd.height);
    }
  }

  auto plot2 = parclust::read_reachability(rs);
  EXPECT_EQ(plot2.order, plot.order);
  EXPECT_EQ(plot2.values, plot.values);

  auto cl2 = parclust::read_clustering(cs);
  EXPECT_EQ(cl2.labels, cl.labels);
  EXPECT_EQ(cl2.num_clusters, cl.num_clusters);
}

TEST(RoundTrip, ReadersReject) {
  std::istringstream bad_mst("0 1\n");
  EXPECT_THROW(parclust::read_mst(bad_mst), parclust::Error);
  std::istringstream short_dendro("3\n0 -1 -1 0 1\n");
  EXPECT_THROW(parclust::read_dendrogram(short_dendro), parclust::Error);
  std::istringstream order("1 0\n0 0\n");
  EXPECT_THROW(parclust::read_clustering(order), parclust::Error);
}

}  // namespace
