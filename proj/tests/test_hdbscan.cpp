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

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "parclust/hdbscan.hpp"
#include "parclust/io.hpp"
#include "parclust/parallel.hpp"

namespace {

using parclust::Edge;
using parclust::KdTree;
using parclust::PointSet;
using parclust::SeparationPredicate;

double oracle_weight(const PointSet& p, int min_pts) {
  std::vector<double> cd = oracle::core_distances(p, min_pts);
  return oracle::total_weight(oracle::prim_complete(p, cd));
}

TEST(CoreDistances, MinPtsOneIsZero) {
  KdTree t(oracle::random_points(100, 3, 1));
  auto cd = parclust::core_distances(t, 1);
  for (double x : cd.values) EXPECT_EQ(x, 0.0);
  for (const auto& nd : t.nodes()) EXPECT_EQ(nd.cd_max, 0.0);
}

TEST(CoreDistances, ThirdNeighborOfSmallCloud) {
  // a at the origin, d at distance sqrt(10), b at distance 4, the rest far
  PointSet p(2, {0, 0, 4, 0, 1, 3, 9, 9, 10, 9, 9, 10});
  KdTree t(p);
  auto cd = parclust::core_distances(t, 3);
  EXPECT_EQ(cd[0], 4.0);
}

TEST(CoreDistances, MatchesBruteForce) {
  PointSet p = oracle::random_points(500, 2, 5);
  KdTree t(p);
  auto cd = parclust::core_distances(t, 10);
  EXPECT_EQ(cd.values, oracle::core_distances(p, 10));
  // node annotation agrees with a scan of each subtree
  for (int i = 0; i < t.num_nodes(); ++i) {
    const auto& nd = t.node(i);
    double lo = oracle::kInf, hi = 0.0;
    for (int q = nd.begin; q < nd.end; ++q) {
      lo = std::min(lo, cd[t.point_id(q)]);
      hi = std::max(hi, cd[t.point_id(q)]);
    }
    ASSERT_EQ(nd.cd_min, lo);
    ASSERT_EQ(nd.cd_max, hi);
  }
}

TEST(CoreDistances, Duplicates) {
  PointSet p = oracle::lattice_points(300, 2, 2, 3);
  KdTree t(p);
  for (int k : {1, 2, 10, 60})
    EXPECT_EQ(parclust::core_distances(t, k).values,
              oracle::core_distances(p, k));
}

TEST(CoreDistances, Errors) {
  KdTree t(oracle::random_points(10, 2, 1));
  EXPECT_THROW(parclust::core_distances(t, 0), parclust::Error);
  EXPECT_THROW(parclust::core_distances(t, 11), parclust::Error);
  EXPECT_NO_THROW(parclust::core_distances(t, 10));
}

TEST(MutualReachability, SymmetricAndBounded) {
  PointSet p = oracle::random_points(60, 3, 4);
  auto cd = oracle::core_distances(p, 4);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) {
      double d = oracle::dist(p, i, j);
      double a = parclust::mutual_reachability(cd[i], cd[j], d);
      double b = parclust::mutual_reachability(cd[j], cd[i], d);
      ASSERT_EQ(a, b);
      ASSERT_EQ(a, std::max({d, cd[i], cd[j]}));
    }
}

TEST(HdbscanMst, TwoPoints) {
  KdTree t(PointSet(2, {0, 0, 3, 4}));
  auto base = parclust::hdbscan_mst_gantao(t, 2);
  ASSERT_EQ(base.forest.edges.size(), 1u);
  EXPECT_EQ(base.forest.edges[0], Edge(0, 1, 5.0));
  auto ours = parclust::hdbscan_mst(t, 2);
  EXPECT_EQ(ours.forest.edges, base.forest.edges);
}

TEST(HdbscanMst, MinPtsOneIsEmst) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    PointSet p = oracle::random_points(800, 2 + s % 3, s);
    KdTree t(p);
    double emst = parclust::emst(t).total_weight();
    EXPECT_EQ(parclust::hdbscan_mst_gantao(t, 1).forest.total_weight(), emst);
    EXPECT_EQ(parclust::hdbscan_mst(t, 1).forest.total_weight(), emst);
  }
}

TEST(HdbscanMst, ThousandPoints3d) {
  PointSet p = oracle::random_points(1000, 3, 10);
  KdTree t(p);
  for (int k : {3, 10, 50}) {
    double want = oracle_weight(p, k);
    auto base = parclust::hdbscan_mst_gantao(t, k);
    auto ours = parclust::hdbscan_mst(t, k);
    EXPECT_EQ(base.forest.edges.size(), 999u);
    EXPECT_TRUE(oracle::rel_close(base.forest.total_weight(), want, 1e-9)) << k;
    EXPECT_TRUE(oracle::rel_close(ours.forest.total_weight(), want, 1e-9)) << k;
  }
}

TEST(HdbscanMst, AllMinPtsAndDimensions) {
  for (int d : {2, 5, 7})
    for (int k : {1, 2, 3, 10, 50}) {
      PointSet p = oracle::random_points(400, d, 100 * d + k);
      KdTree t(p);
      double want = oracle_weight(p, k);
      EXPECT_TRUE(oracle::rel_close(
          parclust::hdbscan_mst(t, k).forest.total_weight(), want, 1e-9));
      EXPECT_TRUE(oracle::rel_close(
          parclust::hdbscan_mst_gantao(t, k).forest.total_weight(), want, 1e-9));
    }
}

TEST(HdbscanMst, DuplicateHeavyData) {
  for (int k : {2, 5, 20}) {
    PointSet p = oracle::lattice_points(500, 3, k, 4);
    KdTree t(p);
    double want = oracle_weight(p, k);
    EXPECT_EQ(parclust::hdbscan_mst(t, k).forest.total_weight(), want);
    EXPECT_EQ(parclust::hdbscan_mst_gantao(t, k).forest.total_weight(), want);
  }
}

TEST(HdbscanMst, FewerPairsOnClusteredData) {
  PointSet p = parclust::gen_varden(10000, 3, 1, 10).points;
  KdTree t(p);
  parclust::core_distances(t, 10);
  std::size_t standard = parclust::wspd_count(t, SeparationPredicate::standard());
  std::size_t ours = parclust::wspd_count(t, SeparationPredicate::hdbscan());
  std::printf("standard %zu, hdbscan %zu, ratio %.2f\n", standard, ours,
              static_cast<double>(standard) / ours);
  EXPECT_GT(static_cast<double>(standard) / ours, 1.0);

  auto base = parclust::hdbscan_mst_gantao(t, 10);
  auto improved = parclust::hdbscan_mst(t, 10);
  EXPECT_TRUE(oracle::rel_close(base.forest.total_weight(),
                                improved.forest.total_weight(), 1e-12));
  EXPECT_LE(improved.stats.peak_materialized, base.stats.peak_materialized);
}

TEST(HdbscanMst, MinPtsMonotone) {
  PointSet p = parclust::gen_varden(3000, 2, 6, 4).points;
  KdTree t(p);
  std::vector<double> prev_cd(3000, 0.0);
  double prev_w = 0.0;
  for (int k : {1, 2, 3, 5, 10, 20, 50}) {
    auto h = parclust::hdbscan_mst(t, k);
    for (int i = 0; i < 3000; ++i) ASSERT_GE(h.core[i], prev_cd[i]);
    EXPECT_GE(h.forest.total_weight(), prev_w);
    prev_cd = h.core.values;
    prev_w = h.forest.total_weight();
  }
}

TEST(HdbscanMst, IndependentOfThreadCount) {
  PointSet p = parclust::gen_varden(20000, 2, 3, 6).points;
  auto run = [&](int threads) {
    return parclust::with_threads(threads, [&] {
      KdTree t(p);
      return parclust::hdbscan_mst(t, 10).forest.edges;
    });
  };
  auto one = run(1);
  EXPECT_EQ(one, run(4));
  EXPECT_EQ(one, run(8));
}

}  // namespace
