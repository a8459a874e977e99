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

#ifndef PARCLUST_HDBSCAN_HPP_
#define PARCLUST_HDBSCAN_HPP_

#include <vector>

#include "parclust/bccp.hpp"
#include "parclust/common.hpp"
#include "parclust/edge.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/knn.hpp"
#include "parclust/mst.hpp"
#include "parclust/wspd.hpp"

namespace parclust {

/// cd[i]: distance from point i to its min_pts-th nearest neighbor, the
/// point itself counted.
struct CoreDistances {
  int min_pts = 1;
  std::vector<double> values;

  double operator[](int i) const { return values[i]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// Computes core distances with a k-NN query (k = min_pts) and annotates
/// every tree node with cd_min / cd_max.
inline CoreDistances core_distances(KdTree& tree, int min_pts) {
  if (min_pts < 1) throw Error("minPts must be positive");
  if (min_pts > tree.num_points())
    throw Error("minPts exceeds dataset size");
  CoreDistances cd;
  cd.min_pts = min_pts;
  cd.values.assign(tree.num_points(), 0.0);
  if (min_pts > 1) {
    KnnResult nn = knn(tree, min_pts);
    for (int i = 0; i < tree.num_points(); ++i)
      cd.values[i] = nn.distances(i)[min_pts - 1];
  }
  tree.annotate_core_distances(cd.values);
  return cd;
}

struct HdbscanMst {
  SpanningForest forest;
  CoreDistances core;
  MstStats stats;
};

/// Baseline: standard separation with one exact mutual-reachability
/// closest-pair edge per pair, driven by memogfk.
inline HdbscanMst hdbscan_mst_gantao(KdTree& tree, int min_pts) {
  HdbscanMst out;
  out.core = core_distances(tree, min_pts);
  out.forest = memogfk(tree, SeparationPredicate::standard(),
                       Metric::mutual_reachability, &out.stats);
  return out;
}

/// Pairs are separated when geometrically separated or mutually
/// unreachable, which ends the decomposition earlier and yields fewer pairs
/// than the baseline while producing an MST of the same weight.
inline HdbscanMst hdbscan_mst(KdTree& tree, int min_pts) {
  HdbscanMst out;
  out.core = core_distances(tree, min_pts);
  out.forest = memogfk(tree, SeparationPredicate::hdbscan(),
                       Metric::mutual_reachability, &out.stats);
  return out;
}

}  // namespace parclust

#endif  // PARCLUST_HDBSCAN_HPP_
