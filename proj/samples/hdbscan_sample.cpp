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


// HDBSCAN* on clustered data: mutual-reachability MST, ordered dendrogram,
// reachability plot and a DBSCAN* cut.

#include <cstdio>
#include <cstdlib>

#include "parclust.hpp"

int main(int argc, char** argv) {
  const double eps = argc > 1 ? std::atof(argv[1]) : 1.0;
  const int min_pts = 10;
  parclust::Dataset data = parclust::gen_varden(5000, 2, 3, 6);
  parclust::KdTree tree(data.points);

  parclust::HdbscanMst h = parclust::hdbscan_mst(tree, min_pts);
  parclust::Dendrogram d = parclust::dendrogram_parallel(h.forest, 0);
  parclust::ReachabilityPlot plot = parclust::reachability_plot(d);
  parclust::Clustering c = parclust::cut(d, h.core.values, eps, min_pts);

  int noise = 0;
  for (int label : c.labels) noise += label == parclust::kNoise;
  std::printf("mst weight %.6f, %zu pairs at peak\n", h.forest.total_weight(),
              h.stats.peak_materialized);
  std::printf("eps %.3f: %d clusters, %d noise points\n", eps, c.num_clusters,
              noise);

  // first few bars of the plot
  for (int i = 0; i < 8 && i < static_cast<int>(plot.order.size()); ++i)
    std::printf("  %5d  %.6f\n", plot.order[i], plot.values[i]);
  return 0;
}
