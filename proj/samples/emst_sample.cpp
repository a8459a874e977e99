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


// Euclidean MST of a random point set, computed twice: once with the
// memory-optimized filtered Kruskal driver and once the naive way.

#include <cstdio>

#include "parclust.hpp"

int main() {
  parclust::Dataset data = parclust::gen_uniform(20000, 3, 7);
  parclust::KdTree tree(data.points);

  parclust::MstStats fast, slow;
  parclust::SpanningForest a = parclust::emst(tree, &fast);
  parclust::SpanningForest b = parclust::emst_naive(tree, &slow);

  std::printf("points          %d\n", data.size());
  std::printf("memogfk weight  %.17g  (%zu pairs at peak, %d rounds)\n",
              a.total_weight(), fast.peak_materialized, fast.rounds);
  std::printf("naive weight    %.17g  (%zu pairs)\n", b.total_weight(),
              slow.total_pairs);
  return a.total_weight() == b.total_weight() ? 0 : 1;
}
