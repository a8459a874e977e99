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

#ifndef PARCLUST_EDGE_HPP_
#define PARCLUST_EDGE_HPP_

#include <algorithm>
#include <tuple>
#include <vector>

namespace parclust {

/// Weighted edge between two point ids, stored with u < v. Edges compare by
/// (weight, u, v), which makes every spanning tree choice deterministic.
struct Edge {
  int u = -1;
  int v = -1;
  double weight = 0.0;

  Edge() = default;
  Edge(int a, int b, double w)
      : u(std::min(a, b)), v(std::max(a, b)), weight(w) {}

  bool valid() const { return u >= 0; }

  friend bool operator<(const Edge& a, const Edge& b) {
    return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
  }
  friend bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v && a.weight == b.weight;
  }
};

/// Accepted spanning-tree edges in acceptance order.
struct SpanningForest {
  int num_points = 0;
  std::vector<Edge> edges;

  bool complete() const {
    return static_cast<int>(edges.size()) == std::max(0, num_points - 1);
  }

  /// Edges sorted by the (weight, u, v) key.
  std::vector<Edge> sorted_edges() const {
    std::vector<Edge> out(edges);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Sum of weights, accumulated in key order so that equal edge sets give
  /// bit-identical totals regardless of acceptance order.
  double total_weight() const {
    double s = 0.0;
    for (const Edge& e : sorted_edges()) s += e.weight;
    return s;
  }
};

}  // namespace parclust

#endif  // PARCLUST_EDGE_HPP_
