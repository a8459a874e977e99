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

#ifndef PARCLUST_BCCP_HPP_
#define PARCLUST_BCCP_HPP_

#include <algorithm>
#include <cmath>
#include <utility>

#include "parclust/common.hpp"
#include "parclust/edge.hpp"
#include "parclust/kdtree.hpp"

namespace parclust {

enum class Metric { euclidean, mutual_reachability };

/// max{cd(p), cd(q), d(p, q)}
inline double mutual_reachability(double core_p, double core_q, double dist) {
  return std::max({core_p, core_q, dist});
}

namespace detail {

template <Metric M>
class Bccp {
 public:
  explicit Bccp(const KdTree& tree) : tree_(tree) {}

  Edge run(int a, int b) {
    best_ = Edge();
    best_.weight = kInf;
    visit(a, b, lower_bound(a, b));
    return best_;
  }

 private:
  double lower_bound(int a, int b) const {
    double d = std::sqrt(box_distance_sq(tree_, a, b));
    if constexpr (M == Metric::mutual_reachability)
      d = std::max({d, tree_.node(a).cd_min, tree_.node(b).cd_min});
    return d;
  }

  void leaves(const KdNode& na, const KdNode& nb) {
    const int dim = tree_.dim();
    for (int p = na.begin; p < na.end; ++p) {
      const double* x = tree_.coords_at(p);
      for (int q = nb.begin; q < nb.end; ++q) {
        double w = std::sqrt(squared_distance(x, tree_.coords_at(q), dim));
        if constexpr (M == Metric::mutual_reachability)
          w = mutual_reachability(tree_.core_at(p), tree_.core_at(q), w);
        if (w > best_.weight) continue;
        Edge e(tree_.point_id(p), tree_.point_id(q), w);
        if (e < best_) best_ = e;
      }
    }
  }

  void visit(int a, int b, double bound) {
    // Ties in weight can still win on ids, so keep equal bounds.
    if (bound > best_.weight) return;
    const KdNode& na = tree_.node(a);
    const KdNode& nb = tree_.node(b);
    if (na.is_leaf() && nb.is_leaf()) {
      leaves(na, nb);
      return;
    }
    bool split_a = nb.is_leaf() || (!na.is_leaf() && na.size() >= nb.size());
    if (!split_a) {
      std::swap(a, b);
    }
    const KdNode& big = tree_.node(a);
    double l = lower_bound(big.left, b);
    double r = lower_bound(big.right, b);
    if (l <= r) {
      visit(big.left, b, l);
      visit(big.right, b, r);
    } else {
      visit(big.right, b, r);
      visit(big.left, b, l);
    }
  }

  const KdTree& tree_;
  Edge best_;
};

}  // namespace detail

/// Bichromatic closest pair between the points of nodes a and b, exact,
/// ties broken by the edge key.
inline Edge bccp(const KdTree& tree, int a, int b) {
  return detail::Bccp<Metric::euclidean>(tree).run(a, b);
}

/// Closest pair under mutual reachability distance. Needs core distances
/// on the tree.
inline Edge bccp_star(const KdTree& tree, int a, int b) {
  if (!tree.has_core_distances()) throw Error("core distances missing");
  return detail::Bccp<Metric::mutual_reachability>(tree).run(a, b);
}

inline Edge bccp(const KdTree& tree, int a, int b, Metric metric) {
  return metric == Metric::euclidean ? bccp(tree, a, b)
                                     : bccp_star(tree, a, b);
}

}  // namespace parclust

#endif  // PARCLUST_BCCP_HPP_
