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

#ifndef PARCLUST_KDTREE_HPP_
#define PARCLUST_KDTREE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/parallel.hpp"
#include "parclust/point_set.hpp"

namespace parclust {

/// One node of a KdTree. Points of the node occupy the contiguous range
/// [begin, end) of the tree's permuted order.
struct KdNode {
  int begin = 0;
  int end = 0;
  int left = -1;
  int right = -1;
  int split_dim = -1;
  double split_value = 0.0;
  double radius = 0.0;  // bounding sphere, centered on the box center
  double cd_min = 0.0;  // core-distance bounds, valid once annotated
  double cd_max = 0.0;

  bool is_leaf() const { return left < 0; }
  int size() const { return end - begin; }
  double diam() const { return 2.0 * radius; }
};

/// Spatial-median kd-tree. Internal nodes split at the midpoint of the
/// widest bounding-box dimension. Nodes are numbered in preorder with the
/// root at 0. The tree is immutable after construction except for the
/// core-distance annotation, which may be replaced.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const PointSet& points, int leaf_capacity = 1)
      : dim_(points.dim()), leaf_capacity_(leaf_capacity) {
    if (points.empty()) throw Error("empty dataset");
    if (leaf_capacity < 1) throw Error("leaf capacity must be positive");
    const int n = points.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.resize(2 * static_cast<std::size_t>(n) - 1);
    lo_.resize(nodes_.size() * dim_);
    hi_.resize(nodes_.size() * dim_);
    build(points, 0, 0, n);
    if (leaf_capacity_ > 1) compact();

    coords_.resize(static_cast<std::size_t>(n) * dim_);
    parallel_for(0, n, [&](std::size_t pos) {
      auto p = points[order_[pos]];
      std::copy(p.begin(), p.end(), coords_.begin() + pos * dim_);
    });
    centers_.resize(nodes_.size() * dim_);
    parallel_for(0, nodes_.size(), [&](std::size_t i) {
      double s = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double lo = lo_[i * dim_ + k], hi = hi_[i * dim_ + k];
        centers_[i * dim_ + k] = lo + (hi - lo) / 2.0;
        s += (hi - lo) * (hi - lo);
      }
      // Slightly inflated so that rounding never puts a point outside.
      nodes_[i].radius = 0.5 * std::sqrt(s) * (1.0 + 1e-12);
    });
  }

  int dim() const { return dim_; }
  int num_points() const { return static_cast<int>(order_.size()); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int leaf_capacity() const { return leaf_capacity_; }
  static constexpr int root() { return 0; }

  const KdNode& node(int i) const { return nodes_[i]; }
  std::span<const KdNode> nodes() const { return nodes_; }

  std::span<const double> center(int i) const { return row(centers_, i); }
  std::span<const double> box_lo(int i) const { return row(lo_, i); }
  std::span<const double> box_hi(int i) const { return row(hi_, i); }

  /// Original id of the point at permuted position `pos`.
  int point_id(int pos) const { return order_[pos]; }
  std::span<const int> order() const { return order_; }
  const double* coords_at(int pos) const {
    return coords_.data() + static_cast<std::size_t>(pos) * dim_;
  }

  bool has_core_distances() const { return !core_.empty(); }
  double core_at(int pos) const { return core_[pos]; }

  /// Stores per-point core distances (indexed by original id) and fills
  /// cd_min / cd_max on every node bottom-up.
  void annotate_core_distances(std::span<const double> core_by_id) {
    if (static_cast<int>(core_by_id.size()) != num_points())
      throw Error("core distance count does not match the dataset");
    core_.resize(order_.size());
    for (std::size_t pos = 0; pos < order_.size(); ++pos)
      core_[pos] = core_by_id[order_[pos]];
    annotate(root());
  }

  void clear_core_distances() { core_.clear(); }

 private:
  std::span<const double> row(const std::vector<double>& v, int i) const {
    return {v.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }

  void compute_box(const PointSet& points, int slot, int begin, int end) {
    double* lo = &lo_[static_cast<std::size_t>(slot) * dim_];
    double* hi = &hi_[static_cast<std::size_t>(slot) * dim_];
    auto first = points[order_[begin]];
    std::copy(first.begin(), first.end(), lo);
    std::copy(first.begin(), first.end(), hi);
    for (int i = begin + 1; i < end; ++i) {
      auto p = points[order_[i]];
      for (int k = 0; k < dim_; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
  }

  // Builds the subtree for order_[begin, end) rooted at `slot`. A subtree
  // over m points owns the 2m - 1 slots starting at `slot`.
  void build(const PointSet& points, int slot, int begin, int end) {
    KdNode& nd = nodes_[slot];
    nd.begin = begin;
    nd.end = end;
    compute_box(points, slot, begin, end);
    const int m = end - begin;
    if (m <= leaf_capacity_) return;

    const double* lo = &lo_[static_cast<std::size_t>(slot) * dim_];
    const double* hi = &hi_[static_cast<std::size_t>(slot) * dim_];
    int dim = 0;
    for (int k = 1; k < dim_; ++k)
      if (hi[k] - lo[k] > hi[dim] - lo[dim]) dim = k;

    auto first = order_.begin() + begin;
    auto last = order_.begin() + end;
    int mid = begin;
    double split = lo[dim];
    if (hi[dim] > lo[dim]) {
      split = lo[dim] + (hi[dim] - lo[dim]) / 2.0;
      mid = static_cast<int>(
          std::partition(first, last,
                         [&](int id) { return points[id][dim] <= split; }) -
          order_.begin());
    }
    if (mid == begin || mid == end) {
      // Degenerate split: order by (coordinate, id) and halve the range.
      mid = begin + m / 2;
      std::nth_element(first, order_.begin() + mid, last, [&](int a, int b) {
        double ca = points[a][dim], cb = points[b][dim];
        return ca < cb || (ca == cb && a < b);
      });
      split = points[order_[mid]][dim];
    }
    nd.split_dim = dim;
    nd.split_value = split;
    const int left_slot = slot + 1;
    const int right_slot = slot + 2 * (mid - begin);
    nd.left = left_slot;
    nd.right = right_slot;
    par_do(
        m > 4096, [&] { build(points, left_slot, begin, mid); },
        [&] { build(points, right_slot, mid, end); });
  }

  // Removes unused slots left by leaves holding more than one point.
  void compact() {
    std::vector<int> remap(nodes_.size(), -1);
    std::vector<int> preorder;
    preorder.reserve(nodes_.size());
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      remap[i] = static_cast<int>(preorder.size());
      preorder.push_back(i);
      if (!nodes_[i].is_leaf()) {
        stack.push_back(nodes_[i].right);
        stack.push_back(nodes_[i].left);
      }
    }
    std::vector<KdNode> nodes(preorder.size());
    std::vector<double> lo(preorder.size() * dim_), hi(preorder.size() * dim_);
    for (std::size_t j = 0; j < preorder.size(); ++j) {
      KdNode nd = nodes_[preorder[j]];
      if (!nd.is_leaf()) {
        nd.left = remap[nd.left];
        nd.right = remap[nd.right];
      }
      nodes[j] = nd;
      std::copy_n(lo_.begin() + preorder[j] * dim_, dim_, lo.begin() + j * dim_);
      std::copy_n(hi_.begin() + preorder[j] * dim_, dim_, hi.begin() + j * dim_);
    }
    nodes_ = std::move(nodes);
    lo_ = std::move(lo);
    hi_ = std::move(hi);
  }

  void annotate(int i) {
    KdNode& nd = nodes_[i];
    if (nd.is_leaf()) {
      nd.cd_min = kInf;
      nd.cd_max = 0.0;
      for (int p = nd.begin; p < nd.end; ++p) {
        nd.cd_min = std::min(nd.cd_min, core_[p]);
        nd.cd_max = std::max(nd.cd_max, core_[p]);
      }
      return;
    }
    par_do(
        nd.size() > 4096, [&] { annotate(nd.left); },
        [&] { annotate(nd.right); });
    nd.cd_min = std::min(nodes_[nd.left].cd_min, nodes_[nd.right].cd_min);
    nd.cd_max = std::max(nodes_[nd.left].cd_max, nodes_[nd.right].cd_max);
  }

  int dim_ = 0;
  int leaf_capacity_ = 1;
  std::vector<KdNode> nodes_;
  std::vector<int> order_;
  std::vector<double> coords_;
  std::vector<double> lo_, hi_, centers_;
  std::vector<double> core_;
};

inline KdTree build_kdtree(const PointSet& points, int leaf_capacity = 1) {
  return KdTree(points, leaf_capacity);
}

/// Gap between the bounding spheres of nodes a and b, clamped at zero.
/// Lower-bounds every cross distance.
inline double node_distance(const KdTree& tree, int a, int b) {
  double c = std::sqrt(squared_distance(tree.center(a).data(),
                                        tree.center(b).data(), tree.dim()));
  return std::max(0.0, c - tree.node(a).radius - tree.node(b).radius);
}

inline double node_distance(const KdTree& ta, int a, const KdTree& tb, int b) {
  if (ta.dim() != tb.dim()) throw Error("dimension mismatch");
  double c = std::sqrt(
      squared_distance(ta.center(a).data(), tb.center(b).data(), ta.dim()));
  return std::max(0.0, c - ta.node(a).radius - tb.node(b).radius);
}

/// Upper bound on every cross distance: center gap plus both radii.
inline double node_max_distance(const KdTree& tree, int a, int b) {
  double c = std::sqrt(squared_distance(tree.center(a).data(),
                                        tree.center(b).data(), tree.dim()));
  return c + tree.node(a).radius + tree.node(b).radius;
}

/// Squared gap between the bounding boxes of a and b. Never exceeds the
/// computed squared distance of any cross pair, including rounding.
inline double box_distance_sq(const KdTree& tree, int a, int b) {
  const double* alo = tree.box_lo(a).data();
  const double* ahi = tree.box_hi(a).data();
  const double* blo = tree.box_lo(b).data();
  const double* bhi = tree.box_hi(b).data();
  double s = 0.0;
  for (int k = 0; k < tree.dim(); ++k) {
    double gap = 0.0;
    if (blo[k] > ahi[k])
      gap = blo[k] - ahi[k];
    else if (alo[k] > bhi[k])
      gap = alo[k] - bhi[k];
    s += gap * gap;
  }
  return s;
}

/// Squared gap between a point and the bounding box of node i.
inline double box_point_distance_sq(const KdTree& tree, int i,
                                    const double* p) {
  const double* lo = tree.box_lo(i).data();
  const double* hi = tree.box_hi(i).data();
  double s = 0.0;
  for (int k = 0; k < tree.dim(); ++k) {
    double gap = 0.0;
    if (p[k] < lo[k])
      gap = lo[k] - p[k];
    else if (p[k] > hi[k])
      gap = p[k] - hi[k];
    s += gap * gap;
  }
  return s;
}

}  // namespace parclust

#endif  // PARCLUST_KDTREE_HPP_
