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

#ifndef PARCLUST_KNN_HPP_
#define PARCLUST_KNN_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/parallel.hpp"

namespace parclust {

/// k nearest neighbors of every point (the point itself included), indexed
/// by original point id and sorted by (distance, id).
struct KnnResult {
  int k = 0;
  std::vector<int> ids;
  std::vector<double> dists;

  std::span<const int> neighbors(int i) const {
    return {ids.data() + static_cast<std::size_t>(i) * k,
            static_cast<std::size_t>(k)};
  }
  std::span<const double> distances(int i) const {
    return {dists.data() + static_cast<std::size_t>(i) * k,
            static_cast<std::size_t>(k)};
  }
};

namespace detail {

// Bounded max-heap over (squared distance, rank) holding the best k so far.
// The query point ranks 0 and every other point ranks id + 1, so the query
// comes first even among exact duplicates.
class KnnHeap {
 public:
  KnnHeap(int k, int self) : k_(k), self_(self) { items_.reserve(k); }

  bool full() const { return static_cast<int>(items_.size()) == k_; }
  double worst() const { return full() ? items_.front().first : kInf; }

  void offer(double d2, int id) {
    std::pair<double, int> item{d2, id == self_ ? 0 : id + 1};
    if (!full()) {
      items_.push_back(item);
      std::push_heap(items_.begin(), items_.end());
    } else if (item < items_.front()) {
      std::pop_heap(items_.begin(), items_.end());
      items_.back() = item;
      std::push_heap(items_.begin(), items_.end());
    }
  }

  /// (squared distance, id) pairs in ascending order.
  std::vector<std::pair<double, int>> sorted() {
    std::sort_heap(items_.begin(), items_.end());
    std::vector<std::pair<double, int>> out(items_);
    for (auto& [d2, rank] : out) rank = rank == 0 ? self_ : rank - 1;
    return out;
  }

 private:
  int k_;
  int self_;
  std::vector<std::pair<double, int>> items_;
};

inline void knn_search(const KdTree& tree, int node, const double* q,
                       KnnHeap& heap) {
  const KdNode& nd = tree.node(node);
  if (nd.is_leaf()) {
    for (int p = nd.begin; p < nd.end; ++p)
      heap.offer(squared_distance(q, tree.coords_at(p), tree.dim()),
                 tree.point_id(p));
    return;
  }
  double dl = box_point_distance_sq(tree, nd.left, q);
  double dr = box_point_distance_sq(tree, nd.right, q);
  int first = nd.left, second = nd.right;
  if (dr < dl) {
    std::swap(first, second);
    std::swap(dl, dr);
  }
  // Equal distance may still hold a smaller rank, so only prune on strict >.
  if (!(heap.full() && dl > heap.worst())) knn_search(tree, first, q, heap);
  if (!(heap.full() && dr > heap.worst())) knn_search(tree, second, q, heap);
}

}  // namespace detail

/// Exact all-points k-NN over the tree. Ties are broken by smaller id,
/// except that each point always lists itself first.
inline KnnResult knn(const KdTree& tree, int k) {
  const int n = tree.num_points();
  if (k < 1) throw Error("k must be positive");
  if (k > n) throw Error("k exceeds dataset size");
  KnnResult out;
  out.k = k;
  out.ids.resize(static_cast<std::size_t>(n) * k);
  out.dists.resize(static_cast<std::size_t>(n) * k);
  parallel_for(
      0, n,
      [&](std::size_t pos) {
        detail::KnnHeap heap(k, tree.point_id(static_cast<int>(pos)));
        detail::knn_search(tree, KdTree::root(),
                           tree.coords_at(static_cast<int>(pos)), heap);
        auto best = heap.sorted();
        std::size_t base = static_cast<std::size_t>(tree.point_id(pos)) * k;
        for (int j = 0; j < k; ++j) {
          out.ids[base + j] = best[j].second;
          out.dists[base + j] = std::sqrt(best[j].first);
        }
      },
      256);
  return out;
}

}  // namespace parclust

#endif  // PARCLUST_KNN_HPP_
