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

#ifndef PARCLUST_WSPD_HPP_
#define PARCLUST_WSPD_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <utility>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/edge.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/parallel.hpp"

namespace parclust {

enum class SeparationMode { standard, hdbscan };

/// Which node pairs count as well-separated.
///
/// standard: the sphere gap is at least s times the larger radius (for
/// s = 2, at least the larger diameter).
/// hdbscan: geometrically separated, mutually unreachable, or both. Needs
/// core-distance bounds on the tree.
struct SeparationPredicate {
  SeparationMode mode = SeparationMode::standard;
  double s = 2.0;

  static SeparationPredicate standard(double s = 2.0) {
    return {SeparationMode::standard, s};
  }
  static SeparationPredicate hdbscan(double s = 2.0) {
    return {SeparationMode::hdbscan, s};
  }
};

/// A well-separated pair of tree nodes, a < b. `edge` caches the closest
/// pair once computed (invalid until then).
struct WspdPair {
  int a = -1;
  int b = -1;
  Edge edge;

  WspdPair() = default;
  WspdPair(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}

  friend bool operator<(const WspdPair& l, const WspdPair& r) {
    return l.a < r.a || (l.a == r.a && l.b < r.b);
  }
};

inline int pair_cardinality(const KdTree& tree, int a, int b) {
  return tree.node(a).size() + tree.node(b).size();
}

inline bool is_geometrically_separated(const KdTree& tree, int a, int b,
                                       double s = 2.0) {
  double r = std::max(tree.node(a).radius, tree.node(b).radius);
  return node_distance(tree, a, b) >= s * r;
}

inline bool is_mutually_unreachable(const KdTree& tree, int a, int b) {
  if (!tree.has_core_distances()) throw Error("core distances missing");
  const KdNode& na = tree.node(a);
  const KdNode& nb = tree.node(b);
  double lhs = std::max({node_distance(tree, a, b), na.cd_min, nb.cd_min});
  double rhs = std::max({na.diam(), nb.diam(), na.cd_max, nb.cd_max});
  return lhs >= rhs;
}

inline bool is_well_separated(const KdTree& tree, int a, int b,
                              const SeparationPredicate& pred) {
  if (is_geometrically_separated(tree, a, b, pred.s)) return true;
  return pred.mode == SeparationMode::hdbscan &&
         is_mutually_unreachable(tree, a, b);
}

namespace detail {

inline constexpr int kTraversalGrain = 2048;

// True if `q` should be split before `p`: larger diameter, ties to the
// smaller node id.
inline bool split_first(const KdTree& tree, int q, int p) {
  double dq = tree.node(q).diam(), dp = tree.node(p).diam();
  return dq > dp || (dq == dp && q < p);
}

// Generic pair-finding traversal. A visitor supplies
//   bool prune_node(int a)          skip all pairs inside subtree a
//   bool prune_pair(int p, int q)   skip (p, q) and everything below it
//   bool separated(int p, int q)
//   void emit(int p, int q)         called for separated, unpruned pairs
// and must be safe to call concurrently.
template <class Visitor>
void find_pair(const KdTree& tree, int p, int q, Visitor& vis) {
  if (split_first(tree, q, p)) std::swap(p, q);
  if (vis.prune_pair(p, q)) return;
  if (vis.separated(p, q)) {
    vis.emit(p, q);
    return;
  }
  const KdNode& np = tree.node(p);
  par_do(
      pair_cardinality(tree, p, q) > kTraversalGrain,
      [&] { find_pair(tree, np.left, q, vis); },
      [&] { find_pair(tree, np.right, q, vis); });
}

template <class Visitor>
void traverse_node(const KdTree& tree, int a, Visitor& vis) {
  const KdNode& na = tree.node(a);
  if (na.is_leaf() || vis.prune_node(a)) return;
  par_do(
      na.size() > kTraversalGrain,
      [&] { traverse_node(tree, na.left, vis); },
      [&] { traverse_node(tree, na.right, vis); });
  find_pair(tree, na.left, na.right, vis);
}

inline void check_wspd_preconditions(const KdTree& tree,
                                     const SeparationPredicate& pred) {
  if (tree.leaf_capacity() != 1)
    throw Error("pair decomposition needs a tree with one point per leaf");
  if (pred.mode == SeparationMode::hdbscan && !tree.has_core_distances())
    throw Error("core distances missing");
}

}  // namespace detail

/// Runs the decomposition traversal over the whole tree with a custom
/// visitor.
template <class Visitor>
void traverse_wspd(const KdTree& tree, Visitor& vis) {
  detail::traverse_node(tree, KdTree::root(), vis);
}

/// Well-separated pair decomposition of all points in the tree. Each
/// unordered point pair is covered by exactly one returned pair. The result
/// is sorted by (a, b) and does not depend on the thread count.
inline std::vector<WspdPair> wspd(const KdTree& tree,
                                  const SeparationPredicate& pred) {
  detail::check_wspd_preconditions(tree, pred);
  struct Collect {
    const KdTree& tree;
    const SeparationPredicate& pred;
    ConcurrentBuffer<WspdPair> out;
    bool prune_node(int) const { return false; }
    bool prune_pair(int, int) const { return false; }
    bool separated(int p, int q) const {
      return is_well_separated(tree, p, q, pred);
    }
    void emit(int p, int q) { out.push(WspdPair(p, q)); }
  } vis{tree, pred, {}};
  traverse_wspd(tree, vis);
  std::vector<WspdPair> pairs = vis.out.flatten();
  parallel_sort(pairs.begin(), pairs.end(), std::less<>());
  return pairs;
}

/// Number of pairs wspd() would return, without materializing them.
inline std::size_t wspd_count(const KdTree& tree,
                              const SeparationPredicate& pred) {
  detail::check_wspd_preconditions(tree, pred);
  struct Count {
    const KdTree& tree;
    const SeparationPredicate& pred;
    std::atomic<std::size_t> count{0};
    bool prune_node(int) const { return false; }
    bool prune_pair(int, int) const { return false; }
    bool separated(int p, int q) const {
      return is_well_separated(tree, p, q, pred);
    }
    void emit(int, int) { count.fetch_add(1, std::memory_order_relaxed); }
  } vis{tree, pred};
  traverse_wspd(tree, vis);
  return vis.count.load();
}

}  // namespace parclust

#endif  // PARCLUST_WSPD_HPP_
