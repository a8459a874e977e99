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

#ifndef PARCLUST_MST_HPP_
#define PARCLUST_MST_HPP_

// Minimum spanning trees over the edges implied by a well-separated pair
// decomposition: the naive pipeline, filtered Kruskal (GFK) over a
// materialized decomposition, and the memory-optimized variant (MemoGFK)
// that re-traverses the tree every round and materializes only the pairs
// in the current weight window.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include <tbb/parallel_reduce.h>

#include "parclust/bccp.hpp"
#include "parclust/common.hpp"
#include "parclust/edge.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/parallel.hpp"
#include "parclust/union_find.hpp"
#include "parclust/wspd.hpp"

namespace parclust {

enum class BetaSchedule { doubling, increment };

struct MstStats {
  int rounds = 0;
  std::size_t total_pairs = 0;         // materialized decomposition size
  std::size_t peak_materialized = 0;   // most pairs held at once
  std::size_t bccp_calls = 0;
  std::size_t filtered_pairs = 0;      // dropped without a fresh BCCP
  double traversal_seconds = 0.0;      // decomposition / GetRho / GetPairs
  double bccp_seconds = 0.0;
  double kruskal_seconds = 0.0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void check_metric(const KdTree& tree, const SeparationPredicate& pred,
                         Metric metric) {
  if (metric == Metric::mutual_reachability && !tree.has_core_distances())
    throw Error("inconsistent metric/pair combination: core distances missing");
  if (pred.mode == SeparationMode::hdbscan &&
      metric != Metric::mutual_reachability)
    throw Error(
        "inconsistent metric/pair combination: hdbscan separation needs the "
        "mutual reachability metric");
}

}  // namespace detail

/// Lower and upper bounds on every cross-pair weight of a node pair under
/// the active metric. The lower bound uses bounding boxes rather than
/// spheres: child boxes nest inside the parent's, so the bound never drops
/// from a pair to the pairs below it and pruned searches for its minimum
/// stay exact.
struct PairBounds {
  const KdTree& tree;
  Metric metric;

  double lower(int a, int b) const {
    double d = std::sqrt(box_distance_sq(tree, a, b));
    if (metric == Metric::mutual_reachability)
      d = std::max({d, tree.node(a).cd_min, tree.node(b).cd_min});
    return d;
  }
  double upper(int a, int b) const {
    double d = node_max_distance(tree, a, b);
    if (metric == Metric::mutual_reachability)
      d = std::max({d, tree.node(a).cd_max, tree.node(b).cd_max});
    return d;
  }
};

/// Per-node component id: the union-find root shared by every point of the
/// node, or -1 if the node spans several components. Snapshotted once per
/// round, while no unions are in flight.
class ComponentLabels {
 public:
  ComponentLabels(const KdTree& tree, const UnionFind& uf)
      : label_(tree.num_nodes(), -1) {
    fill(tree, uf, KdTree::root());
  }

  int operator[](int node) const { return label_[node]; }

  /// Every point of a and b lies in one component.
  bool connected(int a, int b) const {
    return label_[a] >= 0 && label_[a] == label_[b];
  }

 private:
  void fill(const KdTree& tree, const UnionFind& uf, int i) {
    const KdNode& nd = tree.node(i);
    if (nd.is_leaf()) {
      int c = uf.find_readonly(tree.point_id(nd.begin));
      for (int p = nd.begin + 1; p < nd.end && c >= 0; ++p)
        if (uf.find_readonly(tree.point_id(p)) != c) c = -1;
      label_[i] = c;
      return;
    }
    par_do(
        nd.size() > 8192, [&] { fill(tree, uf, nd.left); },
        [&] { fill(tree, uf, nd.right); });
    int l = label_[nd.left];
    label_[i] = (l >= 0 && l == label_[nd.right]) ? l : -1;
  }

  std::vector<int> label_;
};

/// Sorts the batch by edge key and accepts every edge that joins two
/// components. Unions are applied sequentially. Returns the number accepted.
inline std::size_t kruskal_batch(std::vector<Edge> edges, UnionFind& uf,
                                 SpanningForest& out) {
  parallel_sort(edges.begin(), edges.end(), std::less<>());
  std::size_t accepted = 0;
  for (const Edge& e : edges) {
    if (uf.unite(e.u, e.v)) {
      out.edges.push_back(e);
      ++accepted;
    }
  }
  return accepted;
}

/// Fills the cached edge of every pair that lacks one.
inline void compute_pair_edges(const KdTree& tree, std::span<WspdPair> pairs,
                               Metric metric, MstStats* stats = nullptr) {
  std::atomic<std::size_t> calls{0};
  parallel_for(
      0, pairs.size(),
      [&](std::size_t i) {
        if (pairs[i].edge.valid()) return;
        pairs[i].edge = bccp(tree, pairs[i].a, pairs[i].b, metric);
        calls.fetch_add(1, std::memory_order_relaxed);
      },
      16);
  if (stats) stats->bccp_calls += calls.load();
}

/// Builds the full decomposition, computes the closest pair of every pair,
/// and runs Kruskal on the resulting edges.
inline SpanningForest mst_naive(const KdTree& tree,
                                const SeparationPredicate& pred, Metric metric,
                                MstStats* stats = nullptr) {
  detail::check_metric(tree, pred, metric);
  SpanningForest forest;
  forest.num_points = tree.num_points();
  if (tree.num_points() < 2) return forest;
  MstStats local;
  detail::Stopwatch t0;
  std::vector<WspdPair> pairs = wspd(tree, pred);
  local.traversal_seconds = t0.seconds();
  local.total_pairs = local.peak_materialized = pairs.size();
  detail::Stopwatch t1;
  compute_pair_edges(tree, pairs, metric, &local);
  local.bccp_seconds = t1.seconds();
  std::vector<Edge> edges(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) edges[i] = pairs[i].edge;
  detail::Stopwatch t2;
  UnionFind uf(tree.num_points());
  kruskal_batch(std::move(edges), uf, forest);
  local.kruskal_seconds = t2.seconds();
  local.rounds = 1;
  if (stats) *stats = local;
  return forest;
}

inline SpanningForest emst_naive(const KdTree& tree,
                                 MstStats* stats = nullptr) {
  return mst_naive(tree, SeparationPredicate::standard(), Metric::euclidean,
                   stats);
}

/// Filtered Kruskal over a materialized decomposition. Each round handles
/// pairs of cardinality at most beta whose closest pair is no heavier than
/// the smallest lower bound among the larger pairs, then drops every pair
/// whose two sides are already connected. Closest pairs are cached on the
/// pairs themselves.
inline SpanningForest gfk(const KdTree& tree, std::vector<WspdPair> pairs,
                          const SeparationPredicate& pred, Metric metric,
                          MstStats* stats = nullptr,
                          BetaSchedule schedule = BetaSchedule::doubling) {
  detail::check_metric(tree, pred, metric);
  const int n = tree.num_points();
  SpanningForest forest;
  forest.num_points = n;
  MstStats local;
  local.total_pairs = local.peak_materialized = pairs.size();
  UnionFind uf(n);
  PairBounds bounds{tree, metric};
  long long beta = 2;
  while (!forest.complete()) {
    if (pairs.empty()) throw Error("pair set exhausted before spanning tree");
    ++local.rounds;
    auto mid = std::stable_partition(
        pairs.begin(), pairs.end(), [&](const WspdPair& p) {
          return pair_cardinality(tree, p.a, p.b) <= beta;
        });
    const std::size_t n_low = static_cast<std::size_t>(mid - pairs.begin());

    detail::Stopwatch tb;
    double rho_hi = tbb::parallel_reduce(
        tbb::blocked_range<std::size_t>(n_low, pairs.size(), 1024), kInf,
        [&](const tbb::blocked_range<std::size_t>& r, double acc) {
          for (std::size_t i = r.begin(); i != r.end(); ++i)
            acc = std::min(acc, bounds.lower(pairs[i].a, pairs[i].b));
          return acc;
        },
        [](double x, double y) { return std::min(x, y); });
    compute_pair_edges(tree, std::span(pairs).first(n_low), metric, &local);
    local.bccp_seconds += tb.seconds();

    detail::Stopwatch tk;
    std::vector<Edge> batch;
    std::vector<WspdPair> rest;
    rest.reserve(pairs.size());
    for (std::size_t i = 0; i < n_low; ++i) {
      if (pairs[i].edge.weight <= rho_hi)
        batch.push_back(pairs[i].edge);
      else
        rest.push_back(pairs[i]);
    }
    rest.insert(rest.end(), mid, pairs.end());
    kruskal_batch(std::move(batch), uf, forest);

    ComponentLabels labels(tree, uf);
    std::size_t before = rest.size();
    std::erase_if(rest, [&](const WspdPair& p) {
      return labels.connected(p.a, p.b);
    });
    local.filtered_pairs += before - rest.size();
    pairs = std::move(rest);
    local.kruskal_seconds += tk.seconds();
    beta = schedule == BetaSchedule::doubling ? beta * 2 : beta + 1;
  }
  if (stats) *stats = local;
  return forest;
}

/// Smallest lower bound over the not-yet-connected well-separated pairs of
/// cardinality greater than beta, or +inf if there is none.
inline double get_rho(const KdTree& tree, const SeparationPredicate& pred,
                      Metric metric, long long beta,
                      const ComponentLabels& labels) {
  detail::check_wspd_preconditions(tree, pred);
  struct Rho {
    const KdTree& tree;
    const SeparationPredicate& pred;
    PairBounds bounds;
    long long beta;
    const ComponentLabels& labels;
    std::atomic<double> rho{kInf};

    bool prune_node(int a) const {
      return tree.node(a).size() <= beta || labels[a] >= 0;
    }
    bool prune_pair(int p, int q) const {
      return pair_cardinality(tree, p, q) <= beta ||
             labels.connected(p, q) ||
             bounds.lower(p, q) >= rho.load(std::memory_order_relaxed);
    }
    bool separated(int p, int q) const {
      return is_well_separated(tree, p, q, pred);
    }
    void emit(int p, int q) { write_min(rho, bounds.lower(p, q)); }
  } vis{tree, pred, PairBounds{tree, metric}, beta, labels};
  traverse_wspd(tree, vis);
  return vis.rho.load();
}

inline double get_rho(const KdTree& tree, const SeparationPredicate& pred,
                      Metric metric, long long beta, const UnionFind& uf) {
  return get_rho(tree, pred, metric, beta, ComponentLabels(tree, uf));
}

/// Well-separated pairs with cardinality at most beta, sides not yet
/// connected, and closest-pair weight in [rho_lo, rho_hi). Returned pairs
/// carry their closest-pair edge and are sorted by (a, b).
inline std::vector<WspdPair> get_pairs(const KdTree& tree,
                                       const SeparationPredicate& pred,
                                       Metric metric, long long beta,
                                       double rho_lo, double rho_hi,
                                       const ComponentLabels& labels,
                                       MstStats* stats = nullptr) {
  detail::check_wspd_preconditions(tree, pred);
  if (rho_lo > rho_hi) throw Error("rho_lo exceeds rho_hi");
  struct Pairs {
    const KdTree& tree;
    const SeparationPredicate& pred;
    PairBounds bounds;
    Metric metric;
    long long beta;
    double lo, hi;
    const ComponentLabels& labels;
    ConcurrentBuffer<WspdPair> out;
    std::atomic<std::size_t> calls{0};

    bool prune_node(int a) const { return labels[a] >= 0; }
    bool prune_pair(int p, int q) const {
      return labels.connected(p, q) || bounds.lower(p, q) >= hi ||
             bounds.upper(p, q) < lo;
    }
    bool separated(int p, int q) const {
      return is_well_separated(tree, p, q, pred);
    }
    void emit(int p, int q) {
      if (pair_cardinality(tree, p, q) > beta) return;
      calls.fetch_add(1, std::memory_order_relaxed);
      Edge e = bccp(tree, p, q, metric);
      if (e.weight >= lo && e.weight < hi) {
        WspdPair pair(p, q);
        pair.edge = e;
        out.push(pair);
      }
    }
  } vis{tree, pred, PairBounds{tree, metric}, metric, beta, rho_lo, rho_hi,
        labels, {}};
  traverse_wspd(tree, vis);
  if (stats) stats->bccp_calls += vis.calls.load();
  std::vector<WspdPair> pairs = vis.out.flatten();
  parallel_sort(pairs.begin(), pairs.end(), std::less<>());
  return pairs;
}

inline std::vector<WspdPair> get_pairs(const KdTree& tree,
                                       const SeparationPredicate& pred,
                                       Metric metric, long long beta,
                                       double rho_lo, double rho_hi,
                                       const UnionFind& uf) {
  return get_pairs(tree, pred, metric, beta, rho_lo, rho_hi,
                   ComponentLabels(tree, uf));
}

/// Memory-optimized filtered Kruskal. Each round computes rho_hi with one
/// pruned traversal, retrieves only the pairs whose closest pair falls in
/// [rho_lo, rho_hi) with a second, and feeds them to Kruskal.
inline SpanningForest memogfk(const KdTree& tree,
                              const SeparationPredicate& pred, Metric metric,
                              MstStats* stats = nullptr,
                              BetaSchedule schedule = BetaSchedule::doubling) {
  detail::check_metric(tree, pred, metric);
  detail::check_wspd_preconditions(tree, pred);
  const int n = tree.num_points();
  SpanningForest forest;
  forest.num_points = n;
  MstStats local;
  UnionFind uf(n);
  long long beta = 2;
  double rho_lo = 0.0;
  while (!forest.complete()) {
    ++local.rounds;
    detail::Stopwatch tt;
    ComponentLabels labels(tree, uf);
    double rho_hi = get_rho(tree, pred, metric, beta, labels);
    std::vector<WspdPair> pairs =
        get_pairs(tree, pred, metric, beta, rho_lo, rho_hi, labels, &local);
    local.traversal_seconds += tt.seconds();
    local.peak_materialized = std::max(local.peak_materialized, pairs.size());

    detail::Stopwatch tk;
    std::vector<Edge> batch(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) batch[i] = pairs[i].edge;
    kruskal_batch(std::move(batch), uf, forest);
    local.kruskal_seconds += tk.seconds();

    if (rho_hi == kInf && !forest.complete())
      throw Error("unbounded round left the spanning tree incomplete");
    beta = schedule == BetaSchedule::doubling ? beta * 2 : beta + 1;
    rho_lo = rho_hi;
  }
  if (stats) *stats = local;
  return forest;
}

/// EMST through memogfk with the standard predicate.
inline SpanningForest emst(const KdTree& tree, MstStats* stats = nullptr) {
  return memogfk(tree, SeparationPredicate::standard(), Metric::euclidean,
                 stats);
}

}  // namespace parclust

#endif  // PARCLUST_MST_HPP_
