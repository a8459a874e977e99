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

#ifndef PARCLUST_DENDROGRAM_HPP_
#define PARCLUST_DENDROGRAM_HPP_

// Dendrograms over a weighted spanning tree.
//
// Node layout: leaves 0..n-1 are the points; internal node n + r belongs to
// the tree edge of rank r in (weight, u, v) order, so the root is 2n - 2.
// Because edge keys are distinct, the merge tree is unique and only the
// left/right order of children depends on the construction. An ordered
// dendrogram for start vertex s puts the side nearer to s (in hops) on the
// left, which makes its in-order leaf walk the Prim order from s.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "parclust/common.hpp"
#include "parclust/edge.hpp"
#include "parclust/parallel.hpp"
#include "parclust/union_find.hpp"

namespace parclust {

struct DendrogramNode {
  int left = -1;
  int right = -1;
  double height = 0.0;
  int size = 1;
  Edge edge;  // the tree edge whose removal splits this cluster

  bool is_leaf() const { return left < 0; }
};

struct Dendrogram {
  int num_points = 0;
  int root = -1;
  int start = -1;  // start vertex for ordered dendrograms, -1 otherwise
  std::vector<DendrogramNode> nodes;

  bool ordered() const { return start >= 0; }
  const DendrogramNode& operator[](int i) const { return nodes[i]; }
};

struct ReachabilityPlot {
  std::vector<int> order;
  std::vector<double> values;  // values[0] is +inf
};

inline constexpr int kNoise = -1;

struct Clustering {
  double epsilon = 0.0;
  int min_pts = 1;
  int num_clusters = 0;
  std::vector<int> labels;  // kNoise or 0-based id by first appearance
};

struct DendrogramOptions {
  double heavy_fraction = 0.1;      // share of edges treated as heavy
  double sequential_fraction = 0.5; // sequential below this share of n - 1
};

namespace detail {

inline void check_spanning_tree(const SpanningForest& forest) {
  const int n = forest.num_points;
  if (n < 1) throw Error("empty dataset");
  if (static_cast<int>(forest.edges.size()) != n - 1)
    throw Error("disconnected forest: expected n - 1 edges");
  UnionFind uf(n);
  for (const Edge& e : forest.edges) {
    if (e.u < 0 || e.v >= n || e.u == e.v)
      throw Error("edge endpoint out of range");
    if (!uf.unite(e.u, e.v)) throw Error("disconnected forest: cycle found");
  }
}

// Compressed adjacency of a tree on n vertices.
struct Adjacency {
  std::vector<int> offset;
  std::vector<int> target;

  Adjacency(int n, std::span<const Edge> edges) : offset(n + 1, 0) {
    for (const Edge& e : edges) {
      ++offset[e.u + 1];
      ++offset[e.v + 1];
    }
    for (int i = 0; i < n; ++i) offset[i + 1] += offset[i];
    target.resize(offset[n]);
    std::vector<int> fill(offset.begin(), offset.end() - 1);
    for (const Edge& e : edges) {
      target[fill[e.u]++] = e.v;
      target[fill[e.v]++] = e.u;
    }
  }
};

// One edge of a (possibly contracted) subproblem: `rank` indexes the
// key-sorted spanning-tree edges, `near` is the endpoint closer to the
// start vertex.
struct SubEdge {
  int rank;
  int near;
  int far;
};

// Sorted, deduplicated vertex list for local indexing.
inline std::vector<int> subproblem_vertices(std::span<const SubEdge> edges) {
  std::vector<int> vs;
  vs.reserve(2 * edges.size());
  for (const SubEdge& e : edges) {
    vs.push_back(e.near);
    vs.push_back(e.far);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

inline int local_index(const std::vector<int>& vs, int v) {
  return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) -
                          vs.begin());
}

// Bottom-up merge in ascending rank. Vertex x starts as leaf node x (callers
// may later replace that leaf); the near side goes left. Returns the root.
inline int build_bottom_up(std::vector<SubEdge> edges, int n,
                           std::vector<DendrogramNode>& nodes) {
  std::sort(edges.begin(), edges.end(),
            [](const SubEdge& a, const SubEdge& b) { return a.rank < b.rank; });
  std::vector<int> vs = subproblem_vertices(edges);
  UnionFind uf(static_cast<int>(vs.size()));
  std::vector<int> top(vs);
  int root = vs.empty() ? -1 : vs.front();
  for (const SubEdge& e : edges) {
    int a = uf.find(local_index(vs, e.near));
    int b = uf.find(local_index(vs, e.far));
    if (a == b) throw Error("disconnected forest: cycle found");
    int id = n + e.rank;
    nodes[id].left = top[a];
    nodes[id].right = top[b];
    uf.unite(a, b);
    top[uf.find(a)] = id;
    root = id;
  }
  return root;
}

// Light-edge subproblem hanging off vertex `attach`.
struct LightGroup {
  int attach;
  std::vector<SubEdge> edges;
};

struct HeavyLightSplit {
  std::vector<SubEdge> heavy;  // endpoints contracted to component roots
  std::vector<LightGroup> light;
};

// Splits a subproblem into the heavy edges (the top `fraction` by rank,
// at least one, at most m - 1) and the components of the remaining light
// edges. Each light component is rooted at its vertex nearest the start;
// in the heavy subproblem that vertex stands for the whole component.
inline HeavyLightSplit split_heavy_light(std::span<const SubEdge> edges,
                                         double fraction) {
  const std::size_t m = edges.size();
  HeavyLightSplit out;
  if (m < 2) throw Error("heavy/light split needs at least two edges");
  std::size_t h = static_cast<std::size_t>(std::ceil(fraction * m));
  h = std::clamp<std::size_t>(h, 1, m - 1);

  std::vector<int> ranks(m);
  for (std::size_t i = 0; i < m; ++i) ranks[i] = edges[i].rank;
  std::nth_element(ranks.begin(), ranks.begin() + (m - h), ranks.end());
  const int threshold = ranks[m - h];
  auto heavy = [&](const SubEdge& e) { return e.rank >= threshold; };

  // Every vertex except the subproblem root is the far end of exactly one
  // edge: its predecessor edge.
  std::vector<std::pair<int, int>> parent(m);
  for (std::size_t i = 0; i < m; ++i)
    parent[i] = {edges[i].far, static_cast<int>(i)};
  std::sort(parent.begin(), parent.end());
  auto parent_edge = [&](int v) {
    auto it = std::lower_bound(parent.begin(), parent.end(),
                               std::pair<int, int>{v, -1});
    return (it != parent.end() && it->first == v) ? it->second : -1;
  };

  // Component root of each light edge, propagated down predecessor chains.
  std::vector<int> comp_root(m, -1);
  std::vector<int> order;
  order.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    if (!heavy(edges[i])) order.push_back(static_cast<int>(i));
  // Predecessors come first along any root-to-leaf path; resolve lazily.
  std::vector<int> chain;
  for (int i : order) {
    int cur = i;
    while (comp_root[cur] < 0) {
      int pred = parent_edge(edges[cur].near);
      if (pred < 0 || heavy(edges[pred])) {
        comp_root[cur] = edges[cur].near;
        break;
      }
      chain.push_back(cur);
      cur = pred;
    }
    for (int c : chain) comp_root[c] = comp_root[cur];
    chain.clear();
  }

  for (std::size_t i = 0; i < m; ++i) {
    const SubEdge& e = edges[i];
    if (!heavy(e)) continue;
    int pred = parent_edge(e.near);
    int near = (pred >= 0 && !heavy(edges[pred])) ? comp_root[pred] : e.near;
    out.heavy.push_back({e.rank, near, e.far});
  }

  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return comp_root[a] < comp_root[b] ||
           (comp_root[a] == comp_root[b] && edges[a].rank < edges[b].rank);
  });
  for (std::size_t i = 0; i < order.size();) {
    LightGroup g{comp_root[order[i]], {}};
    for (; i < order.size() && comp_root[order[i]] == g.attach; ++i)
      g.edges.push_back(edges[order[i]]);
    out.light.push_back(std::move(g));
  }
  return out;
}

class TopDownBuilder {
 public:
  TopDownBuilder(int n, std::vector<DendrogramNode>& nodes,
                 const DendrogramOptions& opt)
      : n_(n), nodes_(nodes), opt_(opt) {
    cutoff_ = static_cast<std::size_t>(opt.sequential_fraction *
                                       std::max(0, n - 1));
  }

  int solve(std::vector<SubEdge> edges) {
    if (edges.size() <= 1 || edges.size() < cutoff_)
      return build_bottom_up(std::move(edges), n_, nodes_);

    HeavyLightSplit split = split_heavy_light(edges, opt_.heavy_fraction);
    edges = {};
    const std::size_t k = split.light.size();
    std::vector<int> roots(k + 1);
    parallel_for(
        0, k + 1,
        [&](std::size_t i) {
          roots[i] = i == 0 ? solve(std::move(split.heavy))
                            : solve(std::move(split.light[i - 1].edges));
        },
        1);

    // Hang every light dendrogram in place of the heavy-dendrogram leaf of
    // its component root.
    std::vector<std::pair<int, int>> attach(k);
    for (std::size_t i = 0; i < k; ++i)
      attach[i] = {split.light[i].attach, roots[i + 1]};
    std::sort(attach.begin(), attach.end());
    auto replacement = [&](int child) {
      if (child >= n_) return child;
      auto it = std::lower_bound(attach.begin(), attach.end(),
                                 std::pair<int, int>{child, -1});
      return (it != attach.end() && it->first == child) ? it->second : child;
    };
    for (int id : internal_nodes(roots[0])) {
      DendrogramNode& nd = nodes_[id];
      nd.left = replacement(nd.left);
      nd.right = replacement(nd.right);
    }
    return roots[0];
  }

 private:
  // Internal nodes below `root`. Each contracted vertex of the heavy
  // subproblem is exactly one leaf under it.
  std::vector<int> internal_nodes(int root) const {
    std::vector<int> out;
    std::vector<int> stack;
    if (root >= n_) stack.push_back(root);
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      out.push_back(id);
      for (int c : {nodes_[id].left, nodes_[id].right})
        if (c >= n_) stack.push_back(c);
    }
    return out;
  }

  int n_;
  std::vector<DendrogramNode>& nodes_;
  DendrogramOptions opt_;
  std::size_t cutoff_ = 0;
};

inline Dendrogram finish(const SpanningForest& forest,
                         const std::vector<Edge>& sorted,
                         std::vector<DendrogramNode> nodes, int start) {
  const int n = forest.num_points;
  Dendrogram d;
  d.num_points = n;
  d.start = start;
  for (int r = 0; r < n - 1; ++r) {
    DendrogramNode& nd = nodes[n + r];
    nd.edge = sorted[r];
    nd.height = sorted[r].weight;
    nd.size = nodes[nd.left].size + nodes[nd.right].size;
  }
  d.nodes = std::move(nodes);
  d.root = n == 1 ? 0 : 2 * n - 2;
  return d;
}

}  // namespace detail

/// Unweighted hop count from `start` to every vertex of the spanning tree.
inline std::vector<int> vertex_distances(const SpanningForest& forest,
                                         int start) {
  const int n = forest.num_points;
  if (start < 0 || start >= n) throw Error("start vertex out of range");
  detail::Adjacency adj(n, forest.edges);
  std::vector<int> dist(n, -1);
  std::vector<int> queue{start};
  dist[start] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (int i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
      int y = adj.target[i];
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

/// Bottom-up agglomerative dendrogram: merges along edges in ascending key
/// order. Without a start vertex the children are in (u, v) order; with one
/// the result is the ordered dendrogram.
inline Dendrogram dendrogram_sequential(const SpanningForest& forest,
                                        int start = -1) {
  detail::check_spanning_tree(forest);
  const int n = forest.num_points;
  std::vector<Edge> sorted = forest.sorted_edges();
  std::vector<int> vd;
  if (start >= 0) vd = vertex_distances(forest, start);
  std::vector<detail::SubEdge> edges(n - 1);
  for (int r = 0; r < n - 1; ++r) {
    const Edge& e = sorted[r];
    bool swap = start >= 0 && vd[e.v] < vd[e.u];
    edges[r] = {r, swap ? e.v : e.u, swap ? e.u : e.v};
  }
  std::vector<DendrogramNode> nodes(2 * static_cast<std::size_t>(n) - 1);
  detail::build_bottom_up(std::move(edges), n, nodes);
  return detail::finish(forest, sorted, std::move(nodes), start);
}

/// Top-down ordered dendrogram for start vertex `start`. Each level splits
/// the current edges into heavy and light edges, solves the heavy
/// subproblem and every light component in parallel, and hangs the light
/// dendrograms under the heavy one. Small subproblems are built bottom-up.
inline Dendrogram dendrogram_parallel(const SpanningForest& forest, int start,
                                      const DendrogramOptions& opt = {}) {
  detail::check_spanning_tree(forest);
  if (!(opt.heavy_fraction > 0.0 && opt.heavy_fraction < 1.0))
    throw Error("heavy fraction must lie in (0, 1)");
  const int n = forest.num_points;
  std::vector<int> vd = vertex_distances(forest, start);
  std::vector<Edge> sorted = forest.sorted_edges();
  std::vector<detail::SubEdge> edges(n - 1);
  parallel_for(0, static_cast<std::size_t>(n - 1), [&](std::size_t r) {
    const Edge& e = sorted[r];
    bool swap = vd[e.v] < vd[e.u];
    edges[r] = {static_cast<int>(r), swap ? e.v : e.u, swap ? e.u : e.v};
  });
  std::vector<DendrogramNode> nodes(2 * static_cast<std::size_t>(n) - 1);
  detail::TopDownBuilder(n, nodes, opt).solve(std::move(edges));
  return detail::finish(forest, sorted, std::move(nodes), start);
}

/// Leaves of an ordered dendrogram in in-order; each value is the height of
/// the internal node passed just before the leaf (its Prim attachment
/// weight), +inf for the first leaf.
inline ReachabilityPlot reachability_plot(const Dendrogram& d) {
  if (!d.ordered()) throw Error("reachability plot needs an ordered dendrogram");
  ReachabilityPlot plot;
  plot.order.reserve(d.num_points);
  plot.values.reserve(d.num_points);
  double pending = kInf;
  std::vector<int> stack;
  int cur = d.root;
  while (cur >= 0 || !stack.empty()) {
    while (cur >= 0) {
      stack.push_back(cur);
      cur = d.nodes[cur].left;
    }
    int id = stack.back();
    stack.pop_back();
    const DendrogramNode& nd = d.nodes[id];
    if (nd.is_leaf()) {
      plot.order.push_back(id);
      plot.values.push_back(pending);
    } else {
      pending = nd.height;
    }
    cur = nd.right;
  }
  return plot;
}

/// DBSCAN* clusters at radius epsilon: components of tree edges with
/// weight <= epsilon. A point whose core distance exceeds epsilon is noise;
/// since every edge weighs at least both endpoint core distances, such a
/// point is always a singleton.
inline Clustering cut(const Dendrogram& d, std::span<const double> core,
                      double epsilon, int min_pts = 1) {
  if (!(epsilon >= 0.0)) throw Error("epsilon must be non-negative");
  const int n = d.num_points;
  if (static_cast<int>(core.size()) != n)
    throw Error("core distance count does not match the dendrogram");
  std::vector<int> component(n, kNoise);
  int next = 0;
  std::vector<int> stack{d.root};
  std::vector<int> inner;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const DendrogramNode& nd = d.nodes[id];
    if (nd.is_leaf()) {
      if (core[id] <= epsilon) component[id] = next++;
      continue;
    }
    if (nd.height > epsilon) {
      stack.push_back(nd.right);
      stack.push_back(nd.left);
      continue;
    }
    const int c = next++;
    inner.push_back(id);
    while (!inner.empty()) {
      int x = inner.back();
      inner.pop_back();
      if (d.nodes[x].is_leaf()) {
        component[x] = c;
      } else {
        inner.push_back(d.nodes[x].left);
        inner.push_back(d.nodes[x].right);
      }
    }
  }
  Clustering out;
  out.epsilon = epsilon;
  out.min_pts = min_pts;
  out.labels.assign(n, kNoise);
  std::vector<int> rename(next, -1);
  for (int i = 0; i < n; ++i) {
    int c = component[i];
    if (c == kNoise) continue;
    if (rename[c] < 0) rename[c] = out.num_clusters++;
    out.labels[i] = rename[c];
  }
  return out;
}

}  // namespace parclust

#endif  // PARCLUST_DENDROGRAM_HPP_
