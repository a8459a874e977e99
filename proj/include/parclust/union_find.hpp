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

#ifndef PARCLUST_UNION_FIND_HPP_
#define PARCLUST_UNION_FIND_HPP_

#include <numeric>
#include <utility>
#include <vector>

namespace parclust {

/// Union by rank. `find` compresses paths and must not race with anything;
/// `find_readonly` only reads and is safe to call from many threads while
/// no union is in flight.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(int n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int components() const { return components_; }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  int find_readonly(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool connected(int a, int b) { return find(a) == find(b); }

  /// Merges the components of a and b. Returns false if already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int components_ = 0;
};

}  // namespace parclust

#endif  // PARCLUST_UNION_FIND_HPP_
