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

#ifndef PARCLUST_POINT_SET_HPP_
#define PARCLUST_POINT_SET_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parclust/common.hpp"

namespace parclust {

/// A set of n points in d dimensions stored row-major. Point i has id i.
class PointSet {
 public:
  PointSet() = default;

  PointSet(int dim, std::vector<double> coords)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim_ <= 0) throw Error("dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
      throw Error("coordinate count is not a multiple of the dimension");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (!std::isfinite(coords_[i]))
        throw Error("invalid coordinate at point " +
                    std::to_string(i / static_cast<std::size_t>(dim_)));
    }
  }

  int dim() const { return dim_; }
  int size() const {
    return dim_ == 0 ? 0 : static_cast<int>(coords_.size() / dim_);
  }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

inline double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(
      squared_distance(a.data(), b.data(), static_cast<int>(a.size())));
}

}  // namespace parclust

#endif  // PARCLUST_POINT_SET_HPP_
