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

#ifndef PARCLUST_COMMON_HPP_
#define PARCLUST_COMMON_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace parclust {

// Every recoverable failure in the library is reported as a parclust::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace parclust

#endif  // PARCLUST_COMMON_HPP_
