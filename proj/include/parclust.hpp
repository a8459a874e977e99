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


#ifndef PARCLUST_PARCLUST_HPP_
#define PARCLUST_PARCLUST_HPP_

#include "parclust/app.hpp"
#include "parclust/bccp.hpp"
#include "parclust/common.hpp"
#include "parclust/dendrogram.hpp"
#include "parclust/edge.hpp"
#include "parclust/hdbscan.hpp"
#include "parclust/io.hpp"
#include "parclust/kdtree.hpp"
#include "parclust/knn.hpp"
#include "parclust/mst.hpp"
#include "parclust/parallel.hpp"
#include "parclust/point_set.hpp"
#include "parclust/union_find.hpp"
#include "parclust/wspd.hpp"

#endif  // PARCLUST_PARCLUST_HPP_
