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

#ifndef PARCLUST_PARALLEL_HPP_
#define PARCLUST_PARALLEL_HPP_

// Thin fork-join layer over oneTBB. All parallel phases in the library go
// through these helpers so that a single task arena controls the worker
// count.

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include <tbb/global_control.h>
#include <tbb/blocked_range.h>
#include <tbb/enumerable_thread_specific.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_invoke.h>
#include <tbb/parallel_sort.h>
#include <tbb/task_arena.h>

namespace parclust {

/// Worker count used when the caller does not pass one: the
/// PARCLUST_NUM_THREADS environment variable if set and positive, otherwise
/// the hardware concurrency.
inline int default_num_threads() {
  if (const char* env = std::getenv("PARCLUST_NUM_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs `fn` inside a task arena with exactly `threads` worker slots. The
/// global worker limit is raised as needed, so asking for more threads
/// than cores oversubscribes instead of silently running fewer.
template <class Fn>
decltype(auto) with_threads(int threads, Fn&& fn) {
  if (threads <= 0) threads = default_num_threads();
  tbb::global_control limit(tbb::global_control::max_allowed_parallelism,
                            static_cast<std::size_t>(threads));
  tbb::task_arena arena(threads);
  if constexpr (std::is_void_v<std::invoke_result_t<Fn>>) {
    arena.execute(std::forward<Fn>(fn));
  } else {
    return arena.execute(std::forward<Fn>(fn));
  }
}

inline int current_num_threads() {
  return tbb::this_task_arena::max_concurrency();
}

/// Fork-join of two closures; runs them inline when `parallel` is false.
template <class Left, class Right>
void par_do(bool parallel, Left&& left, Right&& right) {
  if (parallel) {
    tbb::parallel_invoke(std::forward<Left>(left), std::forward<Right>(right));
  } else {
    left();
    right();
  }
}

template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn,
                  std::size_t grain = 1024) {
  if (end <= begin) return;
  if (end - begin <= grain) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(begin, end, grain),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
                    });
}

template <class It, class Cmp>
void parallel_sort(It first, It last, Cmp cmp) {
  tbb::parallel_sort(first, last, cmp);
}

/// Priority concurrent write: `target` ends up holding the minimum of all
/// values written to it.
inline void write_min(std::atomic<double>& target, double value) {
  double cur = target.load(std::memory_order_relaxed);
  while (value < cur &&
         !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

/// Per-thread append buffers, flattened on demand. Callers that need a
/// thread-count-independent order must sort the result.
template <class T>
class ConcurrentBuffer {
 public:
  void push(const T& value) { local_.local().push_back(value); }

  std::vector<T> flatten() {
    std::size_t total = 0;
    for (auto& v : local_) total += v.size();
    std::vector<T> out;
    out.reserve(total);
    for (auto& v : local_) out.insert(out.end(), v.begin(), v.end());
    local_.clear();
    return out;
  }

 private:
  tbb::enumerable_thread_specific<std::vector<T>> local_;
};

}  // namespace parclust

#endif  // PARCLUST_PARALLEL_HPP_
