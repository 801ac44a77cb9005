// Copyright 2026 The kirchfrac Authors
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

#pragma once

#include <functional>
#include <vector>

namespace kirchfrac {

/// Worker threads used by cell-pair sweeps. Results do not depend on it: work
/// is split into a fixed set of blocks reduced in a fixed pairwise order.
void set_thread_count(int threads);
int thread_count();

/// Calls fn(block) for every block in [0, blocks), possibly concurrently.
void parallel_for_blocks(int blocks, const std::function<void(int)>& fn);

/// Pairwise tree reduction of `parts` in index order; `add(a, b)` accumulates
/// b into a.
template <class T, class Add>
T pairwise_reduce(std::vector<T> parts, Add add) {
  if (parts.empty()) return T{};
  for (std::size_t width = 1; width < parts.size(); width *= 2) {
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) {
      add(parts[i], parts[i + width]);
    }
  }
  return std::move(parts.front());
}

inline double pairwise_sum(std::vector<double> parts) {
  return pairwise_reduce(std::move(parts), [](double& a, const double& b) { a += b; });
}

}  // namespace kirchfrac
