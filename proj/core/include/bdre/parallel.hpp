// Copyright 2026 The bdre Authors.
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

#ifndef BDRE_PARALLEL_HPP_
#define BDRE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace bdre {

// Worker count: BDRE_NUM_WORKERS if set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t worker_count();

// Calls body(i) for i in [0, n) on up to worker_count() threads. Work is
// split into contiguous blocks; callers write results into slots indexed by
// i so the outcome does not depend on the thread layout. The first
// exception (lowest block) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bdre

#endif  // BDRE_PARALLEL_HPP_
