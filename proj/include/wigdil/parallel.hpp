// Copyright 2026 the wigdil authors
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

#ifndef WIGDIL_PARALLEL_HPP
#define WIGDIL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wigdil {

// Worker cap: WIGNER_DILATION_THREADS if set to a positive integer, hardware
// concurrency when unset or 0.
int configured_thread_count();

// Run fn(i) for i in [0, n). Iterations must be independent; results written
// by index are order-stable regardless of the worker count. Exceptions from
// workers are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wigdil

#endif  // WIGDIL_PARALLEL_HPP
