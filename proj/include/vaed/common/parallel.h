// Copyright (c) 2026 The vaed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAED_COMMON_PARALLEL_H_
#define VAED_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace vaed {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out by
// an atomic counter; callers write results into pre-sized per-index slots so
// output order never depends on scheduling. The first exception thrown by any
// worker is rethrown on the calling thread.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace vaed

#endif  // VAED_COMMON_PARALLEL_H_
