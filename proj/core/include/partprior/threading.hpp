// Copyright 2026 The PartPrior Authors
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

#include <cstdint>
#include <functional>

namespace partprior {

/// Worker cap: PARTPRIOR_THREADS when set (floored at 1), otherwise the
/// hardware concurrency.
int worker_count();

/// Run fn(i) for i in [0, n) on up to worker_count() threads. Results
/// must be written to per-index slots; the sweep carries no ordering
/// guarantees beyond completion.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace partprior
