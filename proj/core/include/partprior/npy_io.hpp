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

#include <filesystem>

#include "partprior/prob_map.hpp"

namespace partprior {

/// Class-score maps on disk are NumPy .npy files, shape (H, W, C),
/// little-endian float32, C order. Interoperates with numpy.load/save.
void write_prob_map_npy(const std::filesystem::path& path, const ProbMap& probs);
ProbMap read_prob_map_npy(const std::filesystem::path& path);

}  // namespace partprior
