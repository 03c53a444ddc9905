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
#include <filesystem>

namespace partprior {

/// Procedural corpus of articulated stick figures. Each sample carries
/// an RGB image (1-3 figures, part-correlated noisy colors on a
/// textured background), dense ground-truth part labels, the binary
/// person mask and 14-joint keypoints. Part colors are Gaussian
/// families with deliberate overlaps (head vs lower arm, the two leg
/// segments) so appearance alone cannot separate every class.
struct SynthConfig {
  int n_train = 200;
  int n_test = 50;
  int width = 96;
  int height = 96;
  std::uint64_t seed = 17;
  double occlusion_rate = 0.3;       // chance extra figures crowd a previous one
  double missing_joint_rate = 0.05;  // per-joint annotation dropout
};

/// Writes out_dir/{train,test}/{images,gt_masks,full_masks,poses.json}.
/// Deterministic: the same config produces byte-identical trees.
/// Throws ErrorKind::invalid_config / io.
void generate_synthetic_corpus(const SynthConfig& config,
                               const std::filesystem::path& out_dir);

}  // namespace partprior
