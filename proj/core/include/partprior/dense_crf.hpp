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

#include "partprior/image.hpp"
#include "partprior/prob_map.hpp"

namespace partprior {

/// Fully connected pairwise CRF parameters: a bilateral appearance
/// kernel (spatial width theta_alpha in pixels, range width theta_beta
/// on the 0..255 RGB scale) and a spatial smoothness kernel
/// (theta_gamma). Potts label compatibility.
struct CrfParams {
  double w_app = 10.0;
  double theta_alpha = 80.0;
  double theta_beta = 13.0;
  double w_smooth = 3.0;
  double theta_gamma = 3.0;
  int iterations = 10;

  /// When true, message passing only visits neighbours within a radius
  /// chosen so the truncated result provably stays within 1e-7 of the
  /// exact sum. A speedup only when the spatial widths are small
  /// relative to the image; otherwise it degenerates to the full sum.
  bool truncated = false;
};

/// Parallel mean-field inference. Q starts from the unary distribution;
/// each update gathers Potts-compatibility messages under both kernels
/// (self-messages excluded), adds the negative log unaries, and
/// renormalizes with a softmax. Zero-weight kernels and zero iterations
/// return the unary unchanged.
/// Throws ErrorKind::dimension_mismatch when shapes disagree.
ProbMap meanfield_refine(const ProbMap& unary, const RgbImage& image,
                         const CrfParams& params);

}  // namespace partprior
