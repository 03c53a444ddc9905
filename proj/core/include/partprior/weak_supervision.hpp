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
#include <string>

#include "partprior/grid.hpp"
#include "partprior/prob_map.hpp"
#include "partprior/tri_state_map.hpp"

namespace partprior {

/// Probabilities are clamped to [kProbClamp, 1] before any log.
inline constexpr double kProbClamp = 1e-12;

/// Loss values with the per-pixel gradient. Losses are means per pixel
/// (structure loss over F u B, mask loss over the whole image), so
/// values are comparable across image sizes. The gradient field is
/// d(total)/d(probs) -- the caller owns the softmax backward step.
struct LossReport {
  double structure = 0.0;
  double mask = 0.0;
  bool has_mask = false;
  double w_m = 0.0;
  double total = 0.0;

  PixelField gradient;  // same shape as the prediction, d/d(probs)

  std::int64_t foreground_pixels = 0;
  std::int64_t background_pixels = 0;
  std::int64_t uncertain_pixels = 0;

  /// JSON for the training log: structure, mask, total, w_m and the
  /// per-region pixel counts (no gradient).
  std::string to_json() const;
};

/// Partial cross-entropy over the confident regions F u B; uncertain
/// pixels contribute exactly zero to both value and gradient.
/// Throws ErrorKind::empty_supervision when F u B is empty.
LossReport structure_loss(const ProbMap& pred, const TriStateMap& supervision);

/// Binary cross-entropy between the predicted foreground probability
/// (1 - background class probability) and the full person mask, averaged
/// over all pixels.
LossReport mask_loss(const ProbMap& pred, const FullMask& mask);

/// total = structure + w_m * mask. Pass mask = nullptr for pose-only
/// training; the mask term is then omitted entirely.
LossReport total_loss(const ProbMap& pred, const TriStateMap& supervision,
                      const FullMask* mask, double w_m);

/// Next-round supervision: confident prior pixels (F u B) win, uncertain
/// pixels take the refined label. The result has no uncertain pixels.
TriStateMap fuse_supervision(const TriStateMap& prior,
                             const LabelGrid& refined);

/// One self-paced keep/discard decision, with the draw recorded so runs
/// replay exactly.
struct SelectionDecision {
  double mean_confidence = 0.0;    // f-bar over the supervision's F region
  double discard_probability = 0.0;  // max(0, 2 - exp(f-bar))
  double rng_draw = 0.0;           // uniform [0,1)
  bool kept = true;
  bool empty_foreground = false;   // F empty: kept unconditionally, flagged
};

/// Mean foreground confidence f-bar is the mean over the supervision's F
/// pixels of max over part classes (background excluded) of pred. The
/// sample is discarded when the seeded uniform draw falls below
/// max(0, 2 - exp(f-bar)).
SelectionDecision self_paced_select(const ProbMap& pred,
                                    const TriStateMap& supervision,
                                    std::uint64_t rng_seed);

/// Discard probability curve on its own (handy for tests and logs).
double self_paced_discard_probability(double mean_confidence);

}  // namespace partprior
