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

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "partprior/grid.hpp"
#include "partprior/part_class.hpp"

namespace partprior {

/// Per-class intersection-over-union plus its mean. Background is a
/// class like any other; classes absent from both prediction and ground
/// truth carry no IoU and are excluded from the mean.
struct Metrics {
  std::array<std::optional<double>, kNumLabels> per_class_iou{};
  double miou = 0.0;

  std::string to_json() const;
};

/// Streaming confusion counts so a whole dataset aggregates into one
/// Metrics (the standard dataset-global mIoU).
class ConfusionAccumulator {
 public:
  /// Labels must be in 0..6 on both sides.
  /// Throws ErrorKind::dimension_mismatch / schema.
  void add(const LabelGrid& pred, const LabelGrid& gt);

  Metrics finalize() const;

 private:
  std::array<std::int64_t, kNumLabels * kNumLabels> counts_{};
};

/// IoU over a single prediction/ground-truth pair.
Metrics evaluate_miou(const LabelGrid& pred, const LabelGrid& gt);

}  // namespace partprior
