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

#include "partprior/metrics.hpp"

#include <sstream>

#include "partprior/errors.hpp"

namespace partprior {

std::string Metrics::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"miou\":" << miou << ",\"per_class\":{";
  for (int c = 0; c < kNumLabels; ++c) {
    if (c) os << ",";
    os << "\"" << part_class_name(static_cast<PartClass>(c)) << "\":";
    if (per_class_iou[static_cast<std::size_t>(c)])
      os << *per_class_iou[static_cast<std::size_t>(c)];
    else
      os << "null";
  }
  os << "}}";
  return os.str();
}

void ConfusionAccumulator::add(const LabelGrid& pred, const LabelGrid& gt) {
  if (!pred.same_shape(gt))
    throw_error(ErrorKind::dimension_mismatch,
                "prediction and ground truth shapes differ");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::uint8_t p = pred[i];
    const std::uint8_t g = gt[i];
    if (p >= kNumLabels || g >= kNumLabels)
      throw_error(ErrorKind::schema, "labels must be in 0..6 for evaluation");
    ++counts_[static_cast<std::size_t>(g) * kNumLabels + p];
  }
}

Metrics ConfusionAccumulator::finalize() const {
  Metrics m;
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < kNumLabels; ++c) {
    std::int64_t inter = counts_[static_cast<std::size_t>(c) * kNumLabels + c];
    std::int64_t pred_c = 0, gt_c = 0;
    for (int k = 0; k < kNumLabels; ++k) {
      pred_c += counts_[static_cast<std::size_t>(k) * kNumLabels + c];
      gt_c += counts_[static_cast<std::size_t>(c) * kNumLabels + k];
    }
    const std::int64_t uni = pred_c + gt_c - inter;
    if (uni == 0) continue;  // absent from both sides: excluded
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    m.per_class_iou[static_cast<std::size_t>(c)] = iou;
    sum += iou;
    ++present;
  }
  m.miou = present ? sum / present : 0.0;
  return m;
}

Metrics evaluate_miou(const LabelGrid& pred, const LabelGrid& gt) {
  ConfusionAccumulator acc;
  acc.add(pred, gt);
  return acc.finalize();
}

}  // namespace partprior
