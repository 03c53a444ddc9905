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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "partprior/errors.hpp"
#include "partprior/grid.hpp"

namespace partprior {

/// Dense per-pixel vector field, pixel-major: channel c of pixel (x, y)
/// lives at ((y*W + x)*C + c). Used both for class distributions
/// (ProbMap) and for per-pixel gradients.
class PixelField {
 public:
  PixelField() = default;
  PixelField(int width, int height, int channels, double fill = 0.0)
      : width_(width),
        height_(height),
        channels_(channels),
        values_(static_cast<std::size_t>(width) * height * channels, fill) {
    if (width <= 0 || height <= 0 || channels <= 0)
      throw_error(ErrorKind::invalid_config, "field dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double& at(int x, int y, int c) {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int x, int y, int c) const {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  double* pixel(std::size_t i) { return values_.data() + i * channels_; }
  const double* pixel(std::size_t i) const {
    return values_.data() + i * channels_;
  }

  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool same_shape(const PixelField& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

/// Per-pixel class distribution; channel 0 is background. Every pixel's
/// vector is expected to be nonnegative and sum to 1.
using ProbMap = PixelField;

/// Max deviation of any pixel's sum from 1 (and 0 if any entry < 0 turns
/// up it is reported as a large deviation).
inline double max_normalization_error(const ProbMap& p) {
  double worst = 0.0;
  const int ch = p.channels();
  for (std::size_t i = 0; i < p.pixel_count(); ++i) {
    const double* v = p.pixel(i);
    double sum = 0.0;
    for (int c = 0; c < ch; ++c) {
      if (v[c] < 0.0) return 1.0;
      sum += v[c];
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

/// Per-pixel argmax over channels; ties broken by lowest class index.
LabelGrid argmax_labels(const ProbMap& probs);

}  // namespace partprior
