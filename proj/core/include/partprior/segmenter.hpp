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
#include <span>
#include <vector>

#include "partprior/grid.hpp"
#include "partprior/image.hpp"
#include "partprior/prob_map.hpp"
#include "partprior/tri_state_map.hpp"

namespace partprior {

/// Handcrafted per-pixel features, all in [0, 1]:
/// (x/W, y/H, R, G, B, and the RGB box-blurred at radius 2 and 5).
inline constexpr int kFeatureDim = 11;
inline constexpr int kBlurRadiusSmall = 2;
inline constexpr int kBlurRadiusLarge = 5;

/// Pixel-major feature planes, float to keep cached corpora small.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int width, int height)
      : width_(width),
        height_(height),
        values_(static_cast<std::size_t>(width) * height * kFeatureDim, 0.f) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  float* pixel(std::size_t i) { return values_.data() + i * kFeatureDim; }
  const float* pixel(std::size_t i) const {
    return values_.data() + i * kFeatureDim;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

FeatureMap extract_features(const RgbImage& image);

struct TrainHyperParams {
  double learning_rate = 0.7;
  int epochs_initial = 16;
  int epochs_refine = 8;
  int batch_size = 8;  // images per SGD step
};

/// Linear-softmax per-pixel classifier: logits = W phi + b.
/// Deliberately small so gradient checks stay exact and full runs take
/// seconds; anything exposing predict() can stand in for it.
struct SegmenterModel {
  int feature_dim = kFeatureDim;
  int num_classes = kNumLabels;
  std::vector<double> weights;  // num_classes x feature_dim, row-major
  std::vector<double> bias;     // num_classes
  std::uint64_t seed = 0;
  TrainHyperParams hyper;

  static SegmenterModel zeros(std::uint64_t seed,
                              const TrainHyperParams& hyper);

  void save(const std::filesystem::path& path) const;
  static SegmenterModel load(const std::filesystem::path& path);
};

/// Per-pixel softmax(W phi + b).
ProbMap predict(const SegmenterModel& model, const FeatureMap& features);

/// One sample of the supervised training set. Pointers are non-owning;
/// mask may be null (pose-only training).
struct TrainSample {
  const FeatureMap* features = nullptr;
  const TriStateMap* supervision = nullptr;
  const FullMask* mask = nullptr;
};

/// One mini-batch SGD epoch over the samples (shuffled by epoch_seed).
/// Samples whose supervision is entirely uncertain are skipped. Returns
/// the mean total loss across contributing samples.
double train_epoch(SegmenterModel& model, std::span<const TrainSample> samples,
                   double w_m, std::uint64_t epoch_seed);

/// Backprop helper: folds d(loss)/d(probs) through the softmax into
/// gradients on weights and bias. Exposed for gradient checking.
void accumulate_model_gradient(const SegmenterModel& model,
                               const FeatureMap& features,
                               const ProbMap& probs,
                               const PixelField& dloss_dprobs,
                               std::vector<double>& grad_weights,
                               std::vector<double>& grad_bias);

}  // namespace partprior
