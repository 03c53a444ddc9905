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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "partprior/segmenter.hpp"
#include "partprior/weak_supervision.hpp"
#include "support/test_util.hpp"

using namespace partprior;

TEST_CASE("features of a 1x1 white image") {
  RgbImage image(1, 1);
  image.at(0, 0, 0) = 255;
  image.at(0, 0, 1) = 255;
  image.at(0, 0, 2) = 255;

  const FeatureMap f = extract_features(image);
  const float* phi = f.pixel(0);
  CHECK(phi[0] == 0.f);  // x / W
  CHECK(phi[1] == 0.f);  // y / H
  for (int d = 2; d < kFeatureDim; ++d)
    CHECK(phi[d] == doctest::Approx(1.f).epsilon(1e-6));
}

TEST_CASE("constant gray image: blur features equal the raw channels") {
  RgbImage image(9, 7);
  for (std::uint8_t& v : image.data()) v = 100;
  const FeatureMap f = extract_features(image);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const float* phi = f.pixel(i);
    for (int ch = 0; ch < 3; ++ch) {
      CHECK(phi[2 + ch] == doctest::Approx(100.f / 255.f).epsilon(1e-6));
      CHECK(phi[5 + ch] == doctest::Approx(phi[2 + ch]).epsilon(1e-6));
      CHECK(phi[8 + ch] == doctest::Approx(phi[2 + ch]).epsilon(1e-6));
    }
  }
}

TEST_CASE("top-left pixel has zero positional features; all in [0,1]") {
  Rng rng(31);
  RgbImage image(8, 5);
  for (std::uint8_t& v : image.data())
    v = static_cast<std::uint8_t>(rng.uniform_index(256));
  const FeatureMap f = extract_features(image);
  CHECK(f.pixel(0)[0] == 0.f);
  CHECK(f.pixel(0)[1] == 0.f);
  for (std::size_t i = 0; i < f.pixel_count(); ++i)
    for (int d = 0; d < kFeatureDim; ++d) {
      CHECK(f.pixel(i)[d] >= 0.f);
      CHECK(f.pixel(i)[d] <= 1.f);
    }
}

TEST_CASE("zero model predicts the uniform distribution") {
  const SegmenterModel model = SegmenterModel::zeros(1, TrainHyperParams{});
  RgbImage image(3, 3);
  const ProbMap p = predict(model, extract_features(image));
  for (std::size_t i = 0; i < p.pixel_count(); ++i)
    for (int c = 0; c < kNumLabels; ++c)
      CHECK(p.pixel(i)[c] == doctest::Approx(1.0 / kNumLabels).epsilon(1e-12));
}

TEST_CASE("prediction rows are normalized for a random model") {
  Rng rng(32);
  SegmenterModel model = SegmenterModel::zeros(1, TrainHyperParams{});
  for (double& w : model.weights) w = rng.gaussian(0, 1);
  for (double& b : model.bias) b = rng.gaussian(0, 1);

  RgbImage image(6, 4);
  for (std::uint8_t& v : image.data())
    v = static_cast<std::uint8_t>(rng.uniform_index(256));
  const ProbMap p = predict(model, extract_features(image));
  CHECK(max_normalization_error(p) < 1e-9);
}

TEST_CASE("softmax spot check: logit one-hot gives e/(e+C)") {
  // 1x1 white image: phi = (0,0,1,...,1). Choose W so logits are
  // (1,0,...,0): W[0][2] = 1/sum over phi entries equal to 1... simpler:
  // bias does it exactly.
  SegmenterModel model = SegmenterModel::zeros(1, TrainHyperParams{});
  model.bias[0] = 1.0;
  RgbImage image(1, 1);
  const ProbMap p = predict(model, extract_features(image));
  const double expected = std::exp(1.0) / (std::exp(1.0) + kNumParts);
  CHECK(p.at(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("identical feature vectors get identical distributions") {
  Rng rng(33);
  SegmenterModel model = SegmenterModel::zeros(2, TrainHyperParams{});
  for (double& w : model.weights) w = rng.gaussian(0, 0.5);

  // Constant color: only positional features vary; force two pixels to
  // share them by comparing (x, y) and its mirrored twin on a symmetric
  // image... simplest: build the FeatureMap by hand.
  FeatureMap f(2, 1);
  for (int d = 0; d < kFeatureDim; ++d) {
    f.pixel(0)[d] = 0.25f;
    f.pixel(1)[d] = 0.25f;
  }
  const ProbMap p = predict(model, f);
  for (int c = 0; c < kNumLabels; ++c)
    CHECK(p.at(0, 0, c) == p.at(1, 0, c));
}

TEST_CASE("checkpoint round-trips exactly") {
  Rng rng(34);
  SegmenterModel model = SegmenterModel::zeros(77, TrainHyperParams{});
  for (double& w : model.weights) w = rng.gaussian(0, 1);
  for (double& b : model.bias) b = rng.gaussian(0, 1);
  model.hyper.learning_rate = 0.123456789012345;

  testutil::TempDir dir("ckpt");
  const auto path = dir.path() / "model.ckpt";
  model.save(path);
  const SegmenterModel loaded = SegmenterModel::load(path);

  CHECK(loaded.weights == model.weights);
  CHECK(loaded.bias == model.bias);
  CHECK(loaded.seed == model.seed);
  CHECK(loaded.hyper.learning_rate == model.hyper.learning_rate);
  CHECK(loaded.hyper.batch_size == model.hyper.batch_size);
}

namespace {

struct ToySet {
  RgbImage image{8, 8};
  FeatureMap features;
  TriStateMap supervision{8, 8};
  FullMask mask{8, 8};

  ToySet() {
    // Left half bright (head), right half dark (background).
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        const bool left = x < 4;
        for (int c = 0; c < 3; ++c)
          image.at(x, y, c) = left ? 220 : 40;
        supervision.at(x, y) = left ? 1 : 0;
        mask.at(x, y) = left ? 1 : 0;
      }
    }
    features = extract_features(image);
  }
};

}  // namespace

TEST_CASE("zero learning rate leaves the model unchanged") {
  ToySet toy;
  TrainHyperParams hyper;
  hyper.learning_rate = 0.0;
  SegmenterModel model = SegmenterModel::zeros(3, hyper);
  const std::vector<double> before = model.weights;

  TrainSample sample{&toy.features, &toy.supervision, &toy.mask};
  train_epoch(model, {&sample, 1}, 1.0, 99);
  CHECK(model.weights == before);
}

TEST_CASE("loss decreases monotonically on a separable toy problem") {
  ToySet toy;
  TrainHyperParams hyper;
  hyper.learning_rate = 1.0;
  SegmenterModel model = SegmenterModel::zeros(3, hyper);
  TrainSample sample{&toy.features, &toy.supervision, &toy.mask};

  double prev = 1e300;
  for (int epoch = 0; epoch < 10; ++epoch) {
    const double loss = train_epoch(model, {&sample, 1}, 1.0, 1000 + epoch);
    CHECK(loss < prev);
    prev = loss;
  }
}

TEST_CASE("training is bitwise reproducible for a fixed seed") {
  ToySet toy;
  TrainHyperParams hyper;
  SegmenterModel a = SegmenterModel::zeros(5, hyper);
  SegmenterModel b = SegmenterModel::zeros(5, hyper);
  TrainSample sample{&toy.features, &toy.supervision, &toy.mask};

  for (int epoch = 0; epoch < 5; ++epoch) {
    train_epoch(a, {&sample, 1}, 1.0, 500 + epoch);
    train_epoch(b, {&sample, 1}, 1.0, 500 + epoch);
  }
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("model gradient matches finite differences through the softmax") {
  Rng rng(35);
  RgbImage image(5, 4);
  for (std::uint8_t& v : image.data())
    v = static_cast<std::uint8_t>(rng.uniform_index(256));
  const FeatureMap features = extract_features(image);

  TriStateMap sup(5, 4);
  FullMask mask(5, 4);
  for (std::size_t i = 0; i < sup.size(); ++i) {
    sup[i] = rng.bernoulli(0.25)
                 ? kUncertain
                 : static_cast<std::uint8_t>(rng.uniform_index(7));
    mask[i] = rng.bernoulli(0.5) ? 1 : 0;
  }
  sup[0] = 3;
  const double w_m = 0.8;

  SegmenterModel model = SegmenterModel::zeros(9, TrainHyperParams{});
  for (double& w : model.weights) w = rng.gaussian(0, 0.3);
  for (double& b : model.bias) b = rng.gaussian(0, 0.3);

  auto loss_at = [&](const SegmenterModel& m) {
    const ProbMap probs = predict(m, features);
    return total_loss(probs, sup, &mask, w_m).total;
  };

  const ProbMap probs = predict(model, features);
  const LossReport report = total_loss(probs, sup, &mask, w_m);
  std::vector<double> grad_w(model.weights.size(), 0.0);
  std::vector<double> grad_b(model.bias.size(), 0.0);
  accumulate_model_gradient(model, features, probs, report.gradient, grad_w,
                            grad_b);

  const double eps = 1e-4;
  for (int probe = 0; probe < 20; ++probe) {
    const std::size_t wi = rng.uniform_index(model.weights.size());
    SegmenterModel plus = model, minus = model;
    plus.weights[wi] += eps;
    minus.weights[wi] -= eps;
    const double fd = (loss_at(plus) - loss_at(minus)) / (2 * eps);
    if (std::abs(fd) < 1e-10) {
      CHECK(std::abs(grad_w[wi]) < 1e-7);
    } else {
      CHECK(grad_w[wi] == doctest::Approx(fd).epsilon(1e-3));
    }
  }
  for (std::size_t bi = 0; bi < model.bias.size(); ++bi) {
    SegmenterModel plus = model, minus = model;
    plus.bias[bi] += eps;
    minus.bias[bi] -= eps;
    const double fd = (loss_at(plus) - loss_at(minus)) / (2 * eps);
    CHECK(grad_b[bi] == doctest::Approx(fd).epsilon(1e-3));
  }
}
