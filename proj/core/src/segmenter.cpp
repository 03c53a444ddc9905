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

#include "partprior/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "partprior/errors.hpp"
#include "partprior/rng.hpp"
#include "partprior/weak_supervision.hpp"

namespace partprior {

namespace {

// Box mean along one axis; out-of-bounds neighbours are simply not
// counted, which keeps values in [0, 1] at the borders.
void box_blur_axis(const std::vector<float>& src, std::vector<float>& dst,
                   int width, int height, int radius, bool horizontal) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int n = horizontal ? width : height;
      const int c = horizontal ? x : y;
      const int lo = std::max(0, c - radius);
      const int hi = std::min(n - 1, c + radius);
      float sum = 0.f;
      for (int k = lo; k <= hi; ++k) {
        const int xx = horizontal ? k : x;
        const int yy = horizontal ? y : k;
        sum += src[static_cast<std::size_t>(yy) * width + xx];
      }
      dst[static_cast<std::size_t>(y) * width + x] =
          sum / static_cast<float>(hi - lo + 1);
    }
  }
}

void box_blur(const std::vector<float>& src, std::vector<float>& dst,
              int width, int height, int radius) {
  std::vector<float> tmp(src.size());
  box_blur_axis(src, tmp, width, height, radius, true);
  box_blur_axis(tmp, dst, width, height, radius, false);
}

}  // namespace

FeatureMap extract_features(const RgbImage& image) {
  const int width = image.width();
  const int height = image.height();
  FeatureMap features(width, height);

  std::vector<float> channel(static_cast<std::size_t>(width) * height);
  std::vector<float> blur_small(channel.size());
  std::vector<float> blur_large(channel.size());

  for (int ch = 0; ch < 3; ++ch) {
    for (std::size_t i = 0; i < channel.size(); ++i)
      channel[i] = static_cast<float>(image.data()[i * 3 + ch]) / 255.f;
    box_blur(channel, blur_small, width, height, kBlurRadiusSmall);
    box_blur(channel, blur_large, width, height, kBlurRadiusLarge);
    for (std::size_t i = 0; i < channel.size(); ++i) {
      float* f = features.pixel(i);
      f[2 + ch] = channel[i];
      f[5 + ch] = blur_small[i];
      f[8 + ch] = blur_large[i];
    }
  }

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float* f = features.pixel(static_cast<std::size_t>(y) * width + x);
      f[0] = static_cast<float>(x) / static_cast<float>(width);
      f[1] = static_cast<float>(y) / static_cast<float>(height);
    }
  }
  return features;
}

SegmenterModel SegmenterModel::zeros(std::uint64_t seed,
                                     const TrainHyperParams& hyper) {
  SegmenterModel m;
  m.weights.assign(static_cast<std::size_t>(m.num_classes) * m.feature_dim,
                   0.0);
  m.bias.assign(static_cast<std::size_t>(m.num_classes), 0.0);
  m.seed = seed;
  m.hyper = hyper;
  return m;
}

void SegmenterModel::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["format"] = "partprior-checkpoint";
  j["version"] = 1;
  j["feature_dim"] = feature_dim;
  j["num_classes"] = num_classes;
  j["weights"] = weights;
  j["bias"] = bias;
  j["seed"] = seed;
  j["hyper"] = {{"learning_rate", hyper.learning_rate},
                {"epochs_initial", hyper.epochs_initial},
                {"epochs_refine", hyper.epochs_refine},
                {"batch_size", hyper.batch_size}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::io, "cannot write checkpoint: " + path.string());
  out << j.dump(2) << "\n";
}

SegmenterModel SegmenterModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::io, "cannot read checkpoint: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw_error(ErrorKind::parse, "checkpoint is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "partprior-checkpoint" || j.value("version", 0) != 1)
    throw_error(ErrorKind::schema, "unrecognized checkpoint format");

  SegmenterModel m;
  m.feature_dim = j.at("feature_dim").get<int>();
  m.num_classes = j.at("num_classes").get<int>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<std::vector<double>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  const auto& h = j.at("hyper");
  m.hyper.learning_rate = h.at("learning_rate").get<double>();
  m.hyper.epochs_initial = h.at("epochs_initial").get<int>();
  m.hyper.epochs_refine = h.at("epochs_refine").get<int>();
  m.hyper.batch_size = h.at("batch_size").get<int>();
  if (m.weights.size() !=
          static_cast<std::size_t>(m.num_classes) * m.feature_dim ||
      m.bias.size() != static_cast<std::size_t>(m.num_classes))
    throw_error(ErrorKind::schema, "checkpoint dimensions are inconsistent");
  return m;
}

ProbMap predict(const SegmenterModel& model, const FeatureMap& features) {
  if (model.feature_dim != kFeatureDim)
    throw_error(ErrorKind::dimension_mismatch,
                "model feature dimension does not match extractor");

  const int classes = model.num_classes;
  ProbMap probs(features.width(), features.height(), classes);
  std::vector<double> logits(static_cast<std::size_t>(classes));

  for (std::size_t i = 0; i < features.pixel_count(); ++i) {
    const float* phi = features.pixel(i);
    double zmax = -1e300;
    for (int c = 0; c < classes; ++c) {
      const double* w = model.weights.data() +
                        static_cast<std::size_t>(c) * model.feature_dim;
      double z = model.bias[static_cast<std::size_t>(c)];
      for (int d = 0; d < kFeatureDim; ++d) z += w[d] * phi[d];
      logits[static_cast<std::size_t>(c)] = z;
      zmax = std::max(zmax, z);
    }
    double sum = 0.0;
    double* p = probs.pixel(i);
    for (int c = 0; c < classes; ++c) {
      p[c] = std::exp(logits[static_cast<std::size_t>(c)] - zmax);
      sum += p[c];
    }
    for (int c = 0; c < classes; ++c) p[c] /= sum;
  }
  return probs;
}

void accumulate_model_gradient(const SegmenterModel& model,
                               const FeatureMap& features,
                               const ProbMap& probs,
                               const PixelField& dloss_dprobs,
                               std::vector<double>& grad_weights,
                               std::vector<double>& grad_bias) {
  const int classes = model.num_classes;
  std::vector<double> dz(static_cast<std::size_t>(classes));

  for (std::size_t i = 0; i < features.pixel_count(); ++i) {
    const double* p = probs.pixel(i);
    const double* g = dloss_dprobs.pixel(i);

    // Softmax Jacobian: dL/dz_c = p_c (g_c - sum_c' g_c' p_c').
    double gp = 0.0;
    for (int c = 0; c < classes; ++c) gp += g[c] * p[c];
    bool any = false;
    for (int c = 0; c < classes; ++c) {
      dz[static_cast<std::size_t>(c)] = p[c] * (g[c] - gp);
      any |= dz[static_cast<std::size_t>(c)] != 0.0;
    }
    if (!any) continue;  // most pixels are uncertain-only in early rounds

    const float* phi = features.pixel(i);
    for (int c = 0; c < classes; ++c) {
      const double d = dz[static_cast<std::size_t>(c)];
      if (d == 0.0) continue;
      double* gw = grad_weights.data() +
                   static_cast<std::size_t>(c) * model.feature_dim;
      for (int k = 0; k < kFeatureDim; ++k) gw[k] += d * phi[k];
      grad_bias[static_cast<std::size_t>(c)] += d;
    }
  }
}

double train_epoch(SegmenterModel& model, std::span<const TrainSample> samples,
                   double w_m, std::uint64_t epoch_seed) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(epoch_seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_index(i)]);

  const std::size_t batch =
      std::max(1, model.hyper.batch_size);
  std::vector<double> grad_w(model.weights.size());
  std::vector<double> grad_b(model.bias.size());

  double loss_sum = 0.0;
  std::size_t contributing = 0;

  for (std::size_t begin = 0; begin < order.size(); begin += batch) {
    const std::size_t end = std::min(order.size(), begin + batch);
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    std::size_t used = 0;

    for (std::size_t k = begin; k < end; ++k) {
      const TrainSample& sample = samples[order[k]];
      const ProbMap probs = predict(model, *sample.features);
      LossReport report;
      try {
        report = total_loss(probs, *sample.supervision, sample.mask, w_m);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::empty_supervision) continue;  // skip sample
        throw;
      }
      accumulate_model_gradient(model, *sample.features, probs,
                                report.gradient, grad_w, grad_b);
      loss_sum += report.total;
      ++used;
      ++contributing;
    }
    if (used == 0) continue;

    const double step = model.hyper.learning_rate / static_cast<double>(used);
    for (std::size_t i = 0; i < grad_w.size(); ++i)
      model.weights[i] -= step * grad_w[i];
    for (std::size_t i = 0; i < grad_b.size(); ++i)
      model.bias[i] -= step * grad_b[i];
  }

  return contributing ? loss_sum / static_cast<double>(contributing) : 0.0;
}

}  // namespace partprior
