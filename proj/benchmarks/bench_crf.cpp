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

#include <benchmark/benchmark.h>

#include "partprior/dense_crf.hpp"
#include "partprior/rng.hpp"

using namespace partprior;

namespace {

RgbImage random_image(int side, Rng& rng) {
  RgbImage image(side, side);
  for (std::uint8_t& v : image.data())
    v = static_cast<std::uint8_t>(rng.uniform_index(256));
  return image;
}

ProbMap random_unary(int side, int labels, Rng& rng) {
  ProbMap unary(side, side, labels);
  for (std::size_t i = 0; i < unary.pixel_count(); ++i) {
    double sum = 0.0;
    double* p = unary.pixel(i);
    for (int c = 0; c < labels; ++c) {
      p[c] = 0.05 + rng.uniform();
      sum += p[c];
    }
    for (int c = 0; c < labels; ++c) p[c] /= sum;
  }
  return unary;
}

}  // namespace

static void BM_MeanfieldIteration(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(42);
  const RgbImage image = random_image(side, rng);
  const ProbMap unary = random_unary(side, 7, rng);

  CrfParams params;
  params.theta_alpha = 20.0;
  params.theta_beta = 20.0;
  params.iterations = 1;

  for (auto _ : state) {
    benchmark::DoNotOptimize(meanfield_refine(unary, image, params));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side) *
                          side);
}
BENCHMARK(BM_MeanfieldIteration)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_MeanfieldTruncated(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(42);
  const RgbImage image = random_image(side, rng);
  const ProbMap unary = random_unary(side, 7, rng);

  CrfParams params;
  params.theta_alpha = 4.0;
  params.theta_gamma = 2.0;
  params.iterations = 1;
  params.truncated = true;

  for (auto _ : state) {
    benchmark::DoNotOptimize(meanfield_refine(unary, image, params));
  }
}
BENCHMARK(BM_MeanfieldTruncated)->Arg(96)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
