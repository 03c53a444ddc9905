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

#include "partprior/dense_crf.hpp"
#include "partprior/rng.hpp"
#include "support/crf_reference.hpp"
#include "support/test_util.hpp"

using namespace partprior;

namespace {

RgbImage random_image(int w, int h, Rng& rng) {
  RgbImage image(w, h);
  for (std::uint8_t& v : image.data())
    v = static_cast<std::uint8_t>(rng.uniform_index(256));
  return image;
}

CrfParams random_params(Rng& rng) {
  CrfParams p;
  p.w_app = rng.uniform(0.0, 8.0);
  p.theta_alpha = rng.uniform(1.0, 30.0);
  p.theta_beta = rng.uniform(1.0, 40.0);
  p.w_smooth = rng.uniform(0.0, 4.0);
  p.theta_gamma = rng.uniform(1.0, 10.0);
  p.iterations = 1 + static_cast<int>(rng.uniform_index(5));
  return p;
}

double max_abs_diff(const ProbMap& a, const ProbMap& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace

TEST_CASE("argmax_labels with tie-breaking to the lowest index") {
  ProbMap p(3, 1, 3, 0.0);
  p.at(0, 0, 1) = 1.0;                      // one-hot
  for (int c = 0; c < 3; ++c) p.at(1, 0, c) = 1.0 / 3;  // uniform: tie
  p.at(2, 0, 0) = 0.2;
  p.at(2, 0, 1) = 0.5;
  p.at(2, 0, 2) = 0.3;

  const LabelGrid labels = argmax_labels(p);
  CHECK(labels.at(0, 0) == 1);
  CHECK(labels.at(1, 0) == 0);  // tie -> class 0
  CHECK(labels.at(2, 0) == 1);
}

TEST_CASE("zero-weight kernels pass the unary through exactly") {
  Rng rng(5);
  const ProbMap unary = testutil::random_prob_map(6, 5, 3, rng);
  const RgbImage image = random_image(6, 5, rng);

  CrfParams params;
  params.w_app = 0.0;
  params.w_smooth = 0.0;
  params.iterations = 7;

  const ProbMap out = meanfield_refine(unary, image, params);
  for (std::size_t i = 0; i < out.data().size(); ++i)
    CHECK(out.data()[i] == unary.data()[i]);
}

TEST_CASE("zero iterations return the unary") {
  Rng rng(6);
  const ProbMap unary = testutil::random_prob_map(4, 4, 3, rng);
  const RgbImage image = random_image(4, 4, rng);
  CrfParams params;
  params.iterations = 0;
  const ProbMap out = meanfield_refine(unary, image, params);
  for (std::size_t i = 0; i < out.data().size(); ++i)
    CHECK(out.data()[i] == unary.data()[i]);
}

TEST_CASE("two pixels with identical colors agree after convergence") {
  // Hand-iterated fixed point: pixel 1 prefers A, pixel 2 slightly
  // prefers B; a strong appearance kernel pulls both to A.
  ProbMap unary(2, 1, 2);
  unary.at(0, 0, 0) = 0.6;
  unary.at(0, 0, 1) = 0.4;
  unary.at(1, 0, 0) = 0.45;
  unary.at(1, 0, 1) = 0.55;

  RgbImage image(2, 1);
  for (std::uint8_t& v : image.data()) v = 128;

  CrfParams params;
  params.w_app = 2.5;
  params.theta_alpha = 100.0;  // spatial factor ~ 1
  params.theta_beta = 100.0;   // identical colors: factor 1
  params.w_smooth = 0.0;
  params.iterations = 100;

  const ProbMap out = meanfield_refine(unary, image, params);

  // Independent fixed-point iteration of the 2-pixel update:
  // q_i(l) ~ u_i(l) exp(k q_j(l)) with k the kernel value.
  const double k = 2.5 * std::exp(-1.0 / (2 * 100.0 * 100.0));
  double q1a = 0.6, q2a = 0.45;
  for (int it = 0; it < 100; ++it) {
    const double n1a = 0.6 * std::exp(k * q2a);
    const double n1b = 0.4 * std::exp(k * (1 - q2a));
    const double n2a = 0.45 * std::exp(k * q1a);
    const double n2b = 0.55 * std::exp(k * (1 - q1a));
    q1a = n1a / (n1a + n1b);
    q2a = n2a / (n2a + n2b);
  }

  CHECK(out.at(0, 0, 0) == doctest::Approx(q1a).epsilon(1e-9));
  CHECK(out.at(1, 0, 0) == doctest::Approx(q2a).epsilon(1e-9));
  CHECK(out.at(1, 0, 0) > 0.5);  // pixel 2 flipped to A
  CHECK(out.at(0, 0, 0) > 0.6);  // pixel 1 got more confident
}

TEST_CASE("production path equals the naive reference on random instances") {
  Rng rng(7101);
  for (int instance = 0; instance < 50; ++instance) {
    const int w = 3 + static_cast<int>(rng.uniform_index(14));
    const int h = 3 + static_cast<int>(rng.uniform_index(14));
    const ProbMap unary = testutil::random_prob_map(w, h, 3, rng);
    const RgbImage image = random_image(w, h, rng);
    const CrfParams params = random_params(rng);

    const ProbMap expected = oracle::naive_meanfield(unary, image, params);
    const ProbMap actual = meanfield_refine(unary, image, params);
    CHECK(max_abs_diff(actual, expected) < 1e-6);

    CrfParams truncated = params;
    truncated.truncated = true;
    const ProbMap fast = meanfield_refine(unary, image, truncated);
    CHECK(max_abs_diff(fast, expected) < 1e-6);
  }
}

TEST_CASE("seven-label instances also match the reference") {
  Rng rng(7102);
  for (int instance = 0; instance < 8; ++instance) {
    const int w = 3 + static_cast<int>(rng.uniform_index(10));
    const int h = 3 + static_cast<int>(rng.uniform_index(10));
    const ProbMap unary = testutil::random_prob_map(w, h, 7, rng);
    const RgbImage image = random_image(w, h, rng);
    const CrfParams params = random_params(rng);
    CHECK(max_abs_diff(meanfield_refine(unary, image, params),
                       oracle::naive_meanfield(unary, image, params)) < 1e-6);
  }
}

TEST_CASE("every iteration's Q stays a normalized distribution") {
  Rng rng(7103);
  const ProbMap unary = testutil::random_prob_map(9, 8, 3, rng);
  const RgbImage image = random_image(9, 8, rng);
  for (int iters = 1; iters <= 5; ++iters) {
    CrfParams params;
    params.theta_alpha = 6.0;
    params.theta_beta = 15.0;
    params.iterations = iters;
    const ProbMap q = meanfield_refine(unary, image, params);
    CHECK(max_normalization_error(q) < 1e-6);
  }
}

TEST_CASE("class relabeling permutes the output identically") {
  Rng rng(7104);
  const int w = 7, h = 6, labels = 4;
  const ProbMap unary = testutil::random_prob_map(w, h, labels, rng);
  const RgbImage image = random_image(w, h, rng);
  CrfParams params;
  params.theta_alpha = 8.0;
  params.iterations = 3;

  const int perm[4] = {2, 0, 3, 1};
  ProbMap permuted(w, h, labels);
  for (std::size_t i = 0; i < unary.pixel_count(); ++i)
    for (int c = 0; c < labels; ++c)
      permuted.pixel(i)[perm[c]] = unary.pixel(i)[c];

  const ProbMap out = meanfield_refine(unary, image, params);
  const ProbMap out_perm = meanfield_refine(permuted, image, params);
  for (std::size_t i = 0; i < out.pixel_count(); ++i)
    for (int c = 0; c < labels; ++c)
      CHECK(out_perm.pixel(i)[perm[c]] ==
            doctest::Approx(out.pixel(i)[c]).epsilon(1e-12));
}

TEST_CASE("dimension mismatch is rejected") {
  Rng rng(8);
  const ProbMap unary = testutil::random_prob_map(4, 4, 3, rng);
  const RgbImage image = random_image(5, 4, rng);
  CHECK_THROWS_AS(meanfield_refine(unary, image, CrfParams{}), Error);
}
