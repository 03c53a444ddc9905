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

#include <algorithm>

#include "partprior/dataset.hpp"
#include "partprior/errors.hpp"
#include "partprior/geometry.hpp"
#include "partprior/part_class.hpp"
#include "partprior/synthetic.hpp"
#include "support/test_util.hpp"

using namespace partprior;

namespace {

SynthConfig small_config() {
  SynthConfig config;
  config.n_train = 6;
  config.n_test = 3;
  config.width = 64;
  config.height = 64;
  config.seed = 123;
  return config;
}

// Strict interior of the convex hull of all 14 annotated joints,
// evaluated the slow way (half-plane tests against every hull edge via
// gift wrapping would be overkill; cross products against the sorted
// hull suffice and this mirrors the generator's guarantee).
std::vector<Vec2> hull_of(const PersonPose& pose) {
  std::vector<Vec2> pts;
  for (const Keypoint& k : pose.joints) pts.push_back({k.x, k.y});
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 &&
           cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower &&
           cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool strictly_inside(const std::vector<Vec2>& hull, Vec2 p) {
  for (std::size_t i = 0, j = hull.size() - 1; i < hull.size(); j = i++)
    if (cross(hull[i] - hull[j], p - hull[j]) <= 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("same seed produces a byte-identical corpus") {
  testutil::TempDir a("syn_a"), b("syn_b");
  generate_synthetic_corpus(small_config(), a.path());
  generate_synthetic_corpus(small_config(), b.path());
  CHECK(testutil::directories_identical(a.path(), b.path()));
}

TEST_CASE("missing_joint_rate 0 keeps all 14 joints visible") {
  testutil::TempDir dir("syn_vis");
  SynthConfig config = small_config();
  config.missing_joint_rate = 0.0;
  generate_synthetic_corpus(config, dir.path());

  const Dataset train = load_dataset(dir.path() / "train");
  CHECK(train.samples.size() == 6);
  for (const DatasetSample& sample : train.samples)
    for (const PersonPose& pose : sample.poses)
      CHECK(pose.visible_count() == kNumJoints);
}

TEST_CASE("high missing rate drops joints") {
  testutil::TempDir dir("syn_drop");
  SynthConfig config = small_config();
  config.missing_joint_rate = 0.5;
  generate_synthetic_corpus(config, dir.path());
  const Dataset train = load_dataset(dir.path() / "train");
  int total = 0, visible = 0;
  for (const DatasetSample& sample : train.samples)
    for (const PersonPose& pose : sample.poses) {
      total += kNumJoints;
      visible += pose.visible_count();
    }
  CHECK(visible < total);
}

TEST_CASE("ground truth, mask and annotations are consistent") {
  testutil::TempDir dir("syn_gt");
  SynthConfig config = small_config();
  config.missing_joint_rate = 0.0;
  generate_synthetic_corpus(config, dir.path());

  for (const char* split : {"train", "test"}) {
    const Dataset ds = load_dataset(dir.path() / split);
    for (const DatasetSample& sample : ds.samples) {
      REQUIRE(sample.gt_mask.has_value());
      REQUIRE(sample.full_mask.has_value());
      for (std::size_t i = 0; i < sample.gt_mask->size(); ++i) {
        const std::uint8_t label = (*sample.gt_mask)[i];
        CHECK(label <= kNumParts);  // dense labels, no uncertain
        CHECK(((*sample.full_mask)[i] == 1) == (label > 0));
      }
    }
  }
}

TEST_CASE("single-figure samples cover their keypoint hull interior") {
  testutil::TempDir dir("syn_hull");
  SynthConfig config = small_config();
  config.n_train = 12;
  config.missing_joint_rate = 0.0;
  generate_synthetic_corpus(config, dir.path());

  const Dataset train = load_dataset(dir.path() / "train");
  int single_figures = 0;
  for (const DatasetSample& sample : train.samples) {
    if (sample.poses.size() != 1) continue;
    ++single_figures;
    const std::vector<Vec2> hull = hull_of(sample.poses[0]);
    for (int y = 0; y < config.height; ++y)
      for (int x = 0; x < config.width; ++x)
        if (strictly_inside(hull, {x + 0.5, y + 0.5}))
          CHECK((*sample.gt_mask).at(x, y) > 0);
  }
  CHECK(single_figures > 0);
}

TEST_CASE("invalid configurations are rejected") {
  testutil::TempDir dir("syn_bad");
  SynthConfig config = small_config();
  config.n_train = 0;
  CHECK_THROWS_AS(generate_synthetic_corpus(config, dir.path()), Error);
  config = small_config();
  config.occlusion_rate = 1.5;
  CHECK_THROWS_AS(generate_synthetic_corpus(config, dir.path()), Error);
}
