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

#include <fstream>

#include "partprior/dataset.hpp"
#include "partprior/errors.hpp"
#include "partprior/metrics.hpp"
#include "support/test_util.hpp"

using namespace partprior;

TEST_CASE("perfect prediction scores mIoU 1") {
  LabelGrid gt(4, 4);
  for (std::size_t i = 0; i < gt.size(); ++i)
    gt[i] = static_cast<std::uint8_t>(i % 7);
  const Metrics m = evaluate_miou(gt, gt);
  CHECK(m.miou == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fully disjoint predictions score zero") {
  LabelGrid pred(2, 2, 1);
  LabelGrid gt(2, 2, 2);
  const Metrics m = evaluate_miou(pred, gt);
  CHECK(m.miou == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.per_class_iou[1].has_value());
  CHECK(m.per_class_iou[2].has_value());
  CHECK_FALSE(m.per_class_iou[0].has_value());  // absent from both: excluded
}

TEST_CASE("hand-counted four-pixel case") {
  LabelGrid gt(4, 1);
  gt.at(0, 0) = 1;
  gt.at(1, 0) = 1;
  gt.at(2, 0) = 2;
  gt.at(3, 0) = 2;
  LabelGrid pred(4, 1);
  pred.at(0, 0) = 1;
  pred.at(1, 0) = 2;
  pred.at(2, 0) = 2;
  pred.at(3, 0) = 2;

  const Metrics m = evaluate_miou(pred, gt);
  CHECK(*m.per_class_iou[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*m.per_class_iou[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.miou == doctest::Approx(7.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("shape mismatch and bad labels are rejected") {
  LabelGrid a(2, 2), b(3, 2), c(2, 2, 9);
  CHECK_THROWS_AS(evaluate_miou(a, b), Error);
  CHECK_THROWS_AS(evaluate_miou(a, c), Error);
}

TEST_CASE("accumulator equals whole-dataset confusion") {
  LabelGrid gt1(2, 1);
  gt1.at(0, 0) = 1;
  gt1.at(1, 0) = 0;
  LabelGrid pred1(2, 1);
  pred1.at(0, 0) = 1;
  pred1.at(1, 0) = 1;
  LabelGrid gt2(2, 1);
  gt2.at(0, 0) = 1;
  gt2.at(1, 0) = 1;
  LabelGrid pred2 = gt2;

  ConfusionAccumulator acc;
  acc.add(pred1, gt1);
  acc.add(pred2, gt2);
  const Metrics m = acc.finalize();
  // class 1: inter 3, union 4; class 0: inter 0, union 1.
  CHECK(*m.per_class_iou[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*m.per_class_iou[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.miou == doctest::Approx(0.375).epsilon(1e-12));
}

namespace {

const char* kCocoFixture = R"({
  "images": [
    {"id": 7, "file_name": "scene_007.jpg", "width": 64, "height": 48}
  ],
  "annotations": [
    {
      "image_id": 7, "category_id": 1, "id": 1,
      "keypoints": [
        30, 6, 2,
        31, 5, 2,   29, 5, 2,
        32, 6, 1,   28, 6, 1,
        36, 12, 2,  24, 12, 2,
        38, 20, 2,  22, 20, 2,
        39, 28, 2,  21, 28, 2,
        34, 28, 2,  26, 28, 2,
        34, 38, 2,  26, 38, 2,
        34, 46, 2,  26, 46, 2
      ]
    },
    {
      "image_id": 7, "category_id": 1, "id": 2,
      "keypoints": [
        10, 6, 2,
        0, 0, 0,  0, 0, 0,  0, 0, 0,  0, 0, 0,
        0, 0, 0,  0, 0, 0,  0, 0, 0,  0, 0, 0,
        0, 0, 0,  0, 0, 0,  0, 0, 0,  0, 0, 0,
        0, 0, 0,  0, 0, 0,  0, 0, 0,  0, 0, 0
      ]
    }
  ],
  "categories": [{"id": 1, "name": "person"}]
})";

}  // namespace

TEST_CASE("COCO ingestion maps the skeleton and recovers the neck") {
  testutil::TempDir dir("coco");
  const auto path = dir.path() / "coco.json";
  std::ofstream(path) << kCocoFixture;

  const std::vector<ImagePoses> images = ingest_coco_keypoints(path);
  REQUIRE(images.size() == 1);
  CHECK(images[0].id == "scene_007");
  CHECK(images[0].width == 64);

  // The second annotation has only one visible canonical joint: dropped.
  REQUIRE(images[0].persons.size() == 1);
  const PersonPose& pose = images[0].persons[0];

  // nose -> head_top.
  CHECK(pose.visible(Joint::head_top));
  CHECK(pose.joint(Joint::head_top).x == doctest::Approx(30));
  // neck = shoulder midpoint after recovery.
  CHECK(pose.visible(Joint::neck));
  CHECK(pose.joint(Joint::neck).x == doctest::Approx(30));
  CHECK(pose.joint(Joint::neck).y == doctest::Approx(12));
  // left shoulder was (36, 12).
  CHECK(pose.joint(Joint::l_shoulder).x == doctest::Approx(36));
  CHECK(pose.joint(Joint::l_ankle).y == doctest::Approx(46));
  CHECK(pose.visible_count() == 14);
}

TEST_CASE("empty annotation lists and malformed JSON") {
  testutil::TempDir dir("cocoerr");
  const auto empty_path = dir.path() / "empty.json";
  std::ofstream(empty_path) << R"({"images": [], "annotations": []})";
  CHECK(ingest_coco_keypoints(empty_path).empty());

  const auto bad_path = dir.path() / "bad.json";
  std::ofstream(bad_path) << "{ not json";
  try {
    load_poses_json(bad_path);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }

  const auto odd_path = dir.path() / "odd.json";
  std::ofstream(odd_path) << R"({"something": "else"})";
  try {
    load_poses_json(odd_path);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
  }
}

TEST_CASE("native pose files round-trip through write and read") {
  std::vector<ImagePoses> images(1);
  images[0].id = "000042";
  images[0].width = 32;
  images[0].height = 32;
  images[0].persons.push_back(testutil::standing_pose(16, 16, 20));
  images[0].persons[0].joint(Joint::l_wrist).visible = false;

  testutil::TempDir dir("native");
  const auto path = dir.path() / "poses.json";
  write_native_poses(path, images);

  const std::vector<ImagePoses> loaded = load_poses_json(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].id == "000042");
  REQUIRE(loaded[0].persons.size() == 1);
  const PersonPose& pose = loaded[0].persons[0];
  CHECK_FALSE(pose.visible(Joint::l_wrist));
  CHECK(pose.visible_count() == 13);
  CHECK(pose.joint(Joint::head_top).y ==
        doctest::Approx(images[0].persons[0].joint(Joint::head_top).y));
}
