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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partprior/grid.hpp"
#include "partprior/image.hpp"
#include "partprior/pose.hpp"

namespace partprior {

/// Keypoint annotations for one image.
struct ImagePoses {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<PersonPose> persons;
};

/// Native annotation format: {"format": "partprior-poses", "images":
/// [{"id", "width", "height", "persons": [{"instance_id", "joints":
/// {name: [x, y, visible]}}]}]}. Every person carries all 14 joints.
std::vector<ImagePoses> read_native_poses(const std::filesystem::path& path);
void write_native_poses(const std::filesystem::path& path,
                        std::span<const ImagePoses> images);

/// COCO keypoint annotations mapped onto the 14-joint skeleton: nose
/// becomes head_top, eyes and ears are dropped, the neck is recovered
/// from the shoulders. Keypoints with v > 0 count as visible; persons
/// with fewer than 2 visible canonical joints are dropped.
std::vector<ImagePoses> ingest_coco_keypoints(const std::filesystem::path& path);

/// Schema sniffing: native files load as-is, COCO files go through the
/// mapping above. Throws ErrorKind::parse / schema.
std::vector<ImagePoses> load_poses_json(const std::filesystem::path& path);

/// One dataset entry. Optional pieces follow the directory layout:
/// images/<id>.png, poses.json, full_masks/<id>.png, gt_masks/<id>.png.
struct DatasetSample {
  std::string id;
  RgbImage image;
  std::vector<PersonPose> poses;
  std::optional<FullMask> full_mask;
  std::optional<LabelGrid> gt_mask;
};

struct Dataset {
  std::vector<DatasetSample> samples;  // sorted by id
};

Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace partprior
