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

#include "partprior/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "partprior/errors.hpp"
#include "partprior/png_io.hpp"

namespace partprior {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::io, "cannot open: " + path.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw_error(ErrorKind::parse,
                path.string() + " is not valid JSON: " + e.what());
  }
}

// COCO order; -1 drops the keypoint, everything else maps to Joint.
constexpr int kCocoToCanonical[17] = {
    static_cast<int>(Joint::head_top),  // nose
    -1,                                 // left_eye
    -1,                                 // right_eye
    -1,                                 // left_ear
    -1,                                 // right_ear
    static_cast<int>(Joint::l_shoulder),
    static_cast<int>(Joint::r_shoulder),
    static_cast<int>(Joint::l_elbow),
    static_cast<int>(Joint::r_elbow),
    static_cast<int>(Joint::l_wrist),
    static_cast<int>(Joint::r_wrist),
    static_cast<int>(Joint::l_hip),
    static_cast<int>(Joint::r_hip),
    static_cast<int>(Joint::l_knee),
    static_cast<int>(Joint::r_knee),
    static_cast<int>(Joint::l_ankle),
    static_cast<int>(Joint::r_ankle),
};

}  // namespace

std::vector<ImagePoses> read_native_poses(const std::filesystem::path& path) {
  const json j = parse_file(path);
  if (!j.is_object() || j.value("format", "") != "partprior-poses")
    throw_error(ErrorKind::schema, "not a partprior-poses file: " + path.string());

  std::vector<ImagePoses> out;
  for (const json& image : j.at("images")) {
    ImagePoses entry;
    entry.id = image.at("id").get<std::string>();
    entry.width = image.value("width", 0);
    entry.height = image.value("height", 0);
    for (const json& person : image.at("persons")) {
      PersonPose pose;
      pose.instance_id = person.value("instance_id", 0);
      const json& joints = person.at("joints");
      for (int i = 0; i < kNumJoints; ++i) {
        const char* name = joint_name(static_cast<Joint>(i));
        if (!joints.contains(name))
          throw_error(ErrorKind::schema,
                      std::string("pose is missing joint slot ") + name);
        const json& kp = joints.at(name);
        if (!kp.is_array() || kp.size() != 3)
          throw_error(ErrorKind::schema, "joint entries must be [x, y, visible]");
        Keypoint& k = pose.joints[static_cast<std::size_t>(i)];
        k.visible = kp[2].get<double>() != 0.0;
        if (k.visible) {
          k.x = kp[0].get<double>();
          k.y = kp[1].get<double>();
        }
      }
      entry.persons.push_back(pose);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void write_native_poses(const std::filesystem::path& path,
                        std::span<const ImagePoses> images) {
  json root;
  root["format"] = "partprior-poses";
  root["version"] = 1;
  json arr = json::array();
  for (const ImagePoses& image : images) {
    json entry;
    entry["id"] = image.id;
    entry["width"] = image.width;
    entry["height"] = image.height;
    json persons = json::array();
    for (const PersonPose& pose : image.persons) {
      json joints;
      for (int i = 0; i < kNumJoints; ++i) {
        const Keypoint& k = pose.joints[static_cast<std::size_t>(i)];
        joints[joint_name(static_cast<Joint>(i))] =
            json::array({k.visible ? k.x : 0.0, k.visible ? k.y : 0.0,
                         k.visible ? 1 : 0});
      }
      persons.push_back(
          {{"instance_id", pose.instance_id}, {"joints", joints}});
    }
    entry["persons"] = std::move(persons);
    arr.push_back(std::move(entry));
  }
  root["images"] = std::move(arr);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::io, "cannot write: " + path.string());
  out << root.dump(2) << "\n";
}

std::vector<ImagePoses> ingest_coco_keypoints(
    const std::filesystem::path& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("annotations"))
    throw_error(ErrorKind::schema,
                "not a COCO keypoints file (no annotations): " + path.string());

  // image id -> (entry, display id). Ordered map keeps output stable.
  std::map<std::int64_t, ImagePoses> by_image;
  if (j.contains("images")) {
    for (const json& im : j.at("images")) {
      ImagePoses entry;
      const std::int64_t id = im.at("id").get<std::int64_t>();
      if (im.contains("file_name")) {
        std::filesystem::path name = im.at("file_name").get<std::string>();
        entry.id = name.stem().string();
      } else {
        entry.id = std::to_string(id);
      }
      entry.width = im.value("width", 0);
      entry.height = im.value("height", 0);
      by_image.emplace(id, std::move(entry));
    }
  }

  for (const json& ann : j.at("annotations")) {
    if (!ann.contains("keypoints")) continue;
    const json& kps = ann.at("keypoints");
    if (!kps.is_array() || kps.size() != 51)
      throw_error(ErrorKind::schema,
                  "COCO keypoints arrays must hold 17 (x, y, v) triplets");

    PersonPose pose;
    for (int i = 0; i < 17; ++i) {
      const int target = kCocoToCanonical[i];
      if (target < 0) continue;
      const double v = kps[static_cast<std::size_t>(3 * i + 2)].get<double>();
      if (v <= 0.0) continue;
      Keypoint& k = pose.joints[static_cast<std::size_t>(target)];
      k.x = kps[static_cast<std::size_t>(3 * i)].get<double>();
      k.y = kps[static_cast<std::size_t>(3 * i + 1)].get<double>();
      k.visible = true;
    }
    if (pose.visible_count() < 2) continue;  // too sparse to use

    const std::int64_t image_id = ann.value("image_id", std::int64_t{0});
    ImagePoses& entry = by_image[image_id];
    if (entry.id.empty()) entry.id = std::to_string(image_id);
    pose.instance_id = static_cast<int>(entry.persons.size());
    entry.persons.push_back(recover_missing(pose));
  }

  std::vector<ImagePoses> out;
  out.reserve(by_image.size());
  for (auto& [id, entry] : by_image) out.push_back(std::move(entry));
  return out;
}

std::vector<ImagePoses> load_poses_json(const std::filesystem::path& path) {
  const json j = parse_file(path);
  if (j.is_object() && j.value("format", "") == "partprior-poses")
    return read_native_poses(path);
  if (j.is_object() && j.contains("annotations"))
    return ingest_coco_keypoints(path);
  throw_error(ErrorKind::schema,
              "unrecognized pose annotation schema: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const std::filesystem::path images_dir = dir / "images";
  const std::filesystem::path poses_path = dir / "poses.json";
  if (!std::filesystem::is_directory(images_dir))
    throw_error(ErrorKind::io, "dataset has no images/ directory: " + dir.string());
  if (!std::filesystem::exists(poses_path))
    throw_error(ErrorKind::io, "dataset has no poses.json: " + dir.string());

  std::map<std::string, std::vector<PersonPose>> poses;
  for (ImagePoses& entry : load_poses_json(poses_path))
    poses[entry.id] = std::move(entry.persons);

  std::vector<std::string> ids;
  for (const auto& e : std::filesystem::directory_iterator(images_dir)) {
    if (e.path().extension() == ".png") ids.push_back(e.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());

  Dataset ds;
  ds.samples.reserve(ids.size());
  for (const std::string& id : ids) {
    DatasetSample sample;
    sample.id = id;
    sample.image = read_rgb_png(images_dir / (id + ".png"));
    const auto it = poses.find(id);
    if (it != poses.end()) sample.poses = it->second;

    const std::filesystem::path mask_path = dir / "full_masks" / (id + ".png");
    if (std::filesystem::exists(mask_path)) {
      FullMask mask = read_label_png(mask_path);
      for (std::uint8_t v : mask.data())
        if (v > 1)
          throw_error(ErrorKind::schema, "full masks must be binary: " +
                                             mask_path.string());
      sample.full_mask = std::move(mask);
    }
    const std::filesystem::path gt_path = dir / "gt_masks" / (id + ".png");
    if (std::filesystem::exists(gt_path))
      sample.gt_mask = read_label_png(gt_path);

    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

}  // namespace partprior
