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

#include "partprior/pose.hpp"

#include <algorithm>

namespace partprior {

namespace {
constexpr std::array<const char*, kNumJoints> kJointNames = {
    "head_top", "neck",    "l_shoulder", "r_shoulder", "l_elbow",
    "r_elbow",  "l_wrist", "r_wrist",    "l_hip",      "r_hip",
    "l_knee",   "r_knee",  "l_ankle",    "r_ankle",
};
}  // namespace

const char* joint_name(Joint j) { return kJointNames[static_cast<int>(j)]; }

std::optional<Joint> joint_from_name(std::string_view name) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (name == kJointNames[i]) return static_cast<Joint>(i);
  }
  return std::nullopt;
}

double PersonPose::visible_height() const {
  double min_y = 0.0, max_y = 0.0;
  bool any = false;
  for (const Keypoint& k : joints) {
    if (!k.visible) continue;
    if (!any) {
      min_y = max_y = k.y;
      any = true;
    } else {
      min_y = std::min(min_y, k.y);
      max_y = std::max(max_y, k.y);
    }
  }
  return any ? max_y - min_y : 0.0;
}

PersonPose recover_missing(const PersonPose& pose) {
  PersonPose out = pose;

  const Keypoint& ls = out.joint(Joint::l_shoulder);
  const Keypoint& rs = out.joint(Joint::r_shoulder);
  Keypoint& neck = out.joint(Joint::neck);
  if (!neck.visible && ls.visible && rs.visible) {
    neck.x = (ls.x + rs.x) / 2.0;
    neck.y = (ls.y + rs.y) / 2.0;
    neck.visible = true;
  }

  return out;
}

}  // namespace partprior
