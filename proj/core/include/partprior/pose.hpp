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

#include <array>
#include <optional>
#include <string_view>

#include "partprior/geometry.hpp"

namespace partprior {

/// The 14-joint canonical skeleton.
enum class Joint : int {
  head_top = 0,
  neck = 1,
  l_shoulder = 2,
  r_shoulder = 3,
  l_elbow = 4,
  r_elbow = 5,
  l_wrist = 6,
  r_wrist = 7,
  l_hip = 8,
  r_hip = 9,
  l_knee = 10,
  r_knee = 11,
  l_ankle = 12,
  r_ankle = 13,
};

inline constexpr int kNumJoints = 14;

const char* joint_name(Joint j);
std::optional<Joint> joint_from_name(std::string_view name);

/// An invisible keypoint carries no usable coordinates.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  bool visible = false;

  Vec2 pos() const { return {x, y}; }
};

struct PersonPose {
  std::array<Keypoint, kNumJoints> joints{};
  int instance_id = 0;

  Keypoint& joint(Joint j) { return joints[static_cast<int>(j)]; }
  const Keypoint& joint(Joint j) const { return joints[static_cast<int>(j)]; }

  bool visible(Joint j) const { return joint(j).visible; }

  int visible_count() const {
    int n = 0;
    for (const Keypoint& k : joints) n += k.visible ? 1 : 0;
    return n;
  }

  /// Vertical extent of the visible joints; 0 when fewer than two differ.
  double visible_height() const;
};

/// Fill in joints that can be estimated from the ones present.
/// Currently: neck <- midpoint of the two shoulders. Joints with no
/// applicable rule stay invisible. Idempotent; never overwrites a
/// visible joint.
PersonPose recover_missing(const PersonPose& pose);

}  // namespace partprior
