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

#include <cstdint>

namespace partprior {

/// Label codes. Stable across every file format in the project.
enum class PartClass : std::uint8_t {
  background = 0,
  head = 1,
  torso = 2,
  upper_arm = 3,
  lower_arm = 4,
  upper_leg = 5,
  lower_leg = 6,
};

inline constexpr int kNumParts = 6;        // foreground classes
inline constexpr int kNumLabels = 7;       // parts + background
inline constexpr std::uint8_t kUncertain = 255;

inline const char* part_class_name(PartClass c) {
  switch (c) {
    case PartClass::background: return "background";
    case PartClass::head: return "head";
    case PartClass::torso: return "torso";
    case PartClass::upper_arm: return "upper_arm";
    case PartClass::lower_arm: return "lower_arm";
    case PartClass::upper_leg: return "upper_leg";
    case PartClass::lower_leg: return "lower_leg";
  }
  return "unknown";
}

}  // namespace partprior
