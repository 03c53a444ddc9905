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

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "partprior/pose.hpp"
#include "partprior/prob_map.hpp"
#include "partprior/rng.hpp"

namespace testutil {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("partprior_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Upright fully visible pose centered at (cx, cy) with height h.
inline partprior::PersonPose standing_pose(double cx, double cy, double h) {
  using partprior::Joint;
  partprior::PersonPose pose;
  auto set = [&](Joint j, double x, double y) {
    pose.joint(j) = {x, y, true};
  };
  set(Joint::head_top, cx, cy - 0.50 * h);
  set(Joint::neck, cx, cy - 0.34 * h);
  set(Joint::l_shoulder, cx - 0.13 * h, cy - 0.34 * h);
  set(Joint::r_shoulder, cx + 0.13 * h, cy - 0.34 * h);
  set(Joint::l_elbow, cx - 0.15 * h, cy - 0.17 * h);
  set(Joint::r_elbow, cx + 0.15 * h, cy - 0.17 * h);
  set(Joint::l_wrist, cx - 0.16 * h, cy - 0.01 * h);
  set(Joint::r_wrist, cx + 0.16 * h, cy - 0.01 * h);
  set(Joint::l_hip, cx - 0.07 * h, cy);
  set(Joint::r_hip, cx + 0.07 * h, cy);
  set(Joint::l_knee, cx - 0.07 * h, cy + 0.25 * h);
  set(Joint::r_knee, cx + 0.07 * h, cy + 0.25 * h);
  set(Joint::l_ankle, cx - 0.07 * h, cy + 0.48 * h);
  set(Joint::r_ankle, cx + 0.07 * h, cy + 0.48 * h);
  return pose;
}

/// Random normalized distribution map with entries bounded away from 0.
inline partprior::ProbMap random_prob_map(int width, int height, int channels,
                                          partprior::Rng& rng) {
  partprior::ProbMap probs(width, height, channels);
  for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
    double sum = 0.0;
    double* p = probs.pixel(i);
    for (int c = 0; c < channels; ++c) {
      p[c] = 0.05 + rng.uniform();
      sum += p[c];
    }
    for (int c = 0; c < channels; ++c) p[c] /= sum;
  }
  return probs;
}

inline std::vector<unsigned char> read_file_bytes(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<unsigned char>((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
}

/// Byte-level recursive directory comparison.
inline bool directories_identical(const std::filesystem::path& a,
                                  const std::filesystem::path& b) {
  namespace fs = std::filesystem;
  std::vector<fs::path> rel_a, rel_b;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b));
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return false;
  for (const fs::path& rel : rel_a)
    if (read_file_bytes(a / rel) != read_file_bytes(b / rel)) return false;
  return true;
}

}  // namespace testutil
