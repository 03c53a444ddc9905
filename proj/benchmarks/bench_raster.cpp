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

#include "partprior/prior_gen.hpp"
#include "partprior/rng.hpp"

using namespace partprior;

namespace {

PersonPose grid_pose(double cx, double cy, double h) {
  PersonPose pose;
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

}  // namespace

static void BM_RasterizePriors(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::vector<PersonPose> poses;
  for (int i = 0; i < 3; ++i) {
    PersonPose pose = grid_pose(side * (0.3 + 0.2 * i), side * 0.5, side * 0.6);
    pose.instance_id = i;
    poses.push_back(pose);
  }
  PriorConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rasterize_priors(poses, side, side, config));
  }
}
BENCHMARK(BM_RasterizePriors)->Arg(96)->Arg(160)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
