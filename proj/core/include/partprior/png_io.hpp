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

#include "partprior/grid.hpp"
#include "partprior/image.hpp"
#include "partprior/tri_state_map.hpp"

namespace partprior {

// Focused 8-bit PNG codec (zlib-backed). Writes are byte-deterministic:
// fixed palette, filter 0 scanlines, fixed compression level, no
// ancillary chunks - so identical grids give identical files. Reads
// accept non-interlaced 8-bit gray, RGB, RGBA and palette files from
// other encoders.

/// Label/tri-state masks as single-channel indexed PNG (color type 3).
/// Palette indices are the label values: 0 background, 1..6 parts,
/// 255 uncertain. Round-trips bit-exactly through read_label_png.
void write_label_png(const std::filesystem::path& path, const LabelGrid& labels);
void write_label_png(const std::filesystem::path& path, const TriStateMap& map);

/// Raw palette indices (or gray values for type-0 files).
LabelGrid read_label_png(const std::filesystem::path& path);
TriStateMap read_tri_state_png(const std::filesystem::path& path);

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);
RgbImage read_rgb_png(const std::filesystem::path& path);

}  // namespace partprior
