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
#include <vector>

#include "partprior/errors.hpp"

namespace partprior {

/// Interleaved 8-bit RGB image.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height)
      : width_(width),
        height_(height),
        rgb_(static_cast<std::size_t>(width) * height * 3, 0) {
    if (width <= 0 || height <= 0)
      throw_error(ErrorKind::invalid_config, "image dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t& at(int x, int y, int channel) {
    return rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }
  std::uint8_t at(int x, int y, int channel) const {
    return rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }

  const std::uint8_t* pixel(int x, int y) const {
    return rgb_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  std::vector<std::uint8_t>& data() { return rgb_; }
  const std::vector<std::uint8_t>& data() const { return rgb_; }

  friend bool operator==(const RgbImage& a, const RgbImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.rgb_ == b.rgb_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> rgb_;
};

}  // namespace partprior
