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

#include "partprior/grid.hpp"
#include "partprior/part_class.hpp"

namespace partprior {

/// Label grid over {background=0, part classes 1..6, kUncertain=255}.
/// Every pixel is exactly one of F (1..6), B (0), U (255).
class TriStateMap {
 public:
  TriStateMap() = default;
  TriStateMap(int width, int height, std::uint8_t fill = 0)
      : labels_(width, height, fill) {}
  explicit TriStateMap(LabelGrid labels) : labels_(std::move(labels)) {}

  int width() const { return labels_.width(); }
  int height() const { return labels_.height(); }

  std::uint8_t& at(int x, int y) { return labels_.at(x, y); }
  std::uint8_t at(int x, int y) const { return labels_.at(x, y); }
  std::uint8_t& operator[](std::size_t i) { return labels_[i]; }
  std::uint8_t operator[](std::size_t i) const { return labels_[i]; }
  std::size_t size() const { return labels_.size(); }

  const LabelGrid& labels() const { return labels_; }
  LabelGrid& labels() { return labels_; }

  static bool is_foreground(std::uint8_t v) { return v >= 1 && v <= kNumParts; }
  static bool is_background(std::uint8_t v) { return v == 0; }
  static bool is_uncertain(std::uint8_t v) { return v == kUncertain; }
  static bool is_valid(std::uint8_t v) {
    return v <= kNumParts || v == kUncertain;
  }

  struct RegionCounts {
    std::int64_t foreground = 0;
    std::int64_t background = 0;
    std::int64_t uncertain = 0;
    std::int64_t total() const { return foreground + background + uncertain; }
  };

  RegionCounts region_counts() const {
    RegionCounts c;
    for (std::uint8_t v : labels_.data()) {
      if (is_foreground(v))
        ++c.foreground;
      else if (is_background(v))
        ++c.background;
      else
        ++c.uncertain;
    }
    return c;
  }

  /// F, U and B partition the grid: every value must be 0..6 or 255.
  bool is_partition() const {
    for (std::uint8_t v : labels_.data())
      if (!is_valid(v)) return false;
    return true;
  }

  friend bool operator==(const TriStateMap& a, const TriStateMap& b) {
    return a.labels_ == b.labels_;
  }

 private:
  LabelGrid labels_;
};

}  // namespace partprior
