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

#include "partprior/geometry.hpp"

#include <algorithm>
#include <limits>

namespace partprior {

namespace {

// p on the closed segment [a, b]?
bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  if (cross(ab, ap) != 0.0) return false;
  const double t = dot(ap, ab);
  return t >= 0.0 && t <= dot(ab, ab);
}

}  // namespace

bool PolygonSpec::contains(Vec2 p) const {
  const std::size_t n = vertices.size();
  if (n < 3) return false;

  // Boundary points count as inside. Checked explicitly so that the
  // parity test below only has to be right for strictly interior or
  // exterior points (pixel centers can land exactly on template edges).
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(p, vertices[j], vertices[i])) return true;
  }

  // Even-odd rule: count crossings of the ray towards +x.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = vertices[j];
    const Vec2 b = vertices[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

BBox PolygonSpec::bounds() const {
  BBox box{std::numeric_limits<double>::max(),
           std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::lowest()};
  for (const Vec2& v : vertices) {
    box.min_x = std::min(box.min_x, v.x);
    box.min_y = std::min(box.min_y, v.y);
    box.max_x = std::max(box.max_x, v.x);
    box.max_y = std::max(box.max_y, v.y);
  }
  return box;
}

double PolygonSpec::area() const {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += cross(vertices[j], vertices[i]);
  }
  return std::abs(twice) / 2.0;
}

}  // namespace partprior
