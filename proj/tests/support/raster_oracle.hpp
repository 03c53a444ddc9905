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

// Brute-force point-in-shape oracle. Written independently of the
// library's membership predicates on purpose: the ellipse test works in
// rotated coordinates against (b u)^2 + (a v)^2 <= (a b)^2, the polygon
// test is the classic PNPOLY parity walk plus an explicit boundary
// scan. Tests compare rasterizer output against these, pixel for pixel.

#include <cmath>
#include <vector>

#include "partprior/geometry.hpp"
#include "partprior/grid.hpp"

namespace oracle {

inline bool ellipse_contains(const partprior::EllipseSpec& e, double px,
                             double py) {
  const double dx = px - e.center.x;
  const double dy = py - e.center.y;
  const double c = std::cos(-e.angle);
  const double s = std::sin(-e.angle);
  const double u = c * dx - s * dy;  // rotate the point by -angle
  const double v = s * dx + c * dy;
  const double a = e.semi_major;
  const double b = e.semi_minor;
  return b * b * u * u + a * a * v * v <= a * a * b * b;
}

inline bool point_on_edge(double px, double py, partprior::Vec2 a,
                          partprior::Vec2 b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double apx = px - a.x, apy = py - a.y;
  if (abx * apy - aby * apx != 0.0) return false;
  const double t = apx * abx + apy * aby;
  return t >= 0.0 && t <= abx * abx + aby * aby;
}

inline bool polygon_contains(const partprior::PolygonSpec& poly, double px,
                             double py) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    if (point_on_edge(px, py, v[j], v[i])) return true;

  // PNPOLY (W. R. Franklin) parity test.
  bool c = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (((v[i].y > py) != (v[j].y > py)) &&
        (px < (v[j].x - v[i].x) * (py - v[i].y) / (v[j].y - v[i].y) + v[i].x))
      c = !c;
  }
  return c;
}

/// Full-grid membership mask for one shape, sampling pixel centers.
template <typename Shape, typename Contains>
partprior::LabelGrid brute_force_mask(const Shape& shape, int width,
                                      int height, Contains contains) {
  partprior::LabelGrid mask(width, height, 0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (contains(shape, x + 0.5, y + 0.5)) mask.at(x, y) = 1;
  return mask;
}

inline partprior::LabelGrid brute_force_ellipse(
    const partprior::EllipseSpec& e, int width, int height) {
  return brute_force_mask(e, width, height,
                          [](const partprior::EllipseSpec& s, double x,
                             double y) { return ellipse_contains(s, x, y); });
}

inline partprior::LabelGrid brute_force_polygon(
    const partprior::PolygonSpec& p, int width, int height) {
  return brute_force_mask(p, width, height,
                          [](const partprior::PolygonSpec& s, double x,
                             double y) { return polygon_contains(s, x, y); });
}

}  // namespace oracle
