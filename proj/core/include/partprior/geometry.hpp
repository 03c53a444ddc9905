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

#include <cmath>
#include <vector>

namespace partprior {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct BBox {
  double min_x, min_y, max_x, max_y;
};

/// Axis lengths are half-axes; angle is the major-axis direction in
/// [0, pi) (an ellipse is pi-periodic).
struct EllipseSpec {
  Vec2 center;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double angle = 0.0;

  /// True when p is inside or on the boundary.
  bool contains(Vec2 p) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec2 d = p - center;
    const double u = (c * d.x + s * d.y) / semi_major;
    const double v = (-s * d.x + c * d.y) / semi_minor;
    return u * u + v * v <= 1.0;
  }

  BBox bounds() const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double ex = std::sqrt(semi_major * semi_major * c * c +
                                semi_minor * semi_minor * s * s);
    const double ey = std::sqrt(semi_major * semi_major * s * s +
                                semi_minor * semi_minor * c * c);
    return {center.x - ex, center.y - ey, center.x + ex, center.y + ey};
  }
};

/// Simple polygon given as an ordered vertex list.
struct PolygonSpec {
  std::vector<Vec2> vertices;

  /// Even-odd membership; points exactly on an edge count as inside.
  bool contains(Vec2 p) const;

  BBox bounds() const;

  /// Signed shoelace area, absolute value.
  double area() const;
};

/// Fold an angle into [0, pi).
inline double fold_half_turn(double angle) {
  const double pi = 3.14159265358979323846;
  double a = std::fmod(angle, pi);
  if (a < 0.0) a += pi;
  if (a >= pi) a -= pi;
  return a;
}

}  // namespace partprior
