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

#include <span>
#include <variant>
#include <vector>

#include "partprior/geometry.hpp"
#include "partprior/part_class.hpp"
#include "partprior/pose.hpp"
#include "partprior/tri_state_map.hpp"

namespace partprior {

/// Knobs for keypoint -> tri-state prior conversion.
struct PriorConfig {
  double c_a = 0.6;   // ellipse semi-major scale
  double c_b = 0.22;  // ellipse semi-minor scale
  double k_d = 0.1;   // dilation kernel side as a fraction of pose height

  /// How leg quadrilateral endpoints spread around the bone: half keeps
  /// the quad's total width equal to the estimated width w, full doubles
  /// it (each endpoint shifted by the full w to both sides).
  enum class LegShift { half, full };
  LegShift leg_shift = LegShift::half;

  /// Apply missing-keypoint recovery (neck midpoint, torso
  /// parallelogram completion) before building shapes.
  bool recovery = true;
};

/// Midpoint-centered ellipse spanning two keypoints: semi-axes are
/// c_a and c_b times the keypoint distance, the major axis follows the
/// segment direction folded into [0, pi).
/// Throws ErrorKind::degenerate_segment when the keypoints coincide.
EllipseSpec compute_ellipse(const Keypoint& p_i, const Keypoint& p_j,
                            double c_a, double c_b);

/// Quadrilateral L-shoulder, R-shoulder, R-hip, L-hip. When exactly one
/// corner is missing and completion is allowed, it is filled in as a
/// parallelogram (sum of its two neighbours minus the opposite corner).
/// Throws ErrorKind::insufficient_keypoints when too few corners exist.
PolygonSpec build_torso_polygon(const PersonPose& pose,
                                bool allow_completion = true);

enum class Side { left, right };
enum class LegSegment { upper, lower };

/// Leg quadrilateral: the estimated width w is 1/2 (upper) or 1/3
/// (lower) of the distance from the side's hip to the hip center; the
/// two endpoint joints shift horizontally left and right to form the
/// quad. Throws insufficient_keypoints / degenerate_segment.
PolygonSpec build_leg_polygon(const PersonPose& pose, Side side,
                              LegSegment segment,
                              PriorConfig::LegShift shift =
                                  PriorConfig::LegShift::half);

/// One part template with its intra-person paint depth.
/// Lower depth_rank means nearer to the camera (painted later).
struct PartShape {
  PartClass part;
  std::variant<EllipseSpec, PolygonSpec> shape;
  int depth_rank;
};

/// All templates derivable from one (already recovered, if desired)
/// pose. Parts whose joints are missing or degenerate are skipped.
std::vector<PartShape> build_person_shapes(const PersonPose& pose,
                                           const PriorConfig& config);

/// Paint every person's templates into a tri-state map.
///
/// Persons are painted back-to-front by ascending visible-keypoint
/// count (ties by ascending instance_id), so the most complete pose
/// ends up frontmost. Within a person, shapes paint back-to-front by
/// descending depth_rank. Painted pixels form F; the uncertain band U
/// is the square dilation of each person's F pixels (side
/// round(k_d * pose height), at least 3) minus F; everything else is B.
TriStateMap rasterize_priors(std::span<const PersonPose> poses, int width,
                             int height, const PriorConfig& config);

/// Pixel membership for painting: the pixel's center point
/// (x + 0.5, y + 0.5) lies inside or on the shape boundary.
bool shape_contains_pixel(const PartShape& shape, int x, int y);

}  // namespace partprior
