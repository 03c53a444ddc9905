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

#include "partprior/prior_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "partprior/errors.hpp"

namespace partprior {

EllipseSpec compute_ellipse(const Keypoint& p_i, const Keypoint& p_j,
                            double c_a, double c_b) {
  if (c_a <= 0.0 || c_b <= 0.0)
    throw_error(ErrorKind::invalid_config, "ellipse scale factors must be > 0");

  const double dx = p_j.x - p_i.x;
  const double dy = p_j.y - p_i.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  if (d == 0.0)
    throw_error(ErrorKind::degenerate_segment,
                "cannot fit an ellipse to a zero-length segment");

  EllipseSpec e;
  e.center = {(p_i.x + p_j.x) / 2.0, (p_i.y + p_j.y) / 2.0};
  e.semi_major = c_a * d;
  e.semi_minor = c_b * d;
  // Full-quadrant arctangent; a plain arctan of dy/dx is undefined for
  // vertical segments. Folded to [0, pi) since the ellipse is symmetric.
  e.angle = fold_half_turn(std::atan2(dy, dx));
  return e;
}

PolygonSpec build_torso_polygon(const PersonPose& pose, bool allow_completion) {
  const std::array<Joint, 4> corners = {Joint::l_shoulder, Joint::r_shoulder,
                                        Joint::r_hip, Joint::l_hip};
  int missing = -1;
  int missing_count = 0;
  for (int i = 0; i < 4; ++i) {
    if (!pose.visible(corners[i])) {
      missing = i;
      ++missing_count;
    }
  }

  if (missing_count > 1 || (missing_count == 1 && !allow_completion))
    throw_error(ErrorKind::insufficient_keypoints,
                "torso needs its four corner joints (three with completion)");

  PolygonSpec quad;
  quad.vertices.resize(4);
  for (int i = 0; i < 4; ++i) {
    if (i == missing) continue;
    quad.vertices[i] = pose.joint(corners[i]).pos();
  }
  if (missing_count == 1) {
    // Parallelogram: neighbour corners minus the opposite one.
    const Vec2 prev = quad.vertices[(missing + 3) % 4];
    const Vec2 next = quad.vertices[(missing + 1) % 4];
    const Vec2 opposite = quad.vertices[(missing + 2) % 4];
    quad.vertices[missing] = prev + next - opposite;
  }

  if (quad.area() == 0.0)
    throw_error(ErrorKind::degenerate_segment, "torso corners are collinear");
  return quad;
}

PolygonSpec build_leg_polygon(const PersonPose& pose, Side side,
                              LegSegment segment,
                              PriorConfig::LegShift shift) {
  const Joint hip = side == Side::left ? Joint::l_hip : Joint::r_hip;
  const Joint knee = side == Side::left ? Joint::l_knee : Joint::r_knee;
  const Joint ankle = side == Side::left ? Joint::l_ankle : Joint::r_ankle;
  const Joint top = segment == LegSegment::upper ? hip : knee;
  const Joint bottom = segment == LegSegment::upper ? knee : ankle;

  if (!pose.visible(top) || !pose.visible(bottom) ||
      !pose.visible(Joint::l_hip) || !pose.visible(Joint::r_hip))
    throw_error(ErrorKind::insufficient_keypoints,
                "leg segment needs both endpoints and both hips");

  const Vec2 lh = pose.joint(Joint::l_hip).pos();
  const Vec2 rh = pose.joint(Joint::r_hip).pos();
  const Vec2 hip_center = 0.5 * (lh + rh);
  const Vec2 side_hip = pose.joint(hip).pos();
  const double fraction = segment == LegSegment::upper ? 0.5 : 1.0 / 3.0;
  const double w = fraction * distance(side_hip, hip_center);

  const Vec2 a = pose.joint(top).pos();
  const Vec2 b = pose.joint(bottom).pos();
  if (a.x == b.x && a.y == b.y)
    throw_error(ErrorKind::degenerate_segment, "leg endpoints coincide");
  if (w == 0.0)
    throw_error(ErrorKind::degenerate_segment,
                "hips coincide, leg width is zero");

  const double h =
      shift == PriorConfig::LegShift::half ? w / 2.0 : w;
  PolygonSpec quad;
  quad.vertices = {{a.x - h, a.y}, {a.x + h, a.y}, {b.x + h, b.y},
                   {b.x - h, b.y}};
  if (quad.area() == 0.0)
    throw_error(ErrorKind::degenerate_segment, "leg quadrilateral is flat");
  return quad;
}

namespace {

// Fixed intra-person depth: torso and head behind everything, legs
// behind arms, upper segments behind lower ones. Distinct ranks per
// shape make the paint order a total order.
enum DepthRank : int {
  rank_r_lower_arm = 0,
  rank_l_lower_arm = 1,
  rank_r_upper_arm = 2,
  rank_l_upper_arm = 3,
  rank_r_lower_leg = 4,
  rank_l_lower_leg = 5,
  rank_r_upper_leg = 6,
  rank_l_upper_leg = 7,
  rank_head = 8,
  rank_torso = 9,
};

void add_ellipse(std::vector<PartShape>& shapes, const PersonPose& pose,
                 Joint a, Joint b, PartClass part, int depth,
                 const PriorConfig& config) {
  if (!pose.visible(a) || !pose.visible(b)) return;
  try {
    shapes.push_back({part,
                      compute_ellipse(pose.joint(a), pose.joint(b),
                                      config.c_a, config.c_b),
                      depth});
  } catch (const Error&) {
    // degenerate segment: skip the part
  }
}

void add_leg(std::vector<PartShape>& shapes, const PersonPose& pose,
             Side side, LegSegment segment, PartClass part, int depth,
             const PriorConfig& config) {
  try {
    shapes.push_back(
        {part, build_leg_polygon(pose, side, segment, config.leg_shift),
         depth});
  } catch (const Error&) {
  }
}

}  // namespace

std::vector<PartShape> build_person_shapes(const PersonPose& pose,
                                           const PriorConfig& config) {
  std::vector<PartShape> shapes;
  shapes.reserve(10);

  try {
    shapes.push_back({PartClass::torso,
                      build_torso_polygon(pose, config.recovery), rank_torso});
  } catch (const Error&) {
  }

  add_ellipse(shapes, pose, Joint::neck, Joint::head_top, PartClass::head,
              rank_head, config);

  add_leg(shapes, pose, Side::left, LegSegment::upper, PartClass::upper_leg,
          rank_l_upper_leg, config);
  add_leg(shapes, pose, Side::right, LegSegment::upper, PartClass::upper_leg,
          rank_r_upper_leg, config);
  add_leg(shapes, pose, Side::left, LegSegment::lower, PartClass::lower_leg,
          rank_l_lower_leg, config);
  add_leg(shapes, pose, Side::right, LegSegment::lower, PartClass::lower_leg,
          rank_r_lower_leg, config);

  add_ellipse(shapes, pose, Joint::l_shoulder, Joint::l_elbow,
              PartClass::upper_arm, rank_l_upper_arm, config);
  add_ellipse(shapes, pose, Joint::r_shoulder, Joint::r_elbow,
              PartClass::upper_arm, rank_r_upper_arm, config);
  add_ellipse(shapes, pose, Joint::l_elbow, Joint::l_wrist,
              PartClass::lower_arm, rank_l_lower_arm, config);
  add_ellipse(shapes, pose, Joint::r_elbow, Joint::r_wrist,
              PartClass::lower_arm, rank_r_lower_arm, config);

  return shapes;
}

bool shape_contains_pixel(const PartShape& shape, int x, int y) {
  const Vec2 center{x + 0.5, y + 0.5};
  return std::visit([&](const auto& s) { return s.contains(center); },
                    shape.shape);
}

namespace {

BBox shape_bounds(const PartShape& shape) {
  return std::visit([](const auto& s) { return s.bounds(); }, shape.shape);
}

void paint_shape(const PartShape& shape, LabelGrid& labels,
                 Grid<std::int32_t>& owner, int person_index) {
  const BBox box = shape_bounds(shape);
  const int x0 = std::max(0, static_cast<int>(std::floor(box.min_x - 1.0)));
  const int y0 = std::max(0, static_cast<int>(std::floor(box.min_y - 1.0)));
  const int x1 = std::min(labels.width() - 1,
                          static_cast<int>(std::ceil(box.max_x + 1.0)));
  const int y1 = std::min(labels.height() - 1,
                          static_cast<int>(std::ceil(box.max_y + 1.0)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (shape_contains_pixel(shape, x, y)) {
        labels.at(x, y) = static_cast<std::uint8_t>(shape.part);
        owner.at(x, y) = person_index;
      }
    }
  }
}

}  // namespace

TriStateMap rasterize_priors(std::span<const PersonPose> poses, int width,
                             int height, const PriorConfig& config) {
  TriStateMap map(width, height, 0);
  Grid<std::int32_t> owner(width, height, -1);

  // Back-to-front: fewest visible keypoints first, ties by instance_id.
  std::vector<std::size_t> order(poses.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int va = poses[a].visible_count();
    const int vb = poses[b].visible_count();
    if (va != vb) return va < vb;
    return poses[a].instance_id < poses[b].instance_id;
  });

  std::vector<PersonPose> painted(poses.size());
  for (std::size_t idx : order) {
    if (poses[idx].visible_count() == 0) continue;
    const PersonPose pose =
        config.recovery ? recover_missing(poses[idx]) : poses[idx];
    painted[idx] = pose;

    std::vector<PartShape> shapes = build_person_shapes(pose, config);
    std::sort(shapes.begin(), shapes.end(),
              [](const PartShape& a, const PartShape& b) {
                return a.depth_rank > b.depth_rank;
              });
    for (const PartShape& s : shapes)
      paint_shape(s, map.labels(), owner, static_cast<int>(idx));
  }

  // Uncertain band: square dilation of each person's own F pixels, with
  // the kernel side proportional to that pose's height, minus all of F.
  std::vector<int> kernel_side(poses.size(), 0);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const double h = painted[i].visible_height();
    kernel_side[i] =
        std::max(3, static_cast<int>(std::llround(config.k_d * h)));
  }

  Grid<std::uint8_t> candidate(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::int32_t person = owner.at(x, y);
      if (person < 0) continue;
      const int side = kernel_side[person];
      const int lo = -(side / 2);
      const int hi = side - 1 - side / 2;
      const int yy0 = std::max(0, y + lo), yy1 = std::min(height - 1, y + hi);
      const int xx0 = std::max(0, x + lo), xx1 = std::min(width - 1, x + hi);
      for (int yy = yy0; yy <= yy1; ++yy)
        for (int xx = xx0; xx <= xx1; ++xx) candidate.at(xx, yy) = 1;
    }
  }
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (candidate.at(x, y) && map.at(x, y) == 0) map.at(x, y) = kUncertain;

  return map;
}

}  // namespace partprior
