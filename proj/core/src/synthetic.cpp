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

#include "partprior/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "partprior/dataset.hpp"
#include "partprior/errors.hpp"
#include "partprior/geometry.hpp"
#include "partprior/grid.hpp"
#include "partprior/image.hpp"
#include "partprior/part_class.hpp"
#include "partprior/png_io.hpp"
#include "partprior/pose.hpp"
#include "partprior/rng.hpp"

namespace partprior {

namespace {

// Rendered ground-truth geometry: capsules for limbs, an ellipse for
// the head, an expanded quad for the torso. All thicker than the
// matching priors so default priors stay high precision.
struct Capsule {
  Vec2 a, b;
  double radius;

  bool contains(Vec2 p) const {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 closest = a + t * ab;
    return distance(p, closest) <= radius;
  }
};

struct GtPart {
  PartClass part;
  int kind;  // 0 capsule, 1 ellipse, 2 polygon
  Capsule capsule;
  EllipseSpec ellipse;
  PolygonSpec polygon;

  bool contains(Vec2 p) const {
    switch (kind) {
      case 0: return capsule.contains(p);
      case 1: return ellipse.contains(p);
      default: return polygon.contains(p);
    }
  }
};

struct Figure {
  PersonPose pose;  // true joints, all visible
  std::vector<GtPart> parts;  // painted in order (back to front)
  std::array<std::array<double, 3>, kNumLabels> colors{};  // per-class mean
};

Vec2 polar(Vec2 from, double angle_from_down, double length) {
  // angle 0 points straight down, positive leans towards +x.
  return {from.x + std::sin(angle_from_down) * length,
          from.y + std::cos(angle_from_down) * length};
}

Figure sample_figure(Rng& rng, double cx, double cy, double h) {
  Figure fig;
  auto set = [&](Joint j, Vec2 p) {
    Keypoint& k = fig.pose.joint(j);
    k.x = p.x;
    k.y = p.y;
    k.visible = true;
  };

  const double lean = rng.uniform(-0.05, 0.05);  // radians
  const double shoulder_y = cy - h * rng.uniform(0.33, 0.355);
  const double shoulder_half = h * rng.uniform(0.115, 0.13);
  const double hip_half = h * rng.uniform(0.05, 0.058);
  const double shoulder_cx = cx + std::tan(lean) * (cy - shoulder_y);

  const Vec2 ls{shoulder_cx - shoulder_half, shoulder_y};
  const Vec2 rs{shoulder_cx + shoulder_half, shoulder_y};
  const Vec2 neck = 0.5 * (ls + rs);
  const Vec2 head_top{neck.x + rng.uniform(-0.01, 0.01) * h,
                      neck.y - h * rng.uniform(0.16, 0.18)};
  const Vec2 lh{cx - hip_half, cy};
  const Vec2 rh{cx + hip_half, cy};

  set(Joint::l_shoulder, ls);
  set(Joint::r_shoulder, rs);
  set(Joint::neck, neck);
  set(Joint::head_top, head_top);
  set(Joint::l_hip, lh);
  set(Joint::r_hip, rh);

  // Arms hang close to the torso and legs stay nearly parallel so a
  // single figure's silhouette covers its own keypoint hull.
  const double ua_len = h * rng.uniform(0.15, 0.17);
  const double la_len = h * rng.uniform(0.14, 0.16);
  const double l_ua = rng.uniform(-0.02, 0.03);   // outward positive
  const double r_ua = rng.uniform(-0.02, 0.03);
  const Vec2 le = polar(ls, -l_ua, ua_len);
  const Vec2 re = polar(rs, r_ua, ua_len);
  const Vec2 lw = polar(le, -(l_ua + rng.uniform(-0.05, 0.01)), la_len);
  const Vec2 rw = polar(re, r_ua + rng.uniform(-0.05, 0.01), la_len);
  set(Joint::l_elbow, le);
  set(Joint::r_elbow, re);
  set(Joint::l_wrist, lw);
  set(Joint::r_wrist, rw);

  const double ul_len = h * rng.uniform(0.24, 0.26);
  const double ll_len = h * rng.uniform(0.22, 0.24);
  const double l_leg = rng.uniform(-0.008, 0.012);
  const double r_leg = rng.uniform(-0.008, 0.012);
  const Vec2 lk = polar(lh, -l_leg, ul_len);
  const Vec2 rk = polar(rh, r_leg, ul_len);
  const Vec2 la = polar(lk, -(l_leg + rng.uniform(-0.015, 0.015)), ll_len);
  const Vec2 ra = polar(rk, r_leg + rng.uniform(-0.015, 0.015), ll_len);
  set(Joint::l_knee, lk);
  set(Joint::r_knee, rk);
  set(Joint::l_ankle, la);
  set(Joint::r_ankle, ra);

  // Ground-truth part shapes, painted back to front: torso, head, legs,
  // arms (mirrors the occlusion assumption used for priors). Limb
  // thickness stays close to what the keypoint templates plus the
  // uncertainty band can reach.
  const double arm_r = h * 0.045;
  const double leg_r_upper = h * 0.07;
  const double leg_r_lower = h * 0.066;

  PolygonSpec torso;
  torso.vertices = {ls, rs, rh, lh};
  // Waist flare and a small pelvis drop so the silhouette covers the
  // flank wedge between hanging arms and the leg column.
  torso.vertices[2] = torso.vertices[2] + Vec2{0.065 * h, 0.05 * h};
  torso.vertices[3] = torso.vertices[3] + Vec2{-0.065 * h, 0.05 * h};
  const Vec2 centroid = 0.25 * (ls + rs + rh + lh);
  for (Vec2& v : torso.vertices) v = centroid + 1.06 * (v - centroid);
  // Shoulder corners rise to take in the trapezius band beside the neck.
  torso.vertices[0].y -= 0.09 * h;
  torso.vertices[1].y -= 0.09 * h;

  EllipseSpec head;
  const double head_d = distance(neck, head_top);
  head.center = 0.5 * (neck + head_top);
  head.semi_major = 0.64 * head_d;
  head.semi_minor = 0.46 * head_d;
  head.angle = fold_half_turn(
      std::atan2(head_top.y - neck.y, head_top.x - neck.x));

  GtPart part;
  part.kind = 2;
  part.part = PartClass::torso;
  part.polygon = torso;
  fig.parts.push_back(part);

  part = GtPart{};
  part.kind = 1;
  part.part = PartClass::head;
  part.ellipse = head;
  fig.parts.push_back(part);

  auto add_capsule = [&](PartClass cls, Vec2 a, Vec2 b, double r) {
    GtPart p;
    p.kind = 0;
    p.part = cls;
    p.capsule = {a, b, r};
    fig.parts.push_back(p);
  };
  add_capsule(PartClass::upper_leg, lh, lk, leg_r_upper);
  add_capsule(PartClass::upper_leg, rh, rk, leg_r_upper);
  add_capsule(PartClass::lower_leg, lk, la, leg_r_lower);
  add_capsule(PartClass::lower_leg, rk, ra, leg_r_lower);
  add_capsule(PartClass::upper_arm, ls, le, arm_r);
  add_capsule(PartClass::upper_arm, rs, re, arm_r);
  add_capsule(PartClass::lower_arm, le, lw, arm_r * 0.92);
  add_capsule(PartClass::lower_arm, re, rw, arm_r * 0.92);

  // Per-figure color family jitter around the fixed class means.
  const double base[kNumLabels][3] = {
      {0, 0, 0},           // background (unused here)
      {205, 170, 140},     // head: skin
      {65, 85, 190},       // torso
      {185, 70, 60},       // upper arm
      {215, 180, 150},     // lower arm: overlaps the head family
      {60, 60, 90},        // upper leg
      {150, 148, 165},     // lower leg
  };
  for (int c = 1; c < kNumLabels; ++c)
    for (int k = 0; k < 3; ++k)
      fig.colors[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] =
          base[c][k] + rng.gaussian(0.0, 8.0);

  return fig;
}

bool in_bounds(const Figure& fig, int width, int height) {
  for (const Keypoint& k : fig.pose.joints) {
    if (k.x < 3.0 || k.x > width - 4.0 || k.y < 3.0 || k.y > height - 4.0)
      return false;
  }
  return true;
}

// Convex hull of the 14 joints (Andrew monotone chain).
std::vector<Vec2> joint_hull(const PersonPose& pose) {
  std::vector<Vec2> pts;
  for (const Keypoint& k : pose.joints) pts.push_back({k.x, k.y});
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower &&
           cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool strictly_inside_hull(const std::vector<Vec2>& hull, Vec2 p) {
  const std::size_t n = hull.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (cross(hull[i] - hull[j], p - hull[j]) <= 0.0) return false;
  }
  return true;
}

// Hull-interior pixels must be foreground; keeps single-figure samples
// usable as a geometric sanity check on the whole renderer.
bool hull_covered(const Figure& fig, const LabelGrid& labels) {
  const std::vector<Vec2> hull = joint_hull(fig.pose);
  if (hull.size() < 3) return false;
  BBox box{hull[0].x, hull[0].y, hull[0].x, hull[0].y};
  for (const Vec2& v : hull) {
    box.min_x = std::min(box.min_x, v.x);
    box.min_y = std::min(box.min_y, v.y);
    box.max_x = std::max(box.max_x, v.x);
    box.max_y = std::max(box.max_y, v.y);
  }
  for (int y = std::max(0, static_cast<int>(box.min_y) - 1);
       y <= std::min(labels.height() - 1, static_cast<int>(box.max_y) + 1); ++y) {
    for (int x = std::max(0, static_cast<int>(box.min_x) - 1);
         x <= std::min(labels.width() - 1, static_cast<int>(box.max_x) + 1); ++x) {
      if (!strictly_inside_hull(hull, {x + 0.5, y + 0.5})) continue;
      if (labels.at(x, y) == 0) return false;
    }
  }
  return true;
}

void paint_figure(const Figure& fig, LabelGrid& labels) {
  for (const GtPart& part : fig.parts) {
    // Conservative bbox from the joints plus the largest radius in play.
    BBox box{1e30, 1e30, -1e30, -1e30};
    auto grow = [&](Vec2 v, double r) {
      box.min_x = std::min(box.min_x, v.x - r);
      box.min_y = std::min(box.min_y, v.y - r);
      box.max_x = std::max(box.max_x, v.x + r);
      box.max_y = std::max(box.max_y, v.y + r);
    };
    if (part.kind == 0) {
      grow(part.capsule.a, part.capsule.radius);
      grow(part.capsule.b, part.capsule.radius);
    } else if (part.kind == 1) {
      const BBox b = part.ellipse.bounds();
      grow({b.min_x, b.min_y}, 0);
      grow({b.max_x, b.max_y}, 0);
    } else {
      const BBox b = part.polygon.bounds();
      grow({b.min_x, b.min_y}, 0);
      grow({b.max_x, b.max_y}, 0);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(box.min_x)) - 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(box.min_y)) - 1);
    const int x1 =
        std::min(labels.width() - 1, static_cast<int>(std::ceil(box.max_x)) + 1);
    const int y1 = std::min(labels.height() - 1,
                            static_cast<int>(std::ceil(box.max_y)) + 1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (part.contains({x + 0.5, y + 0.5}))
          labels.at(x, y) = static_cast<std::uint8_t>(part.part);
  }
}

struct Sample {
  RgbImage image;
  LabelGrid gt;
  FullMask mask;
  std::vector<PersonPose> annotations;
};

Sample make_sample(const SynthConfig& config, std::uint64_t sample_seed) {
  Rng rng(sample_seed);
  const int width = config.width;
  const int height = config.height;

  Sample sample;
  sample.gt = LabelGrid(width, height, 0);
  sample.mask = FullMask(width, height, 0);
  sample.image = RgbImage(width, height);

  const int n_figures = rng.uniform_int(1, 3);
  std::vector<Figure> figures;
  double prev_cx = 0.0;

  const double h_max = (height - 10.0) / 1.12;
  for (int f = 0; f < n_figures; ++f) {
    const double h = rng.uniform(0.72, 0.99) * h_max;
    double cx;
    if (f > 0 && rng.bernoulli(config.occlusion_rate)) {
      const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
      cx = prev_cx + side * rng.uniform(0.18, 0.34) * h;
    } else {
      cx = rng.uniform(0.24, 0.76) * width;
    }
    cx = std::clamp(cx, 0.22 * width, 0.78 * width);
    const double cy = height * rng.uniform(0.50, 0.56);

    // Resample a few times until the figure fits and, for single-figure
    // samples, covers its own keypoint hull.
    Figure fig;
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      fig = sample_figure(rng, cx, cy, h);
      if (!in_bounds(fig, width, height)) continue;
      if (n_figures == 1) {
        LabelGrid probe(width, height, 0);
        paint_figure(fig, probe);
        ok = hull_covered(fig, probe);
      } else {
        ok = true;
      }
    }
    if (!ok) continue;  // extremely unlucky; sample simply has fewer figures
    fig.pose.instance_id = f;
    figures.push_back(fig);
    prev_cx = cx;
  }

  // Painterly order: index order, later figures in front.
  for (const Figure& fig : figures) paint_figure(fig, sample.gt);

  // Background: base color, low-frequency gradient, per-pixel noise.
  const double bg[3] = {100 + rng.gaussian(0, 6), 125 + rng.gaussian(0, 6),
                        95 + rng.gaussian(0, 6)};
  const double gx = rng.uniform(-36, 36), gy = rng.uniform(-36, 36);

  // Figure ownership for color lookup (front figure wins, like gt).
  Grid<std::int32_t> owner(width, height, -1);
  for (std::size_t f = 0; f < figures.size(); ++f) {
    LabelGrid probe(width, height, 0);
    paint_figure(figures[f], probe);
    for (std::size_t i = 0; i < probe.size(); ++i)
      if (probe[i]) owner[i] = static_cast<std::int32_t>(f);
  }

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const std::uint8_t label = sample.gt[i];
      double c[3];
      if (label == 0) {
        const double fx = x / static_cast<double>(width) - 0.5;
        const double fy = y / static_cast<double>(height) - 0.5;
        for (int k = 0; k < 3; ++k) c[k] = bg[k] + gx * fx + gy * fy;
      } else {
        const auto& family =
            figures[static_cast<std::size_t>(owner[i])].colors[label];
        for (int k = 0; k < 3; ++k) c[k] = family[static_cast<std::size_t>(k)];
        sample.mask[i] = 1;
      }
      for (int k = 0; k < 3; ++k) {
        const double v = c[k] + rng.gaussian(0.0, 8.0);
        sample.image.data()[i * 3 + k] =
            static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }

  // Annotations: true joints with per-joint dropout.
  for (const Figure& fig : figures) {
    PersonPose pose = fig.pose;
    for (Keypoint& k : pose.joints) {
      if (rng.bernoulli(config.missing_joint_rate)) {
        k = Keypoint{};  // invisible keypoints carry no coordinates
      }
    }
    sample.annotations.push_back(pose);
  }
  return sample;
}

void write_split(const SynthConfig& config, const std::filesystem::path& dir,
                 int count, std::uint64_t split_tag) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "gt_masks");
  fs::create_directories(dir / "full_masks");

  std::vector<ImagePoses> poses;
  for (int i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "%06d", i);
    const Sample sample =
        make_sample(config, mix_seed(config.seed, split_tag,
                                     static_cast<std::uint64_t>(i)));
    write_rgb_png(dir / "images" / (std::string(id) + ".png"), sample.image);
    write_label_png(dir / "gt_masks" / (std::string(id) + ".png"), sample.gt);
    write_label_png(dir / "full_masks" / (std::string(id) + ".png"),
                    sample.mask);
    ImagePoses entry;
    entry.id = id;
    entry.width = config.width;
    entry.height = config.height;
    entry.persons = sample.annotations;
    poses.push_back(std::move(entry));
  }
  write_native_poses(dir / "poses.json", poses);
}

}  // namespace

void generate_synthetic_corpus(const SynthConfig& config,
                               const std::filesystem::path& out_dir) {
  if (config.n_train < 1 || config.n_test < 0)
    throw_error(ErrorKind::invalid_config, "corpus sizes must be positive");
  if (config.width < 32 || config.height < 32)
    throw_error(ErrorKind::invalid_config, "corpus images must be at least 32x32");
  if (config.occlusion_rate < 0 || config.occlusion_rate > 1 ||
      config.missing_joint_rate < 0 || config.missing_joint_rate > 1)
    throw_error(ErrorKind::invalid_config, "rates must lie in [0, 1]");

  write_split(config, out_dir / "train", config.n_train, 1);
  write_split(config, out_dir / "test", config.n_test, 2);
}

}  // namespace partprior
