#include <cmath>
#include <vector>

#include "roboswap/core/error.hpp"
#include "roboswap/core/rng.hpp"
#include "roboswap/datagen/generate.hpp"

namespace roboswap::datagen {

namespace {

constexpr float kPi = 3.14159265358979323846f;

// Quantize to the 8-bit grid so in-memory clips round-trip PNG bit-exactly.
float q8(float v) {
  v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<float>(std::lround(v * 255.0f)) / 255.0f;
}

struct Shape {
  enum Kind { capsule, box, disc } kind;
  Vec2 a, b;        // capsule endpoints / box center+dir
  float r = 0.0f;   // capsule radius / disc radius
  float half_len = 0.0f, half_wid = 0.0f;  // box extents along dir/perp
  Rgb color{};
};

bool covers(const Shape& s, float px, float py) {
  switch (s.kind) {
    case Shape::capsule: {
      const float vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
      const float wx = px - s.a.x, wy = py - s.a.y;
      const float len2 = vx * vx + vy * vy;
      float t = len2 > 0.0f ? (wx * vx + wy * vy) / len2 : 0.0f;
      t = t < 0.0f ? 0.0f : (t > 1.0f ? 1.0f : t);
      const float dx = wx - t * vx, dy = wy - t * vy;
      return dx * dx + dy * dy <= s.r * s.r;
    }
    case Shape::box: {
      const float dx = px - s.a.x, dy = py - s.a.y;
      const float along = dx * s.b.x + dy * s.b.y;
      const float across = -dx * s.b.y + dy * s.b.x;
      return std::abs(along) <= s.half_len && std::abs(across) <= s.half_wid;
    }
    case Shape::disc: {
      const float dx = px - s.a.x, dy = py - s.a.y;
      return dx * dx + dy * dy <= s.r * s.r;
    }
  }
  return false;
}

// Directional-light shading ramp, flat per link. Light points up (-y).
float shade_for_angle(float phi) {
  const float s = 0.80f + 0.20f * std::cos(phi + 0.5f * kPi);
  return s < 0.62f ? 0.62f : (s > 1.0f ? 1.0f : s);
}

Rgb shaded(Rgb c, float s) { return {q8(c[0] * s), q8(c[1] * s), q8(c[2] * s)}; }

std::vector<Shape> arm_shapes(const SceneSpec& spec, const float* q, bool gripper_open) {
  const Vec2 anchor{spec.anchor_x, spec.anchor_y};
  const auto pts = forward_kinematics(anchor, spec.link_lengths, q);
  std::vector<Shape> shapes;

  float phi = 0.0f;
  for (int j = 0; j < spec.links(); ++j) {
    phi += q[j];
    Shape s;
    s.kind = Shape::capsule;
    s.a = pts[static_cast<size_t>(j)];
    s.b = pts[static_cast<size_t>(j) + 1];
    s.r = 0.5f * spec.link_widths[static_cast<size_t>(j)];
    s.color = shaded(spec.arm_palette[static_cast<size_t>(j)], shade_for_angle(phi));
    shapes.push_back(s);
  }

  // Gripper, very dark so it never matches background or object colors.
  const Rgb grip{0.08f, 0.08f, 0.10f};
  const float g = spec.gripper_extent();
  const Vec2 ee = pts.back();
  const Vec2 dir{std::cos(phi), std::sin(phi)};
  const Vec2 perp{-dir.y, dir.x};
  if (spec.gripper_style == GripperStyle::parallel_jaw) {
    const float sep = 0.30f * g + (gripper_open ? 0.22f * g : 0.06f * g);
    for (int side = -1; side <= 1; side += 2) {
      Shape f;
      f.kind = Shape::box;
      f.a = {ee.x + dir.x * 0.5f * g + perp.x * sep * side,
             ee.y + dir.y * 0.5f * g + perp.y * sep * side};
      f.b = dir;
      f.half_len = 0.5f * g;
      f.half_wid = std::max(0.6f, 0.11f * g);
      f.color = {q8(grip[0]), q8(grip[1]), q8(grip[2])};
      shapes.push_back(f);
    }
    Shape palm;
    palm.kind = Shape::box;
    palm.a = ee;
    palm.b = dir;
    palm.half_len = std::max(0.6f, 0.12f * g);
    palm.half_wid = sep + 0.12f * g;
    palm.color = {q8(grip[0]), q8(grip[1]), q8(grip[2])};
    shapes.push_back(palm);
  } else {
    Shape stem;
    stem.kind = Shape::box;
    stem.a = {ee.x + dir.x * 0.2f * g, ee.y + dir.y * 0.2f * g};
    stem.b = dir;
    stem.half_len = 0.25f * g;
    stem.half_wid = std::max(0.6f, 0.15f * g);
    stem.color = {q8(grip[0]), q8(grip[1]), q8(grip[2])};
    shapes.push_back(stem);
    Shape disc;
    disc.kind = Shape::disc;
    disc.a = {ee.x + dir.x * 0.55f * g, ee.y + dir.y * 0.55f * g};
    disc.r = 0.40f * g;
    disc.color = {q8(grip[0]), q8(grip[1]), q8(grip[2])};
    shapes.push_back(disc);
  }
  return shapes;
}

// Slowly varying warm texture, channel ranges R [.30,.50] G [.24,.40]
// B [.16,.28]; arm and gripper colors stay outside these bands.
Tensor background_texture(uint64_t seed, int h, int w) {
  Rng rng(seed);
  float freq[6], phase[6];
  for (int i = 0; i < 6; ++i) {
    freq[i] = static_cast<float>(rng.uniform(0.4, 1.3));
    phase[i] = static_cast<float>(rng.uniform(0.0, 2.0 * kPi));
  }
  const float base[3] = {0.40f, 0.32f, 0.22f};
  const float amp[3] = {0.10f, 0.08f, 0.06f};
  const float inv = 1.0f / std::min(h, w);
  Tensor tex({3, h, w});
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const float s1 = std::sin(2.0f * kPi * (freq[c] * x + freq[c + 3] * y) * inv + phase[c]);
        const float s2 = std::sin(2.0f * kPi * (freq[(c + 1) % 3] * y - freq[c + 3] * x) * inv +
                                  phase[c + 3]);
        tex.at3(c, y, x) = q8(base[c] + amp[c] * 0.5f * (s1 + s2));
      }
  }
  return tex;
}

void draw_object(Tensor& frame, const ObjectSpec& obj, float cx, float cy) {
  const int h = frame.dim(1), w = frame.dim(2);
  const Rgb col{q8(obj.color[0]), q8(obj.color[1]), q8(obj.color[2])};
  const float s = obj.size;
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - s - 1)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + s + 1)));
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - s - 1)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + s + 1)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const float px = x + 0.5f, py = y + 0.5f;
      bool inside;
      if (obj.shape == ObjectShape::cube)
        inside = std::abs(px - cx) <= s && std::abs(py - cy) <= s;
      else
        inside = (px - cx) * (px - cx) + (py - cy) * (py - cy) <= s * s;
      if (inside)
        for (int c = 0; c < 3; ++c) frame.at3(c, y, x) = col[static_cast<size_t>(c)];
    }
}

}  // namespace

RenderedClip render_clip(const SceneSpec& spec, const Trajectory& traj) {
  if (traj.joints() != spec.links())
    throw InvalidArgument("render_clip: trajectory joint count does not match spec links");
  const int n = traj.frames();
  const int h = spec.frame_h, w = spec.frame_w;

  RenderedClip clip;
  clip.scene = spec;
  clip.trajectory = traj;
  clip.video = VideoTensor(n, h, w);
  clip.background = VideoTensor(n, h, w);
  clip.masks = MaskSequence(n, h, w);

  const Tensor tex = background_texture(spec.background_texture_seed, h, w);

  for (int i = 0; i < n; ++i) {
    // Clean plate: texture + object, no arm.
    Tensor plate = tex;
    draw_object(plate, spec.object_spec, traj.object_path.at2(i, 0), traj.object_path.at2(i, 1));
    std::copy(plate.data(), plate.data() + plate.numel(), clip.background.frame(i));

    const auto shapes = arm_shapes(spec, traj.joint_angles.data() + static_cast<int64_t>(i) * traj.joints(),
                                   traj.gripper_open[static_cast<size_t>(i)] != 0);
    float* mask = clip.masks.frame(i);
    float* video = clip.video.frame(i);
    const float* bg = clip.background.frame(i);
    const int hw = h * w;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const float px = x + 0.5f, py = y + 0.5f;
        const Shape* hit = nullptr;
        for (const auto& s : shapes)
          if (covers(s, px, py)) hit = &s;  // later shapes draw over earlier
        const int p = y * w + x;
        if (hit) {
          mask[p] = 1.0f;
          for (int c = 0; c < 3; ++c) video[c * hw + p] = hit->color[static_cast<size_t>(c)];
        } else {
          mask[p] = 0.0f;
          for (int c = 0; c < 3; ++c) video[c * hw + p] = bg[c * hw + p];
        }
      }
    }
  }
  return clip;
}

RenderedClip render_paired_oracle(const RenderedClip& clip_a, const SceneSpec& spec_b) {
  if (spec_b.domain_id == clip_a.scene.domain_id)
    throw InvalidArgument("render_paired_oracle: specs must come from different domains");

  // Arm B in clip_a's environment.
  SceneSpec scene = spec_b;
  scene.frame_h = clip_a.scene.frame_h;
  scene.frame_w = clip_a.scene.frame_w;
  scene.anchor_x = clip_a.scene.anchor_x;
  scene.anchor_y = clip_a.scene.anchor_y;
  scene.background_texture_seed = clip_a.scene.background_texture_seed;
  scene.object_spec = clip_a.scene.object_spec;

  const int n = clip_a.trajectory.frames();
  const int J = scene.links();
  Trajectory traj;
  traj.joint_angles = Tensor({n, J});
  traj.end_effector_path = Tensor({n, 2});
  traj.object_path = clip_a.trajectory.object_path;  // environment state is shared
  traj.gripper_open = clip_a.trajectory.gripper_open;
  traj.grasp_frame = clip_a.trajectory.grasp_frame;

  const Vec2 anchor{scene.anchor_x, scene.anchor_y};
  float total = 0.0f;
  for (float l : scene.link_lengths) total += l;

  std::vector<float> q = rest_pose(scene);
  std::vector<float> prev = q;
  for (int i = 0; i < n; ++i) {
    const Vec2 target{clip_a.trajectory.end_effector_path.at2(i, 0),
                      clip_a.trajectory.end_effector_path.at2(i, 1)};
    const float d = dist(anchor, target);
    if (d > total) throw InfeasibleTask("render_paired_oracle: path beyond target arm reach");
    if (J == 2) {
      const float inner = std::abs(scene.link_lengths[0] - scene.link_lengths[1]);
      if (d < inner) throw InfeasibleTask("render_paired_oracle: path inside inner annulus");
      ik_two_link(anchor, scene.link_lengths[0], scene.link_lengths[1], target, prev.data(),
                  q.data());
    } else {
      q = prev;
      // Extra polish iterations keep the retargeting within 1 px.
      ik_damped_least_squares(anchor, scene.link_lengths, target, q.data(), 50, 0.1f);
    }
    const Vec2 ee = fk_end_effector(anchor, scene.link_lengths, q.data());
    if (dist(ee, target) > 1.0f)
      throw InfeasibleTask("render_paired_oracle: retargeting exceeded 1 px tolerance");
    for (int j = 0; j < J; ++j) traj.joint_angles.at2(i, j) = q[j];
    traj.end_effector_path.at2(i, 0) = ee.x;
    traj.end_effector_path.at2(i, 1) = ee.y;
    prev = q;
  }

  RenderedClip out = render_clip(scene, traj);
  out.evaluation_only = true;
  return out;
}

}  // namespace roboswap::datagen
